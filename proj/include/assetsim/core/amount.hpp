#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace assetsim {

/// Fixed-point currency value: 1 coin = 10^8 base units. All arithmetic is
/// exact and throws std::overflow_error / std::underflow_error on wrap.
class Amount
{
public:
	static constexpr std::uint64_t units_per_coin = 100'000'000;

	constexpr Amount () = default;
	constexpr explicit Amount (std::uint64_t base_units) :
		units_ (base_units)
	{
	}

	static constexpr Amount coins (std::uint64_t whole) { return Amount{ whole * units_per_coin }; }
	/// Parses "0.4", "10", "1.00000001". At most 8 fractional digits.
	static Amount parse (std::string_view text);

	constexpr std::uint64_t units () const { return units_; }
	constexpr bool is_zero () const { return units_ == 0; }
	/// Always renders 8 fractional digits, e.g. "0.40000000".
	std::string to_string () const;

	Amount operator+ (Amount other) const;
	Amount operator- (Amount other) const;
	Amount & operator+= (Amount other) { return *this = *this + other; }
	Amount & operator-= (Amount other) { return *this = *this - other; }

	constexpr auto operator<=> (const Amount &) const = default;

private:
	std::uint64_t units_{ 0 };
};

}
