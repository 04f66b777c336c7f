#include <assetsim/core/amount.hpp>

#include <limits>
#include <stdexcept>

namespace assetsim {

Amount Amount::parse (std::string_view text)
{
	if (text.empty ())
		throw std::invalid_argument ("empty amount");
	auto dot = text.find ('.');
	auto whole_part = text.substr (0, dot);
	auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr (dot + 1);
	if (whole_part.empty () && frac_part.empty ())
		throw std::invalid_argument ("malformed amount: " + std::string (text));
	if (frac_part.size () > 8)
		throw std::invalid_argument ("amount has more than 8 decimal places: " + std::string (text));

	constexpr auto max = std::numeric_limits<std::uint64_t>::max ();
	std::uint64_t whole = 0;
	for (char c : whole_part)
	{
		if (c < '0' || c > '9')
			throw std::invalid_argument ("malformed amount: " + std::string (text));
		if (whole > (max - 9) / 10)
			throw std::overflow_error ("amount overflow");
		whole = whole * 10 + static_cast<std::uint64_t> (c - '0');
	}
	std::uint64_t frac = 0;
	for (std::size_t i = 0; i < 8; ++i)
	{
		char c = i < frac_part.size () ? frac_part[i] : '0';
		if (c < '0' || c > '9')
			throw std::invalid_argument ("malformed amount: " + std::string (text));
		frac = frac * 10 + static_cast<std::uint64_t> (c - '0');
	}
	if (whole > (max - frac) / units_per_coin)
		throw std::overflow_error ("amount overflow");
	return Amount{ whole * units_per_coin + frac };
}

std::string Amount::to_string () const
{
	auto frac = std::to_string (units_ % units_per_coin);
	return std::to_string (units_ / units_per_coin) + "." + std::string (8 - frac.size (), '0') + frac;
}

Amount Amount::operator+ (Amount other) const
{
	if (units_ > std::numeric_limits<std::uint64_t>::max () - other.units_)
		throw std::overflow_error ("amount overflow");
	return Amount{ units_ + other.units_ };
}

Amount Amount::operator- (Amount other) const
{
	if (other.units_ > units_)
		throw std::underflow_error ("amount underflow");
	return Amount{ units_ - other.units_ };
}

}
