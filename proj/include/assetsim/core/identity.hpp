#pragma once

#include <assetsim/core/bytes.hpp>

#include <array>
#include <compare>
#include <string_view>

namespace assetsim {

struct PublicKey
{
	std::array<std::uint8_t, 32> bytes{};
	auto operator<=> (const PublicKey &) const = default;
	std::string hex () const { return to_hex (bytes); }
	static PublicKey from_hex (std::string_view hex);
};

struct Signature
{
	std::array<std::uint8_t, 64> bytes{};
	auto operator<=> (const Signature &) const = default;
};

/// A key pair derived deterministically from a label. Ed25519 signatures are
/// themselves deterministic, so identical runs produce identical bytes.
class Identity
{
public:
	static Identity from_seed (std::string_view label);

	const PublicKey & public_key () const { return public_; }
	Signature sign (ByteView message) const;

	bool operator== (const Identity & other) const { return public_ == other.public_; }

private:
	Identity () = default;

	PublicKey public_;
	std::array<std::uint8_t, 64> secret_{};
};

bool verify (const PublicKey & key, ByteView message, const Signature & sig);

}
