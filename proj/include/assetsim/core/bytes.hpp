#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace assetsim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s)
{
	return { reinterpret_cast<const std::uint8_t *> (s.data ()), s.size () };
}

/// 32-byte SHA-256 digest. Ordered lexicographically by byte value.
struct Digest
{
	std::array<std::uint8_t, 32> bytes{};

	auto operator<=> (const Digest &) const = default;

	bool is_zero () const;
	std::string hex () const { return to_hex (bytes); }
	static Digest from_hex (std::string_view hex);
	ByteView view () const { return bytes; }
};

Digest sha256 (ByteView data);
inline Digest sha256 (std::string_view s) { return sha256 (as_bytes (s)); }

}
