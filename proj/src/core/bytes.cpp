#include <assetsim/core/bytes.hpp>

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

namespace assetsim {

namespace {
int nibble (char c)
{
	if (c >= '0' && c <= '9')
		return c - '0';
	if (c >= 'a' && c <= 'f')
		return c - 'a' + 10;
	if (c >= 'A' && c <= 'F')
		return c - 'A' + 10;
	return -1;
}
}

std::string to_hex (ByteView data)
{
	static constexpr char digits[] = "0123456789abcdef";
	std::string out;
	out.reserve (data.size () * 2);
	for (auto b : data)
	{
		out.push_back (digits[b >> 4]);
		out.push_back (digits[b & 0xf]);
	}
	return out;
}

Bytes from_hex (std::string_view hex)
{
	if (hex.size () % 2 != 0)
		throw std::invalid_argument ("odd-length hex string");
	Bytes out;
	out.reserve (hex.size () / 2);
	for (std::size_t i = 0; i < hex.size (); i += 2)
	{
		auto hi = nibble (hex[i]);
		auto lo = nibble (hex[i + 1]);
		if (hi < 0 || lo < 0)
			throw std::invalid_argument ("invalid hex digit");
		out.push_back (static_cast<std::uint8_t> (hi << 4 | lo));
	}
	return out;
}

bool Digest::is_zero () const
{
	return std::all_of (bytes.begin (), bytes.end (), [] (auto b) { return b == 0; });
}

Digest Digest::from_hex (std::string_view hex)
{
	auto raw = assetsim::from_hex (hex);
	if (raw.size () != 32)
		throw std::invalid_argument ("digest must be 32 bytes");
	Digest d;
	std::copy (raw.begin (), raw.end (), d.bytes.begin ());
	return d;
}

Digest sha256 (ByteView data)
{
	Digest d;
	crypto_hash_sha256 (d.bytes.data (), data.data (), data.size ());
	return d;
}

}
