#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>

#include <algorithm>

namespace assetsim {

Writer & Writer::u8 (std::uint8_t v)
{
	out_.push_back (v);
	return *this;
}

Writer & Writer::u32 (std::uint32_t v)
{
	for (int shift = 24; shift >= 0; shift -= 8)
		out_.push_back (static_cast<std::uint8_t> (v >> shift));
	return *this;
}

Writer & Writer::u64 (std::uint64_t v)
{
	for (int shift = 56; shift >= 0; shift -= 8)
		out_.push_back (static_cast<std::uint8_t> (v >> shift));
	return *this;
}

Writer & Writer::fixed (ByteView data)
{
	out_.insert (out_.end (), data.begin (), data.end ());
	return *this;
}

Writer & Writer::bytes (ByteView data)
{
	u32 (static_cast<std::uint32_t> (data.size ()));
	return fixed (data);
}

Writer & Writer::str (std::string_view s)
{
	return bytes (as_bytes (s));
}

void Reader::need (std::size_t n) const
{
	if (data_.size () - pos_ < n)
		throw DecodeError ("unexpected end of input");
}

std::uint8_t Reader::u8 ()
{
	need (1);
	return data_[pos_++];
}

std::uint32_t Reader::u32 ()
{
	need (4);
	std::uint32_t v = 0;
	for (int i = 0; i < 4; ++i)
		v = v << 8 | data_[pos_++];
	return v;
}

std::uint64_t Reader::u64 ()
{
	need (8);
	std::uint64_t v = 0;
	for (int i = 0; i < 8; ++i)
		v = v << 8 | data_[pos_++];
	return v;
}

Bytes Reader::fixed (std::size_t n)
{
	need (n);
	Bytes out (data_.begin () + pos_, data_.begin () + pos_ + n);
	pos_ += n;
	return out;
}

Bytes Reader::bytes (std::size_t max_len)
{
	auto len = u32 ();
	if (len > max_len)
		throw DecodeError ("field too long");
	return fixed (len);
}

std::string Reader::str (std::size_t max_len)
{
	auto raw = bytes (max_len);
	return { raw.begin (), raw.end () };
}

Digest Reader::digest ()
{
	need (32);
	Digest d;
	std::copy_n (data_.begin () + pos_, 32, d.bytes.begin ());
	pos_ += 32;
	return d;
}

void Reader::expect_tag (std::string_view domain)
{
	if (str () != domain)
		throw DecodeError ("unexpected domain tag, wanted " + std::string (domain));
}

void Reader::expect_done () const
{
	if (!done ())
		throw DecodeError ("trailing bytes");
}

std::uint32_t Reader::count (std::size_t min_element_size)
{
	auto n = u32 ();
	if (static_cast<std::uint64_t> (n) * std::max<std::size_t> (min_element_size, 1) > data_.size () - pos_)
		throw DecodeError ("element count exceeds input");
	return n;
}

}
