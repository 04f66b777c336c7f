#pragma once

#include <assetsim/core/bytes.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace assetsim {

/// Canonical encoder: big-endian integers, u32 length prefix on every
/// variable-length field, fields written in declaration order.
class Writer
{
public:
	Writer & u8 (std::uint8_t v);
	Writer & u32 (std::uint32_t v);
	Writer & u64 (std::uint64_t v);
	Writer & fixed (ByteView data);
	Writer & bytes (ByteView data);
	Writer & str (std::string_view s);
	Writer & digest (const Digest & d) { return fixed (d.bytes); }
	Writer & tag (std::string_view domain) { return str (domain); }

	const Bytes & data () const { return out_; }
	Bytes take () { return std::move (out_); }
	Digest hash () const { return sha256 (out_); }

private:
	Bytes out_;
};

/// Strict decoder for Writer output. Every read throws DecodeError on underrun.
class Reader
{
public:
	explicit Reader (ByteView data) :
		data_ (data)
	{
	}

	std::uint8_t u8 ();
	std::uint32_t u32 ();
	std::uint64_t u64 ();
	Bytes fixed (std::size_t n);
	Bytes bytes (std::size_t max_len = 1u << 20);
	std::string str (std::size_t max_len = 1u << 16);
	Digest digest ();
	void expect_tag (std::string_view domain);

	bool done () const { return pos_ == data_.size (); }
	void expect_done () const;
	/// Element counts are bounded by the remaining input so garbage cannot request huge allocations.
	std::uint32_t count (std::size_t min_element_size = 1);

private:
	void need (std::size_t n) const;

	ByteView data_;
	std::size_t pos_{ 0 };
};

}
