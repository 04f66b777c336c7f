#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/core/value.hpp>

namespace assetsim {

std::string_view to_string (ValueType type)
{
	switch (type)
	{
		case ValueType::u64:
			return "u64";
		case ValueType::string:
			return "str";
		case ValueType::amount:
			return "amount";
		case ValueType::address:
			return "address";
		case ValueType::digest:
			return "digest";
		case ValueType::bytes:
			return "bytes";
	}
	return "?";
}

void encode_value (Writer & w, const Value & v)
{
	w.u8 (static_cast<std::uint8_t> (v.index ()));
	std::visit (
		[&w] (auto const & x) {
			using T = std::decay_t<decltype (x)>;
			if constexpr (std::is_same_v<T, std::uint64_t>)
				w.u64 (x);
			else if constexpr (std::is_same_v<T, std::string>)
				w.str (x);
			else if constexpr (std::is_same_v<T, Amount>)
				w.u64 (x.units ());
			else if constexpr (std::is_same_v<T, Address>)
				x.encode (w);
			else if constexpr (std::is_same_v<T, Digest>)
				w.digest (x);
			else
				w.bytes (x);
		},
		v);
}

Value decode_value (Reader & r)
{
	switch (static_cast<ValueType> (r.u8 ()))
	{
		case ValueType::u64:
			return r.u64 ();
		case ValueType::string:
			return r.str ();
		case ValueType::amount:
			return Amount{ r.u64 () };
		case ValueType::address:
			return Address::decode (r);
		case ValueType::digest:
			return r.digest ();
		case ValueType::bytes:
			return r.bytes ();
	}
	throw DecodeError ("bad value type tag");
}

}
