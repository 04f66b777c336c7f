#pragma once

#include <assetsim/core/address.hpp>
#include <assetsim/core/amount.hpp>
#include <assetsim/core/bytes.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace assetsim {

/// Typed argument / state value carried by contract messages.
using Value = std::variant<std::uint64_t, std::string, Amount, Address, Digest, Bytes>;

enum class ValueType : std::uint8_t
{
	u64 = 0,
	string = 1,
	amount = 2,
	address = 3,
	digest = 4,
	bytes = 5,
};

std::string_view to_string (ValueType type);
inline ValueType type_of (const Value & v) { return static_cast<ValueType> (v.index ()); }

void encode_value (Writer & w, const Value & v);
Value decode_value (Reader & r);

using StateVars = std::map<std::string, Value>;

}
