#pragma once

#include <assetsim/core/block.hpp>
#include <assetsim/core/utxo.hpp>

#include <json.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace assetsim {

using json = nlohmann::json;

/// A JSON document does not match the expected shape. `field` names the
/// offending key (dotted path where known).
class FormatError : public std::runtime_error
{
public:
	FormatError (std::string field, const std::string & message) :
		std::runtime_error (field.empty () ? message : field + ": " + message),
		field_ (std::move (field))
	{
	}
	const std::string & field () const { return field_; }

private:
	std::string field_;
};

/// Rejects any key not listed in `allowed`; requires `j` to be an object.
void require_keys (const json & j, std::initializer_list<std::string_view> allowed, std::string_view context);
const json & require_field (const json & j, std::string_view key, std::string_view context);

json to_json (const Address & a);
Address address_from_json (const json & j);

json to_json (const Value & v);
Value value_from_json (const json & j);

json to_json (const Outpoint & op);
Outpoint outpoint_from_json (const json & j);

json to_json (const TxOutput & out);
TxOutput output_from_json (const json & j);

json to_json (const BlockItem & item);
/// Verifies the embedded "id" against the decoded item.
BlockItem item_from_json (const json & j);

json to_json (const Block & block);
/// Verifies the embedded "hash" against the decoded block.
Block block_from_json (const json & j);

}
