#pragma once

#include <assetsim/core/message.hpp>
#include <assetsim/core/transaction.hpp>

#include <cstdint>
#include <variant>
#include <vector>

namespace assetsim {

using BlockItem = std::variant<Coinbase, ValueTransferTx, ContractMessage>;

enum class ItemKind : std::uint8_t
{
	coinbase = 0,
	transfer = 1,
	message = 2,
};

std::string_view to_string (ItemKind kind);
inline ItemKind kind_of (const BlockItem & item) { return static_cast<ItemKind> (item.index ()); }
Digest item_id (const BlockItem & item);

void encode_item (Writer & w, const BlockItem & item);
BlockItem decode_item (Reader & r);
/// Full canonical bytes of an item (what `submit_bytes` accepts).
Bytes serialize_item (const BlockItem & item);
/// Throws DecodeError unless `data` is exactly one encoded item.
BlockItem parse_item (ByteView data);

struct Block
{
	std::uint64_t height{ 0 };
	Digest prev_hash;
	Address producer;
	std::uint64_t tick{ 0 };
	std::vector<BlockItem> items;

	/// Digest over header and payload.
	Digest hash () const;

	bool operator== (const Block &) const = default;
};

}
