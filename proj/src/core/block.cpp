#include <assetsim/core/block.hpp>
#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>

namespace assetsim {

std::string_view to_string (ItemKind kind)
{
	switch (kind)
	{
		case ItemKind::coinbase:
			return "coinbase";
		case ItemKind::transfer:
			return "transfer";
		case ItemKind::message:
			return "message";
	}
	return "?";
}

Digest item_id (const BlockItem & item)
{
	return std::visit ([] (auto const & x) { return x.id (); }, item);
}

void encode_item (Writer & w, const BlockItem & item)
{
	w.u8 (static_cast<std::uint8_t> (item.index ()));
	std::visit ([&w] (auto const & x) { x.encode (w); }, item);
}

BlockItem decode_item (Reader & r)
{
	switch (static_cast<ItemKind> (r.u8 ()))
	{
		case ItemKind::coinbase:
			return Coinbase::decode (r);
		case ItemKind::transfer:
			return ValueTransferTx::decode (r);
		case ItemKind::message:
			return ContractMessage::decode (r);
	}
	throw DecodeError ("bad item kind");
}

Bytes serialize_item (const BlockItem & item)
{
	Writer w;
	w.tag ("assetsim/item");
	encode_item (w, item);
	return w.take ();
}

BlockItem parse_item (ByteView data)
{
	Reader r (data);
	r.expect_tag ("assetsim/item");
	auto item = decode_item (r);
	r.expect_done ();
	return item;
}

Digest Block::hash () const
{
	Writer w;
	w.tag ("assetsim/block").u64 (height).digest (prev_hash);
	producer.encode (w);
	w.u64 (tick).u32 (static_cast<std::uint32_t> (items.size ()));
	for (auto const & item : items)
		encode_item (w, item);
	return w.hash ();
}

}
