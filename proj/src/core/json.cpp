#include <assetsim/core/json.hpp>

#include <algorithm>

namespace assetsim {

void require_keys (const json & j, std::initializer_list<std::string_view> allowed, std::string_view context)
{
	if (!j.is_object ())
		throw FormatError (std::string (context), "expected an object");
	for (auto const & [key, value] : j.items ())
		if (std::find (allowed.begin (), allowed.end (), key) == allowed.end ())
			throw FormatError (std::string (context) + "." + key, "unknown field");
}

const json & require_field (const json & j, std::string_view key, std::string_view context)
{
	auto it = j.find (key);
	if (it == j.end ())
		throw FormatError (std::string (context) + "." + std::string (key), "missing field");
	return *it;
}

namespace {
template <typename T>
T get_as (const json & j, std::string_view key, std::string_view context)
{
	auto const & v = require_field (j, key, context);
	try
	{
		return v.get<T> ();
	}
	catch (const json::exception & e)
	{
		throw FormatError (std::string (context) + "." + std::string (key), e.what ());
	}
}

Digest digest_field (const json & j, std::string_view key, std::string_view context)
{
	try
	{
		return Digest::from_hex (get_as<std::string> (j, key, context));
	}
	catch (const std::invalid_argument & e)
	{
		throw FormatError (std::string (context) + "." + std::string (key), e.what ());
	}
}

Bytes hex_field (const json & j, std::string_view key, std::string_view context)
{
	try
	{
		return from_hex (get_as<std::string> (j, key, context));
	}
	catch (const std::invalid_argument & e)
	{
		throw FormatError (std::string (context) + "." + std::string (key), e.what ());
	}
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_hex (const json & j, std::string_view key, std::string_view context)
{
	auto raw = hex_field (j, key, context);
	if (raw.size () != N)
		throw FormatError (std::string (context) + "." + std::string (key), "wrong length");
	std::array<std::uint8_t, N> out{};
	std::copy (raw.begin (), raw.end (), out.begin ());
	return out;
}

json witness_to_json (const Witness & w)
{
	auto arr = json::array ();
	for (auto const & entry : w)
		arr.push_back ({ { "key", entry.key.hex () }, { "sig", to_hex (entry.sig.bytes) } });
	return arr;
}

Witness witness_from_json (const json & j, std::string_view context)
{
	if (!j.is_array ())
		throw FormatError (std::string (context), "expected an array");
	Witness w;
	for (auto const & e : j)
	{
		require_keys (e, { "key", "sig" }, context);
		WitnessSignature entry;
		entry.key.bytes = fixed_hex<32> (e, "key", context);
		entry.sig.bytes = fixed_hex<64> (e, "sig", context);
		w.push_back (entry);
	}
	return w;
}

json outputs_to_json (const std::vector<TxOutput> & outs)
{
	auto arr = json::array ();
	for (auto const & o : outs)
		arr.push_back (to_json (o));
	return arr;
}

std::vector<TxOutput> outputs_from_json (const json & j, std::string_view context)
{
	if (!j.is_array ())
		throw FormatError (std::string (context), "expected an array");
	std::vector<TxOutput> outs;
	for (auto const & o : j)
		outs.push_back (output_from_json (o));
	return outs;
}
}

json to_json (const Address & a)
{
	json j{ { "kind", to_string (a.kind) }, { "hash", a.hash.hex () } };
	if (a.policy)
	{
		auto members = json::array ();
		for (auto const & k : a.policy->members)
			members.push_back (k.hex ());
		j["policy"] = { { "threshold", a.policy->threshold }, { "epoch", a.policy->epoch }, { "members", members } };
	}
	return j;
}

Address address_from_json (const json & j)
{
	require_keys (j, { "kind", "hash", "policy" }, "address");
	Address a;
	try
	{
		a.kind = address_kind_from_string (get_as<std::string> (j, "kind", "address"));
	}
	catch (const std::invalid_argument & e)
	{
		throw FormatError ("address.kind", e.what ());
	}
	a.hash = digest_field (j, "hash", "address");
	if (j.contains ("policy"))
	{
		auto const & p = j["policy"];
		require_keys (p, { "threshold", "epoch", "members" }, "address.policy");
		MultisigPolicy policy;
		policy.threshold = get_as<std::uint32_t> (p, "threshold", "address.policy");
		policy.epoch = get_as<std::uint64_t> (p, "epoch", "address.policy");
		auto members = get_as<std::vector<std::string>> (p, "members", "address.policy");
		for (auto const & m : members)
		{
			try
			{
				policy.members.push_back (PublicKey::from_hex (m));
			}
			catch (const std::invalid_argument & e)
			{
				throw FormatError ("address.policy.members", e.what ());
			}
		}
		a.policy = std::move (policy);
	}
	if (!a.well_formed ())
		throw FormatError ("address", "inconsistent address");
	return a;
}

json to_json (const Value & v)
{
	json j{ { "type", std::string (to_string (type_of (v))) } };
	std::visit (
		[&j] (auto const & x) {
			using T = std::decay_t<decltype (x)>;
			if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::string>)
				j["value"] = x;
			else if constexpr (std::is_same_v<T, Amount>)
				j["value"] = x.units ();
			else if constexpr (std::is_same_v<T, Address>)
				j["value"] = to_json (x);
			else if constexpr (std::is_same_v<T, Digest>)
				j["value"] = x.hex ();
			else
				j["value"] = to_hex (x);
		},
		v);
	return j;
}

Value value_from_json (const json & j)
{
	require_keys (j, { "type", "value" }, "value");
	auto type = get_as<std::string> (j, "type", "value");
	if (type == "u64")
		return get_as<std::uint64_t> (j, "value", "value");
	if (type == "str")
		return get_as<std::string> (j, "value", "value");
	if (type == "amount")
		return Amount{ get_as<std::uint64_t> (j, "value", "value") };
	if (type == "address")
		return address_from_json (require_field (j, "value", "value"));
	if (type == "digest")
		return digest_field (j, "value", "value");
	if (type == "bytes")
		return hex_field (j, "value", "value");
	throw FormatError ("value.type", "unknown value type " + type);
}

json to_json (const Outpoint & op)
{
	return { { "tx", op.tx_id.hex () }, { "index", op.index } };
}

Outpoint outpoint_from_json (const json & j)
{
	require_keys (j, { "tx", "index" }, "outpoint");
	return { digest_field (j, "tx", "outpoint"), get_as<std::uint32_t> (j, "index", "outpoint") };
}

json to_json (const TxOutput & out)
{
	return { { "value", out.value.units () }, { "recipient", to_json (out.recipient) } };
}

TxOutput output_from_json (const json & j)
{
	require_keys (j, { "value", "recipient" }, "output");
	return { Amount{ get_as<std::uint64_t> (j, "value", "output") }, address_from_json (require_field (j, "recipient", "output")) };
}

json to_json (const BlockItem & item)
{
	return std::visit (
		[] (auto const & x) -> json {
			using T = std::decay_t<decltype (x)>;
			if constexpr (std::is_same_v<T, Coinbase>)
			{
				return { { "kind", "coinbase" }, { "id", x.id ().hex () }, { "chain_id", x.chain_id }, { "height", x.height }, { "outputs", outputs_to_json (x.outputs) } };
			}
			else if constexpr (std::is_same_v<T, ValueTransferTx>)
			{
				auto inputs = json::array ();
				for (auto const & in : x.inputs)
					inputs.push_back ({ { "prevout", to_json (in.prevout) }, { "witness", witness_to_json (in.witness) } });
				return { { "kind", "transfer" }, { "id", x.id ().hex () }, { "inputs", inputs }, { "outputs", outputs_to_json (x.outputs) } };
			}
			else
			{
				auto args = json::array ();
				for (auto const & a : x.args)
					args.push_back (to_json (a));
				auto funding = json::array ();
				for (auto const & op : x.funding)
					funding.push_back (to_json (op));
				return { { "kind", "message" },
					{ "id", x.id ().hex () },
					{ "sender", to_json (x.sender) },
					{ "value", x.value.units () },
					{ "target", x.target ? json (x.target->hex ()) : json (nullptr) },
					{ "class", x.contract_class },
					{ "function", x.function },
					{ "args", args },
					{ "funding", funding },
					{ "nonce", x.nonce },
					{ "witness", witness_to_json (x.witness) } };
			}
		},
		item);
}

BlockItem item_from_json (const json & j)
{
	auto kind = get_as<std::string> (j, "kind", "item");
	BlockItem item;
	if (kind == "coinbase")
	{
		require_keys (j, { "kind", "id", "chain_id", "height", "outputs" }, "coinbase");
		Coinbase cb;
		cb.chain_id = get_as<std::string> (j, "chain_id", "coinbase");
		cb.height = get_as<std::uint64_t> (j, "height", "coinbase");
		cb.outputs = outputs_from_json (require_field (j, "outputs", "coinbase"), "coinbase.outputs");
		item = std::move (cb);
	}
	else if (kind == "transfer")
	{
		require_keys (j, { "kind", "id", "inputs", "outputs" }, "transfer");
		ValueTransferTx tx;
		auto const & inputs = require_field (j, "inputs", "transfer");
		if (!inputs.is_array ())
			throw FormatError ("transfer.inputs", "expected an array");
		for (auto const & in : inputs)
		{
			require_keys (in, { "prevout", "witness" }, "transfer.input");
			tx.inputs.push_back ({ outpoint_from_json (require_field (in, "prevout", "transfer.input")),
				witness_from_json (require_field (in, "witness", "transfer.input"), "transfer.input.witness") });
		}
		tx.outputs = outputs_from_json (require_field (j, "outputs", "transfer"), "transfer.outputs");
		item = std::move (tx);
	}
	else if (kind == "message")
	{
		require_keys (j, { "kind", "id", "sender", "value", "target", "class", "function", "args", "funding", "nonce", "witness" }, "message");
		ContractMessage m;
		m.sender = address_from_json (require_field (j, "sender", "message"));
		m.value = Amount{ get_as<std::uint64_t> (j, "value", "message") };
		if (!require_field (j, "target", "message").is_null ())
			m.target = digest_field (j, "target", "message");
		m.contract_class = get_as<std::string> (j, "class", "message");
		m.function = get_as<std::string> (j, "function", "message");
		auto const & args = require_field (j, "args", "message");
		if (!args.is_array ())
			throw FormatError ("message.args", "expected an array");
		for (auto const & a : args)
			m.args.push_back (value_from_json (a));
		auto const & funding = require_field (j, "funding", "message");
		if (!funding.is_array ())
			throw FormatError ("message.funding", "expected an array");
		for (auto const & op : funding)
			m.funding.push_back (outpoint_from_json (op));
		m.nonce = get_as<std::uint64_t> (j, "nonce", "message");
		m.witness = witness_from_json (require_field (j, "witness", "message"), "message.witness");
		item = std::move (m);
	}
	else
	{
		throw FormatError ("item.kind", "unknown item kind " + kind);
	}
	if (item_id (item) != digest_field (j, "id", "item"))
		throw FormatError ("item.id", "id does not match content");
	return item;
}

json to_json (const Block & block)
{
	auto items = json::array ();
	for (auto const & item : block.items)
		items.push_back (to_json (item));
	return { { "height", block.height },
		{ "hash", block.hash ().hex () },
		{ "prev_hash", block.prev_hash.hex () },
		{ "producer", to_json (block.producer) },
		{ "tick", block.tick },
		{ "items", items } };
}

Block block_from_json (const json & j)
{
	require_keys (j, { "height", "hash", "prev_hash", "producer", "tick", "items" }, "block");
	Block b;
	b.height = get_as<std::uint64_t> (j, "height", "block");
	b.prev_hash = digest_field (j, "prev_hash", "block");
	b.producer = address_from_json (require_field (j, "producer", "block"));
	b.tick = get_as<std::uint64_t> (j, "tick", "block");
	auto const & items = require_field (j, "items", "block");
	if (!items.is_array ())
		throw FormatError ("block.items", "expected an array");
	for (auto const & item : items)
		b.items.push_back (item_from_json (item));
	if (b.hash () != digest_field (j, "hash", "block"))
		throw FormatError ("block.hash", "hash does not match content");
	return b;
}

}
