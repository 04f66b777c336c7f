#include <assetsim/core/error.hpp>
#include <assetsim/core/message.hpp>
#include <assetsim/core/serialize.hpp>

namespace assetsim {

namespace {
void encode_body (Writer & w, const ContractMessage & m)
{
	m.sender.encode (w);
	w.u64 (m.value.units ());
	w.u8 (m.target.has_value () ? 1 : 0);
	if (m.target)
		w.digest (*m.target);
	w.str (m.contract_class).str (m.function);
	w.u32 (static_cast<std::uint32_t> (m.args.size ()));
	for (auto const & arg : m.args)
		encode_value (w, arg);
	w.u32 (static_cast<std::uint32_t> (m.funding.size ()));
	for (auto const & op : m.funding)
		w.digest (op.tx_id).u32 (op.index);
	w.u64 (m.nonce);
}
}

Bytes ContractMessage::body_bytes () const
{
	Writer w;
	w.tag ("assetsim/msg");
	encode_body (w, *this);
	return w.take ();
}

Digest ContractMessage::id () const
{
	return sha256 (body_bytes ());
}

void ContractMessage::encode (Writer & w) const
{
	encode_body (w, *this);
	encode_witness (w, witness);
}

ContractMessage ContractMessage::decode (Reader & r)
{
	ContractMessage m;
	m.sender = Address::decode (r);
	m.value = Amount{ r.u64 () };
	auto has_target = r.u8 ();
	if (has_target > 1)
		throw DecodeError ("bad target flag");
	if (has_target)
		m.target = r.digest ();
	m.contract_class = r.str ();
	m.function = r.str ();
	auto n_args = r.count (2);
	for (std::uint32_t i = 0; i < n_args; ++i)
		m.args.push_back (decode_value (r));
	auto n_funding = r.count (36);
	for (std::uint32_t i = 0; i < n_funding; ++i)
	{
		Outpoint op;
		op.tx_id = r.digest ();
		op.index = r.u32 ();
		m.funding.push_back (op);
	}
	m.nonce = r.u64 ();
	m.witness = decode_witness (r);
	return m;
}

bool ContractMessage::operator== (const ContractMessage & other) const
{
	return body_bytes () == other.body_bytes () && witness == other.witness;
}

}
