#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/core/transaction.hpp>

namespace assetsim {

std::string Outpoint::to_string () const
{
	return tx_id.hex () + ":" + std::to_string (index);
}

void TxOutput::encode (Writer & w) const
{
	w.u64 (value.units ());
	recipient.encode (w);
}

TxOutput TxOutput::decode (Reader & r)
{
	TxOutput out;
	out.value = Amount{ r.u64 () };
	out.recipient = Address::decode (r);
	return out;
}

Bytes ValueTransferTx::body_bytes () const
{
	Writer w;
	w.tag ("assetsim/tx").u32 (static_cast<std::uint32_t> (inputs.size ()));
	for (auto const & in : inputs)
		w.digest (in.prevout.tx_id).u32 (in.prevout.index);
	w.u32 (static_cast<std::uint32_t> (outputs.size ()));
	for (auto const & out : outputs)
		out.encode (w);
	return w.take ();
}

Digest ValueTransferTx::id () const
{
	return sha256 (body_bytes ());
}

void ValueTransferTx::sign_inputs (const Identity & signer, const std::vector<Address> & prevout_owners)
{
	auto self = derive_address (signer.public_key ());
	auto body = body_bytes ();
	for (std::size_t i = 0; i < inputs.size () && i < prevout_owners.size (); ++i)
		if (prevout_owners[i] == self)
			inputs[i].witness = sign_witness (body, signer);
}

void ValueTransferTx::sign_input (std::size_t index, const Identity & signer)
{
	inputs.at (index).witness = sign_witness (body_bytes (), signer);
}

void ValueTransferTx::sign_input (std::size_t index, const std::vector<Identity> & signers)
{
	inputs.at (index).witness = sign_witness (body_bytes (), signers);
}

void ValueTransferTx::encode (Writer & w) const
{
	w.u32 (static_cast<std::uint32_t> (inputs.size ()));
	for (auto const & in : inputs)
	{
		w.digest (in.prevout.tx_id).u32 (in.prevout.index);
		encode_witness (w, in.witness);
	}
	w.u32 (static_cast<std::uint32_t> (outputs.size ()));
	for (auto const & out : outputs)
		out.encode (w);
}

ValueTransferTx ValueTransferTx::decode (Reader & r)
{
	ValueTransferTx tx;
	auto n_in = r.count (36);
	for (std::uint32_t i = 0; i < n_in; ++i)
	{
		TxInput in;
		in.prevout.tx_id = r.digest ();
		in.prevout.index = r.u32 ();
		in.witness = decode_witness (r);
		tx.inputs.push_back (std::move (in));
	}
	auto n_out = r.count (41);
	for (std::uint32_t i = 0; i < n_out; ++i)
		tx.outputs.push_back (TxOutput::decode (r));
	return tx;
}

Digest Coinbase::id () const
{
	Writer w;
	w.tag ("assetsim/coinbase");
	encode (w);
	return w.hash ();
}

void Coinbase::encode (Writer & w) const
{
	w.str (chain_id).u64 (height).u32 (static_cast<std::uint32_t> (outputs.size ()));
	for (auto const & out : outputs)
		out.encode (w);
}

Coinbase Coinbase::decode (Reader & r)
{
	Coinbase cb;
	cb.chain_id = r.str ();
	cb.height = r.u64 ();
	auto n = r.count (41);
	for (std::uint32_t i = 0; i < n; ++i)
		cb.outputs.push_back (TxOutput::decode (r));
	return cb;
}

}
