#include <assetsim/core/serialize.hpp>
#include <assetsim/core/utxo.hpp>

#include <stdexcept>

namespace assetsim {

std::string_view to_string (ValidationCode code)
{
	switch (code)
	{
		case ValidationCode::malformed:
			return "Malformed";
		case ValidationCode::unknown_outpoint:
			return "UnknownOutpoint";
		case ValidationCode::double_spend:
			return "DoubleSpend";
		case ValidationCode::bad_signature:
			return "BadSignature";
		case ValidationCode::value_mismatch:
			return "ValueMismatch";
		case ValidationCode::unknown_contract:
			return "UnknownContract";
	}
	return "?";
}

const TxOutput * UtxoSet::find (const Outpoint & op) const
{
	auto it = unspent_.find (op);
	return it == unspent_.end () ? nullptr : &it->second;
}

void UtxoSet::insert (const Outpoint & op, const TxOutput & out)
{
	if (!unspent_.emplace (op, out).second)
		throw std::logic_error ("duplicate outpoint " + op.to_string ());
}

TxOutput UtxoSet::spend (const Outpoint & op)
{
	auto it = unspent_.find (op);
	if (it == unspent_.end ())
		throw std::logic_error ("spend of missing outpoint " + op.to_string ());
	auto out = it->second;
	unspent_.erase (it);
	spent_.insert (op);
	return out;
}

Amount UtxoSet::balance (const Address & owner) const
{
	Amount sum;
	for (auto const & [op, out] : unspent_)
		if (out.recipient == owner)
			sum += out.value;
	return sum;
}

Amount UtxoSet::total () const
{
	Amount sum;
	for (auto const & [op, out] : unspent_)
		sum += out.value;
	return sum;
}

std::vector<std::pair<Outpoint, TxOutput>> UtxoSet::outputs_of (const Address & owner) const
{
	std::vector<std::pair<Outpoint, TxOutput>> result;
	for (auto const & [op, out] : unspent_)
		if (out.recipient == owner)
			result.emplace_back (op, out);
	return result;
}

void UtxoSet::encode (Writer & w) const
{
	w.u32 (static_cast<std::uint32_t> (unspent_.size ()));
	for (auto const & [op, out] : unspent_)
	{
		w.digest (op.tx_id).u32 (op.index);
		out.encode (w);
	}
	w.u32 (static_cast<std::uint32_t> (spent_.size ()));
	for (auto const & op : spent_)
		w.digest (op.tx_id).u32 (op.index);
}

std::optional<ValidationError> validate_transfer (const ValueTransferTx & tx, const UtxoSet & utxo)
{
	if (tx.inputs.empty ())
		return ValidationError{ ValidationCode::malformed, 0, "transaction has no inputs" };
	if (tx.outputs.empty ())
		return ValidationError{ ValidationCode::malformed, 0, "transaction has no outputs" };

	auto body = tx.body_bytes ();
	std::set<Outpoint> seen;
	Amount in_sum;
	for (std::size_t i = 0; i < tx.inputs.size (); ++i)
	{
		auto const & in = tx.inputs[i];
		if (!seen.insert (in.prevout).second)
			return ValidationError{ ValidationCode::double_spend, i, "outpoint listed twice: " + in.prevout.to_string () };
		auto const * prev = utxo.find (in.prevout);
		if (prev == nullptr)
		{
			if (utxo.was_spent (in.prevout))
				return ValidationError{ ValidationCode::double_spend, i, "outpoint already spent: " + in.prevout.to_string () };
			return ValidationError{ ValidationCode::unknown_outpoint, i, in.prevout.to_string () };
		}
		if (!authorizes (prev->recipient, in.witness, body))
			return ValidationError{ ValidationCode::bad_signature, i, "witness does not authorize " + prev->recipient.to_string () };
		in_sum += prev->value;
	}

	Amount out_sum;
	for (std::size_t i = 0; i < tx.outputs.size (); ++i)
	{
		auto const & out = tx.outputs[i];
		if (out.value.is_zero ())
			return ValidationError{ ValidationCode::malformed, i, "zero-value output" };
		if (!out.recipient.well_formed () || out.recipient.kind == AddressKind::contract)
			return ValidationError{ ValidationCode::malformed, i, "output recipient is not a spendable address" };
		if (out_sum.units () > UINT64_MAX - out.value.units ())
			return ValidationError{ ValidationCode::value_mismatch, i, "output sum overflows" };
		out_sum += out.value;
	}
	if (in_sum != out_sum)
		return ValidationError{ ValidationCode::value_mismatch, 0, "inputs " + in_sum.to_string () + " != outputs " + out_sum.to_string () };
	return std::nullopt;
}

void apply_transfer_in_place (const ValueTransferTx & tx, UtxoSet & utxo)
{
	auto id = tx.id ();
	for (auto const & in : tx.inputs)
		utxo.spend (in.prevout);
	for (std::uint32_t i = 0; i < tx.outputs.size (); ++i)
		utxo.insert ({ id, i }, tx.outputs[i]);
}

UtxoSet apply_transfer (const ValueTransferTx & tx, UtxoSet utxo)
{
	apply_transfer_in_place (tx, utxo);
	return utxo;
}

void apply_coinbase (const Coinbase & cb, UtxoSet & utxo)
{
	auto id = cb.id ();
	for (std::uint32_t i = 0; i < cb.outputs.size (); ++i)
		utxo.insert ({ id, i }, cb.outputs[i]);
}

}
