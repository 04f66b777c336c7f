#include <assetsim/chain/wallet.hpp>

namespace assetsim::chain {

namespace {
struct Selection
{
	std::vector<std::pair<Outpoint, TxOutput>> coins;
	Amount total;
};

std::optional<Selection> select (const Chain & chain, const Address & owner, Amount amount)
{
	auto pending = chain.pending_spends ();
	Selection sel;
	for (auto const & [op, out] : chain.state ().utxo.outputs_of (owner))
	{
		if (pending.contains (op))
			continue;
		if (out.value == amount)
			return Selection{ { { op, out } }, out.value };
		if (sel.total < amount)
		{
			sel.coins.emplace_back (op, out);
			sel.total += out.value;
		}
	}
	if (sel.total < amount)
		return std::nullopt;
	return sel;
}

ValueTransferTx spend (const Selection & sel, const Identity & signer, std::vector<TxOutput> outputs)
{
	ValueTransferTx tx;
	for (auto const & [op, out] : sel.coins)
		tx.inputs.push_back ({ op, {} });
	tx.outputs = std::move (outputs);
	for (std::size_t i = 0; i < tx.inputs.size (); ++i)
		tx.sign_input (i, signer);
	return tx;
}
}

std::optional<FundingPlan> plan_funding (const Chain & chain, const Identity & owner, Amount amount)
{
	FundingPlan plan;
	if (amount.is_zero ())
		return plan;
	auto self = derive_address (owner.public_key ());
	auto sel = select (chain, self, amount);
	if (!sel)
		return std::nullopt;
	if (sel->total == amount)
	{
		for (auto const & [op, out] : sel->coins)
			plan.funding.push_back (op);
		return plan;
	}
	auto split = spend (*sel, owner, { TxOutput{ amount, self }, TxOutput{ sel->total - amount, self } });
	plan.funding.push_back ({ split.id (), 0 });
	plan.split = std::move (split);
	return plan;
}

std::optional<ValueTransferTx> make_transfer (const Chain & chain, const Identity & from, std::vector<TxOutput> outputs)
{
	Amount amount;
	for (auto const & out : outputs)
	{
		if (out.value.is_zero ())
			return std::nullopt;
		amount += out.value;
	}
	if (outputs.empty ())
		return std::nullopt;
	auto self = derive_address (from.public_key ());
	auto sel = select (chain, self, amount);
	if (!sel)
		return std::nullopt;
	if (sel->total > amount)
		outputs.push_back ({ sel->total - amount, self });
	return spend (*sel, from, std::move (outputs));
}

std::optional<ValueTransferTx> make_payment (const Chain & chain, const Identity & from, const Address & to, Amount amount)
{
	return make_transfer (chain, from, { TxOutput{ amount, to } });
}

}
