#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/core/identity.hpp>

#include <optional>
#include <vector>

namespace assetsim::chain {

/// Outpoints that exactly cover an amount, plus an optional self-payment
/// that must be submitted first when no exact combination exists.
struct FundingPlan
{
	std::optional<ValueTransferTx> split;
	std::vector<Outpoint> funding;
};

/// Selects confirmed outputs of `owner` not already claimed by the mempool.
/// Returns nullopt on insufficient funds.
std::optional<FundingPlan> plan_funding (const Chain & chain, const Identity & owner, Amount amount);

/// Signed transfer of `outputs` plus change back to the payer; nullopt on
/// insufficient funds or an empty/zero output.
std::optional<ValueTransferTx> make_transfer (const Chain & chain, const Identity & from, std::vector<TxOutput> outputs);

/// Signed payment with change back to the payer; nullopt on insufficient funds.
std::optional<ValueTransferTx> make_payment (const Chain & chain, const Identity & from, const Address & to, Amount amount);

}
