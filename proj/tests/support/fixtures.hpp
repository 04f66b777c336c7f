#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/chain/wallet.hpp>
#include <assetsim/core/identity.hpp>

#include <string>
#include <utility>
#include <vector>

namespace assetsim::test {

inline Identity party (std::string_view name)
{
	return Identity::from_seed ("test:" + std::string (name));
}

inline Address addr (const Identity & id)
{
	return derive_address (id.public_key ());
}

inline Amount btc (std::string_view text)
{
	return Amount::parse (text);
}

inline chain::ChainConfig config (std::string id, std::vector<TxOutput> genesis, std::uint64_t capacity = 100, std::uint64_t interval = 1)
{
	chain::ChainConfig c;
	c.chain_id = std::move (id);
	c.genesis = std::move (genesis);
	c.max_tx_per_block = capacity;
	c.block_interval_ticks = interval;
	c.rng_seed = 7;
	return c;
}

inline Outpoint genesis_output (const chain::ChainConfig & c, std::uint32_t index)
{
	return { Coinbase{ c.chain_id, 0, c.genesis }.id (), index };
}

/// Transfer whose inputs are each signed by the paired identity.
inline ValueTransferTx transfer (const std::vector<std::pair<Outpoint, Identity>> & inputs, std::vector<TxOutput> outputs)
{
	ValueTransferTx tx;
	for (auto const & [op, who] : inputs)
		tx.inputs.push_back ({ op, {} });
	tx.outputs = std::move (outputs);
	for (std::size_t i = 0; i < inputs.size (); ++i)
		tx.sign_input (i, inputs[i].second);
	return tx;
}

/// Advances ticks until the chain produces a block; returns it.
inline chain::BlockProduced mine (chain::Chain & c, std::uint64_t & tick)
{
	while (true)
		if (auto produced = c.produce_block (++tick))
			return *produced;
}

inline ContractMessage message (const Identity & sender, std::optional<Digest> target, std::string cls, std::string function, std::vector<Value> args, Amount value = {}, std::vector<Outpoint> funding = {}, std::uint64_t nonce = 0)
{
	ContractMessage m;
	m.sender = addr (sender);
	m.value = value;
	m.target = target;
	m.contract_class = std::move (cls);
	m.function = std::move (function);
	m.args = std::move (args);
	m.funding = std::move (funding);
	m.nonce = nonce;
	m.sign (sender);
	return m;
}

}
