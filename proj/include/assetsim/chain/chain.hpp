#pragma once

#include <assetsim/contract/engine.hpp>
#include <assetsim/core/block.hpp>
#include <assetsim/core/utxo.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace assetsim::chain {

struct ChainConfig
{
	std::string chain_id;
	std::uint64_t block_interval_ticks{ 1 };
	std::uint64_t max_tx_per_block{ 7 }; ///< capacity; coinbase items do not count
	Amount mining_reward;
	std::uint64_t rng_seed{ 0 };
	std::vector<Address> miners; ///< empty: one miner derived from chain_id
	std::vector<TxOutput> genesis;

	/// Throws std::invalid_argument when an invariant is violated.
	void validate () const;
	Block genesis_block () const;
	/// `miners`, or the single default miner when empty.
	std::vector<Address> effective_miners () const;
};

/// Everything derived from the blocks: the left fold of apply from genesis.
struct ChainState
{
	UtxoSet utxo;
	std::map<Digest, contract::ContractInstance> contracts;
	std::set<Digest> message_ids; ///< ids of included messages
	Digest tip;
	std::uint64_t height{ 0 };
	Amount minted; ///< genesis allocations plus mining rewards

	/// Currency held by outputs plus every contract's locked balance.
	Amount total_value () const;
	Amount balance (const Address & owner) const { return utxo.balance (owner); }
	Digest digest () const;
	/// Digest of per-address balances and per-asset owners only, so two
	/// states that hold the same things for the same parties compare equal
	/// even if outpoints or lock bookkeeping differ.
	Digest holdings_digest () const;

	bool operator== (const ChainState &) const = default;
};

struct ItemReceipt
{
	Digest item_id;
	ItemKind kind{ ItemKind::transfer };
	std::uint64_t height{ 0 };
	std::uint32_t position{ 0 };
	std::optional<contract::CallError> call_error;
	std::optional<Digest> contract_id; ///< call target, or the created instance
	contract::ExecutionEffect effect;

	bool succeeded () const { return !call_error.has_value (); }
};

struct Eviction
{
	Digest item_id;
	ValidationError error;
	std::uint64_t height{ 0 }; ///< height of the block whose production evicted it
};

struct BlockProduced
{
	Block block;
	std::vector<ItemReceipt> receipts;
	std::vector<Eviction> evictions;
};

enum class SubmitStatus
{
	accepted,
	malformed,
	duplicate,
};

std::string_view to_string (SubmitStatus s);

struct SubmitResult
{
	SubmitStatus status{ SubmitStatus::accepted };
	Digest item_id;
	std::string detail;

	bool accepted () const { return status == SubmitStatus::accepted; }
};

class InvalidBlock : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Full validation of a non-coinbase item against a state.
std::optional<ValidationError> validate_item (const BlockItem & item, const ChainState & state);
/// Applies an item that validate_item accepted.
ItemReceipt apply_item (const BlockItem & item, ChainState & state, const contract::ChainContext & ctx, std::uint32_t position);
/// Validates and applies a whole block on top of `state`. Throws InvalidBlock.
std::vector<ItemReceipt> apply_block (const Block & block, ChainState & state, const ChainConfig & config);

ChainState genesis_state (const ChainConfig & config);
/// Rebuilds state from a block list starting at genesis. Throws InvalidBlock.
ChainState replay (const ChainConfig & config, std::span<const Block> blocks);

struct TipCandidate
{
	std::uint64_t height{ 0 };
	Digest hash;

	bool operator== (const TipCandidate &) const = default;
};

/// Greatest height wins; ties go to the lexicographically smallest hash.
TipCandidate choose_fork (std::span<const TipCandidate> candidates);

/// One permissionless chain: mempool, simulated mining and chain state.
/// Single owner; advanced only by its scheduler.
class Chain
{
public:
	explicit Chain (ChainConfig config);

	const ChainConfig & config () const { return config_; }
	const std::string & id () const { return config_.chain_id; }

	SubmitResult submit (BlockItem item);
	/// Decodes canonical item bytes first; undecodable input is Malformed.
	SubmitResult submit_bytes (ByteView data);

	/// Produces a block every block_interval_ticks (never at tick 0).
	std::optional<BlockProduced> produce_block (std::uint64_t now_ticks);

	Amount balance (const Address & owner) const { return state_.balance (owner); }
	/// Throws NotFound.
	const contract::ContractInstance & contract (const Digest & id) const;
	const contract::ContractInstance * find_contract (const Digest & id) const;
	/// Throws NotFound.
	const Block & block_at (std::uint64_t height) const;

	const ChainState & state () const { return state_; }
	std::uint64_t height () const { return state_.height; }
	const std::vector<Block> & blocks () const { return blocks_; }

	const std::deque<BlockItem> & mempool () const { return mempool_; }
	/// Outpoints consumed by items still waiting in the mempool.
	std::set<Outpoint> pending_spends () const;

	const ItemReceipt * find_receipt (const Digest & item_id) const;
	const Eviction * find_eviction (const Digest & item_id) const;

	/// Adds an externally produced block (fork injection) and re-runs fork
	/// choice. Throws InvalidBlock when the block does not extend a known
	/// block validly.
	void import_block (const Block & block);
	std::vector<TipCandidate> tips () const;

private:
	Address pick_producer ();
	void rebuild_main_chain (const Digest & tip);

	ChainConfig config_;
	std::mt19937_64 rng_;
	ChainState state_;
	std::vector<Block> blocks_;
	std::map<Digest, Block> known_blocks_;
	std::deque<BlockItem> mempool_;
	std::set<Digest> mempool_ids_;
	std::map<Digest, ItemReceipt> receipts_;
	std::map<Digest, Eviction> evictions_;
};

}
