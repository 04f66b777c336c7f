#include <assetsim/chain/chain.hpp>
#include <assetsim/core/error.hpp>
#include <assetsim/core/identity.hpp>
#include <assetsim/core/serialize.hpp>

#include <algorithm>

namespace assetsim::chain {

namespace {
ValidationError error (ValidationCode code, std::size_t index, std::string detail)
{
	return ValidationError{ code, index, std::move (detail) };
}

Amount sum (const std::vector<TxOutput> & outputs)
{
	Amount total;
	for (auto const & out : outputs)
		total += out.value;
	return total;
}

std::optional<ValidationError> validate_message (const ContractMessage & msg, const ChainState & state)
{
	if (msg.sender.kind == AddressKind::contract || !msg.sender.well_formed ())
		return error (ValidationCode::malformed, 0, "sender is not a user or multisig address");
	if (msg.function.empty ())
		return error (ValidationCode::malformed, 0, "empty function name");
	if (msg.is_deploy () && msg.contract_class.empty ())
		return error (ValidationCode::malformed, 0, "deployment without a contract class");
	if (state.message_ids.contains (msg.id ()))
		return error (ValidationCode::double_spend, 0, "message already included");
	if (!msg.is_deploy () && !state.contracts.contains (*msg.target))
		return error (ValidationCode::unknown_contract, 0, "no contract " + msg.target->hex ());

	std::set<Outpoint> seen;
	Amount funded;
	for (std::size_t i = 0; i < msg.funding.size (); ++i)
	{
		auto const & op = msg.funding[i];
		if (!seen.insert (op).second)
			return error (ValidationCode::double_spend, i, "outpoint funded twice");
		auto const * out = state.utxo.find (op);
		if (out == nullptr)
		{
			if (state.utxo.was_spent (op))
				return error (ValidationCode::double_spend, i, "outpoint already spent: " + op.to_string ());
			return error (ValidationCode::unknown_outpoint, i, "unknown outpoint: " + op.to_string ());
		}
		if (out->recipient != msg.sender)
			return error (ValidationCode::bad_signature, i, "funding output not owned by sender");
		funded += out->value;
	}

	bool check_witness = msg.sender.kind == AddressKind::user || !msg.value.is_zero ();
	if (check_witness && !authorizes (msg.sender, msg.witness, msg.body_bytes ()))
		return error (ValidationCode::bad_signature, 0, "sender witness does not verify");
	if (funded != msg.value)
		return error (ValidationCode::value_mismatch, 0, "funding " + funded.to_string () + " != value " + msg.value.to_string ());
	return std::nullopt;
}

std::vector<Block> path_to (const std::map<Digest, Block> & known, Digest tip)
{
	std::vector<Block> path;
	while (true)
	{
		auto const & block = known.at (tip);
		path.push_back (block);
		if (block.height == 0)
			break;
		tip = block.prev_hash;
	}
	std::reverse (path.begin (), path.end ());
	return path;
}
}

std::string_view to_string (SubmitStatus s)
{
	switch (s)
	{
		case SubmitStatus::accepted:
			return "Accepted";
		case SubmitStatus::malformed:
			return "Malformed";
		case SubmitStatus::duplicate:
			return "Duplicate";
	}
	return "?";
}

void ChainConfig::validate () const
{
	if (chain_id.empty ())
		throw std::invalid_argument ("chain_id must not be empty");
	if (block_interval_ticks == 0)
		throw std::invalid_argument ("block_interval_ticks must be positive");
	if (max_tx_per_block == 0)
		throw std::invalid_argument ("max_tx_per_block must be positive");
	for (auto const & miner : miners)
		if (miner.kind == AddressKind::contract || !miner.well_formed ())
			throw std::invalid_argument ("miner address is not a user or multisig address");
	for (auto const & out : genesis)
	{
		if (out.value.is_zero ())
			throw std::invalid_argument ("genesis allocation must be positive");
		if (out.recipient.kind == AddressKind::contract || !out.recipient.well_formed ())
			throw std::invalid_argument ("genesis recipient is not a user or multisig address");
	}
}

std::vector<Address> ChainConfig::effective_miners () const
{
	if (!miners.empty ())
		return miners;
	return { derive_address (Identity::from_seed ("miner:" + chain_id).public_key ()) };
}

Block ChainConfig::genesis_block () const
{
	Block block;
	block.height = 0;
	block.producer = effective_miners ().front ();
	block.items.push_back (Coinbase{ chain_id, 0, genesis });
	return block;
}

Amount ChainState::total_value () const
{
	auto total = utxo.total ();
	for (auto const & [id, instance] : contracts)
		total += instance.locked_balance;
	return total;
}

Digest ChainState::digest () const
{
	Writer w;
	w.tag ("assetsim/state").u64 (height).digest (tip).u64 (minted.units ());
	utxo.encode (w);
	w.u32 (static_cast<std::uint32_t> (contracts.size ()));
	for (auto const & [id, instance] : contracts)
		instance.encode (w);
	w.u32 (static_cast<std::uint32_t> (message_ids.size ()));
	for (auto const & id : message_ids)
		w.digest (id);
	return w.hash ();
}

Digest ChainState::holdings_digest () const
{
	std::map<Address, Amount> balances;
	for (auto const & [op, out] : utxo)
		balances[out.recipient] += out.value;
	Writer w;
	w.tag ("assetsim/holdings").u32 (static_cast<std::uint32_t> (balances.size ()));
	for (auto const & [owner, amount] : balances)
	{
		owner.encode (w);
		w.u64 (amount.units ());
	}
	for (auto const & [id, instance] : contracts)
	{
		if (auto owner = instance.asset_owner ())
		{
			w.digest (id).u8 (static_cast<std::uint8_t> (instance.status));
			owner->encode (w);
		}
	}
	return w.hash ();
}

std::optional<ValidationError> validate_item (const BlockItem & item, const ChainState & state)
{
	if (std::holds_alternative<Coinbase> (item))
		return error (ValidationCode::malformed, 0, "coinbase items are produced by miners only");
	if (auto const * tx = std::get_if<ValueTransferTx> (&item))
		return validate_transfer (*tx, state.utxo);
	return validate_message (std::get<ContractMessage> (item), state);
}

ItemReceipt apply_item (const BlockItem & item, ChainState & state, const contract::ChainContext & ctx, std::uint32_t position)
{
	ItemReceipt receipt;
	receipt.item_id = item_id (item);
	receipt.kind = kind_of (item);
	receipt.height = ctx.height;
	receipt.position = position;

	if (auto const * cb = std::get_if<Coinbase> (&item))
	{
		apply_coinbase (*cb, state.utxo);
		state.minted += sum (cb->outputs);
		return receipt;
	}
	if (auto const * tx = std::get_if<ValueTransferTx> (&item))
	{
		apply_transfer_in_place (*tx, state.utxo);
		return receipt;
	}

	auto const & msg = std::get<ContractMessage> (item);
	for (auto const & op : msg.funding)
		state.utxo.spend (op);
	state.message_ids.insert (receipt.item_id);

	auto result = msg.is_deploy () ? contract::deploy (msg, ctx) : contract::execute (state.contracts.at (*msg.target), msg, ctx);
	if (result.ok () && result.instance)
	{
		receipt.contract_id = result.instance->id;
		state.contracts[result.instance->id] = *result.instance;
	}
	else if (!msg.is_deploy ())
	{
		receipt.contract_id = msg.target;
	}
	receipt.call_error = result.error;
	for (std::uint32_t i = 0; i < result.effect.payouts.size (); ++i)
	{
		auto const & payout = result.effect.payouts[i];
		state.utxo.insert ({ receipt.item_id, i }, TxOutput{ payout.amount, payout.recipient });
	}
	receipt.effect = std::move (result.effect);
	return receipt;
}

std::vector<ItemReceipt> apply_block (const Block & block, ChainState & state, const ChainConfig & config)
{
	auto fail = [&block] (const std::string & why) {
		return InvalidBlock ("block " + std::to_string (block.height) + ": " + why);
	};
	if (block.height != state.height + 1)
		throw fail ("height does not follow parent");
	if (block.prev_hash != state.tip)
		throw fail ("prev_hash does not match parent");
	auto miners = config.effective_miners ();
	if (std::find (miners.begin (), miners.end (), block.producer) == miners.end ())
		throw fail ("producer is not a configured miner");

	contract::ChainContext ctx{ config.chain_id, block.height };
	std::vector<ItemReceipt> receipts;
	std::uint64_t regular = 0;
	for (std::uint32_t i = 0; i < block.items.size (); ++i)
	{
		auto const & item = block.items[i];
		if (auto const * cb = std::get_if<Coinbase> (&item))
		{
			bool expected = i == 0 && !config.mining_reward.is_zero () && cb->chain_id == config.chain_id && cb->height == block.height
				&& cb->outputs.size () == 1 && cb->outputs[0] == TxOutput{ config.mining_reward, block.producer };
			if (!expected)
				throw fail ("unexpected coinbase");
		}
		else
		{
			if (auto err = validate_item (item, state))
				throw fail ("item " + std::to_string (i) + ": " + std::string (to_string (err->code)) + " " + err->detail);
			if (++regular > config.max_tx_per_block)
				throw fail ("too many items");
		}
		receipts.push_back (apply_item (item, state, ctx, i));
	}
	if (!config.mining_reward.is_zero () && (block.items.empty () || !std::holds_alternative<Coinbase> (block.items.front ())))
		throw fail ("missing coinbase");
	state.height = block.height;
	state.tip = block.hash ();
	return receipts;
}

ChainState genesis_state (const ChainConfig & config)
{
	ChainState state;
	auto genesis = config.genesis_block ();
	apply_item (genesis.items.front (), state, { config.chain_id, 0 }, 0);
	state.height = 0;
	state.tip = genesis.hash ();
	return state;
}

ChainState replay (const ChainConfig & config, std::span<const Block> blocks)
{
	if (blocks.empty () || !(blocks.front () == config.genesis_block ()))
		throw InvalidBlock ("first block is not the configured genesis");
	auto state = genesis_state (config);
	for (auto const & block : blocks.subspan (1))
		apply_block (block, state, config);
	return state;
}

TipCandidate choose_fork (std::span<const TipCandidate> candidates)
{
	if (candidates.empty ())
		throw std::invalid_argument ("choose_fork: no candidates");
	auto best = candidates.front ();
	for (auto const & c : candidates)
		if (c.height > best.height || (c.height == best.height && c.hash < best.hash))
			best = c;
	return best;
}

Chain::Chain (ChainConfig config) :
	config_ (std::move (config))
{
	config_.validate ();
	rng_.seed (config_.rng_seed);
	auto genesis = config_.genesis_block ();
	state_ = genesis_state (config_);
	blocks_.push_back (genesis);
	known_blocks_.emplace (state_.tip, genesis);
}

SubmitResult Chain::submit (BlockItem item)
{
	SubmitResult result;
	result.item_id = item_id (item);
	if (std::holds_alternative<Coinbase> (item))
	{
		result.status = SubmitStatus::malformed;
		result.detail = "coinbase items cannot be submitted";
		return result;
	}
	if (auto const * tx = std::get_if<ValueTransferTx> (&item); tx != nullptr && (tx->inputs.empty () || tx->outputs.empty ()))
	{
		result.status = SubmitStatus::malformed;
		result.detail = "transfer needs inputs and outputs";
		return result;
	}
	if (auto const * msg = std::get_if<ContractMessage> (&item); msg != nullptr && msg->function.empty ())
	{
		result.status = SubmitStatus::malformed;
		result.detail = "message without function";
		return result;
	}
	if (mempool_ids_.contains (result.item_id) || receipts_.contains (result.item_id))
	{
		result.status = SubmitStatus::duplicate;
		result.detail = "item already known";
		return result;
	}
	evictions_.erase (result.item_id);
	mempool_ids_.insert (result.item_id);
	mempool_.push_back (std::move (item));
	return result;
}

SubmitResult Chain::submit_bytes (ByteView data)
{
	try
	{
		return submit (parse_item (data));
	}
	catch (DecodeError const & e)
	{
		return SubmitResult{ SubmitStatus::malformed, Digest{}, e.what () };
	}
	catch (InvalidKey const & e)
	{
		return SubmitResult{ SubmitStatus::malformed, Digest{}, e.what () };
	}
}

Address Chain::pick_producer ()
{
	auto miners = config_.effective_miners ();
	return miners[rng_ () % miners.size ()];
}

std::optional<BlockProduced> Chain::produce_block (std::uint64_t now_ticks)
{
	if (now_ticks == 0 || now_ticks % config_.block_interval_ticks != 0)
		return std::nullopt;

	BlockProduced out;
	auto & block = out.block;
	block.height = state_.height + 1;
	block.prev_hash = state_.tip;
	block.producer = pick_producer ();
	block.tick = now_ticks;
	contract::ChainContext ctx{ config_.chain_id, block.height };

	if (!config_.mining_reward.is_zero ())
	{
		block.items.push_back (Coinbase{ config_.chain_id, block.height, { TxOutput{ config_.mining_reward, block.producer } } });
		out.receipts.push_back (apply_item (block.items.back (), state_, ctx, 0));
	}

	std::uint64_t taken = 0;
	while (taken < config_.max_tx_per_block && !mempool_.empty ())
	{
		auto item = std::move (mempool_.front ());
		mempool_.pop_front ();
		auto id = item_id (item);
		mempool_ids_.erase (id);
		if (auto err = validate_item (item, state_))
		{
			Eviction ev{ id, *err, block.height };
			evictions_[id] = ev;
			out.evictions.push_back (std::move (ev));
			continue;
		}
		auto position = static_cast<std::uint32_t> (block.items.size ());
		out.receipts.push_back (apply_item (item, state_, ctx, position));
		block.items.push_back (std::move (item));
		++taken;
	}

	state_.height = block.height;
	state_.tip = block.hash ();
	for (auto const & r : out.receipts)
		receipts_[r.item_id] = r;
	blocks_.push_back (block);
	known_blocks_.emplace (state_.tip, block);
	return out;
}

const contract::ContractInstance * Chain::find_contract (const Digest & id) const
{
	auto it = state_.contracts.find (id);
	return it == state_.contracts.end () ? nullptr : &it->second;
}

const contract::ContractInstance & Chain::contract (const Digest & id) const
{
	if (auto const * instance = find_contract (id))
		return *instance;
	throw NotFound ("no contract " + id.hex () + " on " + config_.chain_id);
}

const Block & Chain::block_at (std::uint64_t height) const
{
	if (height >= blocks_.size ())
		throw NotFound ("no block at height " + std::to_string (height) + " on " + config_.chain_id);
	return blocks_[height];
}

std::set<Outpoint> Chain::pending_spends () const
{
	std::set<Outpoint> pending;
	for (auto const & item : mempool_)
	{
		if (auto const * tx = std::get_if<ValueTransferTx> (&item))
			for (auto const & in : tx->inputs)
				pending.insert (in.prevout);
		if (auto const * msg = std::get_if<ContractMessage> (&item))
			pending.insert (msg->funding.begin (), msg->funding.end ());
	}
	return pending;
}

const ItemReceipt * Chain::find_receipt (const Digest & item_id) const
{
	auto it = receipts_.find (item_id);
	return it == receipts_.end () ? nullptr : &it->second;
}

const Eviction * Chain::find_eviction (const Digest & item_id) const
{
	auto it = evictions_.find (item_id);
	return it == evictions_.end () ? nullptr : &it->second;
}

std::vector<TipCandidate> Chain::tips () const
{
	std::set<Digest> parents;
	for (auto const & [hash, block] : known_blocks_)
		if (block.height > 0)
			parents.insert (block.prev_hash);
	std::vector<TipCandidate> out;
	for (auto const & [hash, block] : known_blocks_)
		if (!parents.contains (hash))
			out.push_back ({ block.height, hash });
	return out;
}

void Chain::import_block (const Block & block)
{
	auto hash = block.hash ();
	if (known_blocks_.contains (hash))
		return;
	if (block.height == 0 || !known_blocks_.contains (block.prev_hash))
		throw InvalidBlock ("block " + std::to_string (block.height) + ": unknown parent");
	auto branch = path_to (known_blocks_, block.prev_hash);
	auto state = replay (config_, branch);
	apply_block (block, state, config_);
	known_blocks_.emplace (hash, block);

	auto candidates = tips ();
	auto best = choose_fork (candidates);
	if (best.hash != state_.tip)
		rebuild_main_chain (best.hash);
}

void Chain::rebuild_main_chain (const Digest & tip)
{
	auto old_blocks = std::move (blocks_);
	blocks_ = path_to (known_blocks_, tip);

	state_ = genesis_state (config_);
	receipts_.clear ();
	for (auto const & block : std::span<const Block> (blocks_).subspan (1))
		for (auto & r : apply_block (block, state_, config_))
			receipts_[r.item_id] = std::move (r);

	std::deque<BlockItem> pool;
	std::set<Digest> pool_ids;
	auto keep = [&] (BlockItem item) {
		auto id = item_id (item);
		if (std::holds_alternative<Coinbase> (item) || receipts_.contains (id) || pool_ids.contains (id))
			return;
		pool_ids.insert (id);
		pool.push_back (std::move (item));
	};
	for (auto const & block : old_blocks)
		for (auto const & item : block.items)
			keep (item);
	for (auto & item : mempool_)
		keep (std::move (item));
	mempool_ = std::move (pool);
	mempool_ids_ = std::move (pool_ids);
}

}
