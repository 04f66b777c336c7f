#include <assetsim/chain/wallet.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/swap/swap.hpp>

#include <set>
#include <stdexcept>

namespace assetsim::swap {

std::string_view to_string (Category c)
{
	switch (c)
	{
		case Category::currency_intra:
			return "currency-intra";
		case Category::asset_for_currency_intra:
			return "asset-for-currency-intra";
		case Category::asset_for_currency_cross:
			return "asset-for-currency-cross";
		case Category::asset_for_asset:
			return "asset-for-asset";
	}
	return "?";
}

std::string_view to_string (SessionStatus s)
{
	static constexpr std::string_view names[] = { "setup", "locked", "completed", "refunded", "failed" };
	return names[static_cast<int> (s)];
}

std::string_view to_string (LegStatus s)
{
	static constexpr std::string_view names[] = { "unlocked", "lock_pending", "locked", "claim_pending", "claimed", "refund_pending", "refunded", "lock_failed" };
	return names[static_cast<int> (s)];
}

std::string_view to_string (Role r)
{
	return r == Role::initiator ? "initiator" : "responder";
}

std::optional<Role> role_from_string (std::string_view s)
{
	if (s == "initiator")
		return Role::initiator;
	if (s == "responder")
		return Role::responder;
	return std::nullopt;
}

std::string_view to_string (SwapErrorCode c)
{
	static constexpr std::string_view names[] = { "ConfigError", "UnknownChain", "UnknownParty", "BadItem" };
	return names[static_cast<int> (c)];
}

bool SwapLeg::settled () const
{
	switch (status)
	{
		case LegStatus::claimed:
		case LegStatus::refunded:
		case LegStatus::lock_failed:
			return true;
		case LegStatus::unlocked:
			return abandoned;
		default:
			return false;
	}
}

bool SwapSession::terminal () const
{
	return status == SessionStatus::completed || status == SessionStatus::refunded || status == SessionStatus::failed;
}

namespace {
json item_json (const SwapItem & item)
{
	if (auto const * a = std::get_if<Amount> (&item))
		return { { "amount", a->to_string () } };
	return { { "asset", std::get<AssetRef> (item).contract_id.hex () } };
}
}

json SwapSession::to_json () const
{
	json legs_j = json::array ();
	for (auto const & l : legs)
	{
		legs_j.push_back ({ { "chain", l.chain_id },
		{ "contract", l.contract_id ? json (l.contract_id->hex ()) : json (nullptr) },
		{ "locker", l.locker.to_string () },
		{ "beneficiary", l.beneficiary.to_string () },
		{ "item", item_json (l.item) },
		{ "timeout_height", l.timeout_height },
		{ "status", to_string (l.status) } });
	}
	json j{ { "session", session_id },
		{ "category", static_cast<int> (category) },
		{ "initiator", initiator },
		{ "responder", responder },
		{ "hash", hash.hex () },
		{ "status", to_string (status) },
		{ "legs", legs_j },
		{ "start_tick", start_tick },
		{ "end_tick", end_tick ? json (*end_tick) : json (nullptr) },
		{ "pre_holdings", pre.digest ().hex () },
		{ "post_holdings", post ? json (post->digest ().hex ()) : json (nullptr) },
		{ "atomic", atomic ? json (*atomic) : json (nullptr) } };
	json f{ { "refuse_reveal", faults.refuse_reveal } };
	if (faults.crashed)
	{
		f["crash"] = to_string (*faults.crashed);
		f["step"] = faults.crash_step;
	}
	j["faults"] = f;
	return j;
}

json TranscriptEntry::to_json () const
{
	return { { "tick", tick }, { "session", session }, { "chain", chain }, { "action", action }, { "outcome", outcome } };
}

Digest Holdings::digest () const
{
	Writer w;
	w.tag ("assetsim/swap-holdings");
	w.u64 (chains.size ());
	for (auto const & [id, c] : chains)
	{
		w.str (id);
		w.u64 (c.balances.size ());
		for (auto const & [a, v] : c.balances)
		{
			a.encode (w);
			w.u64 (v.units ());
		}
		w.u64 (c.asset_owners.size ());
		for (auto const & [cid, owner] : c.asset_owners)
		{
			w.digest (cid);
			owner.encode (w);
		}
	}
	return w.hash ();
}

Holdings exchanged (const SwapSession & session, const Holdings & pre)
{
	auto out = pre;
	for (auto const & leg : session.legs)
	{
		auto & c = out.chains[leg.chain_id];
		if (auto const * a = std::get_if<AssetRef> (&leg.item))
		{
			c.asset_owners[a->contract_id] = leg.beneficiary;
			continue;
		}
		auto amount = std::get<Amount> (leg.item);
		auto & from = c.balances[leg.locker];
		if (from < amount)
			return {};
		from -= amount;
		c.balances[leg.beneficiary] += amount;
	}
	return out;
}

bool audit_atomicity (const SwapSession & session, const Holdings & pre, const Holdings & post)
{
	bool moved = post == exchanged (session, pre);
	bool untouched = post == pre;
	return moved != untouched;
}

namespace {
Expected<chain::ItemReceipt, ValidationError> include (chain::Chain & chain, BlockItem item, std::uint64_t & tick)
{
	auto submitted = chain.submit (std::move (item));
	if (!submitted.accepted ())
	{
		auto code = submitted.status == chain::SubmitStatus::duplicate ? ValidationCode::double_spend : ValidationCode::malformed;
		return ValidationError{ code, 0, submitted.detail };
	}
	while (true)
	{
		chain.produce_block (++tick);
		if (auto const * r = chain.find_receipt (submitted.item_id))
			return *r;
		if (auto const * e = chain.find_eviction (submitted.item_id))
			return e->error;
	}
}
}

Expected<chain::ItemReceipt, ValidationError> execute_category1 (chain::Chain & chain, const ValueTransferTx & tx, std::uint64_t & tick)
{
	return include (chain, tx, tick);
}

Expected<chain::ItemReceipt, ValidationError> execute_category2 (chain::Chain & chain, const ContractMessage & buy, std::uint64_t & tick)
{
	return include (chain, buy, tick);
}

Coordinator::Coordinator (CoordinatorConfig config) :
	config_ (std::move (config)),
	watchtower_ (Identity::from_seed (config_.watchtower_seed))
{
}

void Coordinator::attach_chain (chain::Chain & chain)
{
	for (auto *& c : chains_)
	{
		if (c->id () == chain.id ())
		{
			c = &chain;
			return;
		}
	}
	chains_.push_back (&chain);
}

void Coordinator::add_party (const std::string & name, const Identity & id)
{
	parties_.insert_or_assign (name, id);
}

const Identity & Coordinator::party (const std::string & name) const
{
	auto it = parties_.find (name);
	if (it == parties_.end ())
		throw NotFound ("unknown party " + name);
	return it->second;
}

chain::Chain & Coordinator::chain_of (const std::string & id) const
{
	for (auto * c : chains_)
		if (c->id () == id)
			return *c;
	throw NotFound ("unknown chain " + id);
}

const SwapSession & Coordinator::session (std::uint64_t id) const
{
	if (id == 0 || id > sessions_.size ())
		throw NotFound ("unknown swap session");
	return sessions_[id - 1];
}

bool Coordinator::idle () const
{
	for (auto const & s : sessions_)
		if (!s.terminal ())
			return false;
	return true;
}

Holdings Coordinator::holdings (const SwapSession & s) const
{
	Holdings h;
	std::set<Address> parties{ s.legs[0].locker, s.legs[1].locker };
	for (auto const & leg : s.legs)
	{
		auto const & c = chain_of (leg.chain_id);
		auto & out = h.chains[leg.chain_id];
		for (auto const & p : parties)
			out.balances[p] = c.balance (p);
		if (auto const * a = std::get_if<AssetRef> (&leg.item))
		{
			auto const * inst = c.find_contract (a->contract_id);
			if (inst != nullptr && inst->live ())
				if (auto owner = inst->asset_owner ())
					out.asset_owners[a->contract_id] = *owner;
		}
	}
	return h;
}

Expected<std::uint64_t, SwapError> Coordinator::start_swap (const SwapSpec & spec, std::uint64_t tick)
{
	if (spec.category != Category::asset_for_currency_cross && spec.category != Category::asset_for_asset)
		return SwapError{ SwapErrorCode::config_error, "only categories 3 and 4 run as two-leg swaps" };
	if (!has_party (spec.initiator) || !has_party (spec.responder))
		return SwapError{ SwapErrorCode::unknown_party, spec.initiator + "/" + spec.responder };
	if (spec.initiator == spec.responder)
		return SwapError{ SwapErrorCode::config_error, "initiator and responder must differ" };
	if (spec.faults.crash_step < 1 || spec.faults.crash_step > protocol_steps)
		return SwapError{ SwapErrorCode::config_error, "crash step out of range" };

	chain::Chain * chains[2];
	LegSpec const * specs[2] = { &spec.initiator_leg, &spec.responder_leg };
	for (int i = 0; i < 2; ++i)
	{
		try
		{
			chains[i] = &chain_of (specs[i]->chain_id);
		}
		catch (const NotFound &)
		{
			return SwapError{ SwapErrorCode::unknown_chain, specs[i]->chain_id };
		}
		if (specs[i]->timeout_blocks == 0)
			return SwapError{ SwapErrorCode::config_error, "timeout must be positive" };
	}

	bool asset0 = std::holds_alternative<AssetRef> (specs[0]->item);
	bool asset1 = std::holds_alternative<AssetRef> (specs[1]->item);
	if (spec.category == Category::asset_for_asset && !(asset0 && asset1))
		return SwapError{ SwapErrorCode::config_error, "asset-for-asset needs an asset on both legs" };
	if (spec.category == Category::asset_for_currency_cross)
	{
		if (asset0 == asset1)
			return SwapError{ SwapErrorCode::config_error, "asset-for-currency needs one asset and one amount" };
		if (chains[0] == chains[1])
			return SwapError{ SwapErrorCode::config_error, "cross-chain swap needs two chains" };
	}

	auto interval_a = chains[0]->config ().block_interval_ticks;
	auto interval_b = chains[1]->config ().block_interval_ticks;
	auto deadline_a = spec.initiator_leg.timeout_blocks * interval_a;
	auto deadline_b = spec.responder_leg.timeout_blocks * interval_b;
	if (deadline_a < deadline_b + config_.margin_blocks * interval_b)
	{
		return SwapError{ SwapErrorCode::config_error,
			"initiator timeout " + std::to_string (deadline_a) + " ticks must be at least responder timeout " + std::to_string (deadline_b) + " plus " + std::to_string (config_.margin_blocks * interval_b) + " ticks" };
	}

	SwapSession s;
	s.session_id = sessions_.size () + 1;
	s.category = spec.category;
	s.initiator = spec.initiator;
	s.responder = spec.responder;
	s.faults = spec.faults;
	s.start_tick = tick;
	Address who[2] = { derive_address (party (spec.initiator).public_key ()), derive_address (party (spec.responder).public_key ()) };
	for (int i = 0; i < 2; ++i)
	{
		SwapLeg leg;
		leg.chain_id = specs[i]->chain_id;
		leg.locker = who[i];
		leg.beneficiary = who[1 - i];
		leg.item = specs[i]->item;
		leg.timeout_height = chains[i]->height () + specs[i]->timeout_blocks;
		if (auto const * a = std::get_if<AssetRef> (&leg.item))
		{
			auto const * inst = chains[i]->find_contract (a->contract_id);
			auto const * car = inst ? inst->as<contract::AuthCarState> () : nullptr;
			if (car == nullptr || !inst->live ())
				return SwapError{ SwapErrorCode::bad_item, "no live authenticated asset " + a->contract_id.hex () };
			if (car->owner != leg.locker || car->swap_locked ())
				return SwapError{ SwapErrorCode::bad_item, "asset not free for " + leg.locker.to_string () };
			leg.contract_id = a->contract_id;
		}
		else
		{
			auto amount = std::get<Amount> (leg.item);
			if (amount.is_zero () || chains[i]->balance (leg.locker) < amount)
				return SwapError{ SwapErrorCode::bad_item, "cannot lock " + amount.to_string () + " on " + leg.chain_id };
		}
		s.legs.push_back (std::move (leg));
	}

	Writer w;
	w.tag ("assetsim/swap-secret").u64 (s.session_id).str (s.initiator).str (s.responder).u64 (tick);
	auto seed = w.hash ();
	s.secret.assign (seed.bytes.begin (), seed.bytes.end ());
	s.hash = sha256 (ByteView{ s.secret });
	s.pre = holdings (s);
	sessions_.push_back (std::move (s));
	auto & added = sessions_.back ();
	note (tick, added, "", "setup", std::string (to_string (added.category)));
	return added.session_id;
}

void Coordinator::note (std::uint64_t tick, const SwapSession & s, const std::string & chain, std::string action, std::string outcome)
{
	transcript_.push_back ({ tick, s.session_id, chain, std::move (action), std::move (outcome) });
}

bool Coordinator::submit (SwapSession & s, std::size_t leg, std::string action, const Identity & who, ContractMessage msg, std::uint64_t tick)
{
	auto & l = s.legs[leg];
	msg.sender = derive_address (who.public_key ());
	msg.nonce = ++nonce_;
	msg.sign (who);
	auto result = chain_of (l.chain_id).submit (msg);
	if (!result.accepted ())
	{
		note (tick, s, l.chain_id, action, std::string (chain::to_string (result.status)));
		return false;
	}
	LegStatus on_success = LegStatus::locked;
	LegStatus on_failure = LegStatus::locked;
	if (action == "lock")
	{
		l.status = LegStatus::lock_pending;
		on_failure = LegStatus::lock_failed;
	}
	else if (action.starts_with ("claim"))
	{
		l.status = LegStatus::claim_pending;
		on_success = LegStatus::claimed;
	}
	else
	{
		l.status = LegStatus::refund_pending;
		on_success = LegStatus::refunded;
	}
	l.pending = result.item_id;
	pending_[result.item_id] = { s.session_id, leg, on_success, on_failure, action };
	note (tick, s, l.chain_id, std::move (action), "submitted");
	return true;
}

void Coordinator::lock (SwapSession & s, std::size_t leg, const Identity & who, std::uint64_t tick)
{
	auto & l = s.legs[leg];
	ContractMessage msg;
	if (auto const * a = std::get_if<AssetRef> (&l.item))
	{
		msg.target = a->contract_id;
		msg.function = contract::functions::lock_for_swap;
		msg.args = { s.hash, l.timeout_height, l.beneficiary };
	}
	else
	{
		auto amount = std::get<Amount> (l.item);
		auto & c = chain_of (l.chain_id);
		auto plan = chain::plan_funding (c, who, amount);
		if (!plan)
		{
			l.status = LegStatus::lock_failed;
			note (tick, s, l.chain_id, "lock", "insufficient funds");
			return;
		}
		if (plan->split)
		{
			auto split = c.submit (*plan->split);
			note (tick, s, l.chain_id, "split", std::string (chain::to_string (split.status)));
		}
		msg.contract_class = contract::class_name (contract::ContractClass::htlc_lockbox);
		msg.function = "constructor";
		msg.args = { l.beneficiary, s.hash, l.timeout_height };
		msg.value = amount;
		msg.funding = plan->funding;
	}
	if (!submit (s, leg, "lock", who, std::move (msg), tick))
		l.status = LegStatus::lock_failed;
}

bool Coordinator::lock_verified (const SwapSession & s, std::size_t leg) const
{
	auto const & l = s.legs[leg];
	if (!l.contract_id)
		return false;
	auto const * inst = chain_of (l.chain_id).find_contract (*l.contract_id);
	if (inst == nullptr || !inst->live ())
		return false;
	if (auto const * box = inst->as<contract::LockboxState> ())
	{
		return box->status == contract::LockStatus::locked && box->locker == l.locker && box->beneficiary == l.beneficiary && box->hash == s.hash && box->timeout_height == l.timeout_height && inst->locked_balance == std::get<Amount> (l.item);
	}
	if (auto const * car = inst->as<contract::AuthCarState> ())
	{
		return car->swap_locked () && car->owner == l.locker && car->swap->locker == l.locker && car->swap->beneficiary == l.beneficiary && car->swap->hash == s.hash && car->swap->timeout_height == l.timeout_height;
	}
	return false;
}

std::optional<Bytes> Coordinator::revealed_secret (const SwapSession & s) const
{
	auto const & l = s.legs[1];
	if (!l.contract_id)
		return std::nullopt;
	auto const * inst = chain_of (l.chain_id).find_contract (*l.contract_id);
	if (inst == nullptr)
		return std::nullopt;
	std::optional<Bytes> preimage;
	if (auto const * box = inst->as<contract::LockboxState> ())
		preimage = box->preimage;
	else if (auto const * car = inst->as<contract::AuthCarState> (); car && car->swap && car->swap->hash == s.hash)
		preimage = car->swap->preimage;
	if (preimage && sha256 (ByteView{ *preimage }) == s.hash)
		return preimage;
	return std::nullopt;
}

void Coordinator::observe_block (std::string_view chain_id, const chain::BlockProduced & produced)
{
	auto resolve = [&] (const Digest & id, bool ok, const std::string & outcome, const std::optional<Digest> & created) {
		auto it = pending_.find (id);
		if (it == pending_.end ())
			return;
		auto p = it->second;
		pending_.erase (it);
		auto & s = sessions_[p.session - 1];
		auto & l = s.legs[p.leg];
		if (l.chain_id != chain_id)
			return;
		l.pending.reset ();
		l.status = ok ? p.on_success : p.on_failure;
		if (ok && p.action == "lock" && !l.contract_id)
			l.contract_id = created;
		if (ok && p.action == "lock" && s.status == SessionStatus::setup)
			s.status = SessionStatus::locked;
		note (produced.block.tick, s, l.chain_id, p.action, outcome);
	};
	for (auto const & r : produced.receipts)
	{
		std::string outcome = r.succeeded () ? "ok" : std::string (contract::to_string (*r.call_error));
		resolve (r.item_id, r.succeeded (), outcome, r.contract_id);
	}
	for (auto const & e : produced.evictions)
		resolve (e.item_id, false, "evicted " + std::string (to_string (e.error.code)), std::nullopt);
}

namespace {
std::uint32_t next_step (const SwapSession & s)
{
	auto const & a = s.legs[0];
	auto const & b = s.legs[1];
	if (a.status == LegStatus::unlocked)
		return 1;
	if (b.status == LegStatus::unlocked)
		return 2;
	if (b.status == LegStatus::lock_pending || b.status == LegStatus::locked)
		return 3;
	if (a.status != LegStatus::claimed)
		return 4;
	return protocol_steps + 1;
}
}

void Coordinator::advance (SwapSession & s, std::uint64_t tick)
{
	auto & a = s.legs[0];
	auto & b = s.legs[1];
	auto & ca = chain_of (a.chain_id);
	auto & cb = chain_of (b.chain_id);
	auto open = [] (const chain::Chain & c, const SwapLeg & l) { return c.height () + 1 < l.timeout_height; };

	if (s.faults.crashed && !s.crash_triggered && next_step (s) >= s.faults.crash_step)
	{
		s.crash_triggered = true;
		note (tick, s, "", "crash", std::string (to_string (*s.faults.crashed)) + " at step " + std::to_string (next_step (s)));
	}
	if (s.crash_triggered && !s.recovered)
	{
		auto const & own = s.legs[*s.faults.crashed == Role::initiator ? 0 : 1];
		bool back = s.faults.recover_tick ? tick >= *s.faults.recover_tick : !open (chain_of (own.chain_id), own);
		if (back)
		{
			s.recovered = true;
			note (tick, s, "", "recover", std::string (to_string (*s.faults.crashed)));
		}
	}
	auto alive = [&] (Role r) { return !(s.crash_triggered && *s.faults.crashed == r && !s.recovered); };
	auto fresh = [&] (Role r) { return !(s.crash_triggered && *s.faults.crashed == r); };
	auto const & initiator = party (s.initiator);
	auto const & responder = party (s.responder);

	if (a.status == LegStatus::unlocked && !a.abandoned)
	{
		if (fresh (Role::initiator) && open (ca, a))
			lock (s, 0, initiator, tick);
		else if (alive (Role::initiator))
		{
			a.abandoned = true;
			note (tick, s, a.chain_id, "abandon", "initiator");
		}
	}

	if (b.status == LegStatus::unlocked && !b.abandoned)
	{
		if (a.settled ())
			b.abandoned = true;
		else if (a.status == LegStatus::locked)
		{
			if (fresh (Role::responder) && open (cb, b) && lock_verified (s, 0))
				lock (s, 1, responder, tick);
			else if (alive (Role::responder))
			{
				b.abandoned = true;
				note (tick, s, b.chain_id, "abandon", "responder");
			}
		}
	}

	if (b.status == LegStatus::locked && fresh (Role::initiator) && !s.faults.refuse_reveal && open (cb, b) && lock_verified (s, 1))
	{
		ContractMessage claim;
		claim.target = b.contract_id;
		claim.function = std::holds_alternative<AssetRef> (b.item) ? contract::functions::claim_with_secret : contract::functions::claim;
		claim.args = { s.secret };
		submit (s, 1, "claim", initiator, std::move (claim), tick);
	}

	if (a.status == LegStatus::locked && b.status == LegStatus::claimed && open (ca, a))
	{
		if (auto secret = revealed_secret (s))
		{
			ContractMessage claim;
			claim.target = a.contract_id;
			claim.function = std::holds_alternative<AssetRef> (a.item) ? contract::functions::claim_with_secret : contract::functions::claim;
			claim.args = { *secret };
			if (fresh (Role::responder))
				submit (s, 0, "claim", responder, std::move (claim), tick);
			else if (config_.watchtower)
				submit (s, 0, "claim (watchtower)", watchtower_, std::move (claim), tick);
		}
	}

	for (std::size_t i = 0; i < 2; ++i)
	{
		auto & l = s.legs[i];
		auto role = i == 0 ? Role::initiator : Role::responder;
		if (l.status == LegStatus::locked && !open (chain_of (l.chain_id), l) && alive (role))
		{
			ContractMessage refund;
			refund.target = l.contract_id;
			refund.function = std::holds_alternative<AssetRef> (l.item) ? contract::functions::refund_swap : contract::functions::refund;
			submit (s, i, "refund", i == 0 ? initiator : responder, std::move (refund), tick);
		}
	}

	if (a.settled () && b.settled ())
		finish (s, tick);
}

void Coordinator::finish (SwapSession & s, std::uint64_t tick)
{
	std::size_t claimed = 0;
	for (auto const & l : s.legs)
		claimed += l.status == LegStatus::claimed;
	if (claimed == s.legs.size ())
		s.status = SessionStatus::completed;
	else if (claimed == 0)
		s.status = SessionStatus::refunded;
	else
		s.status = SessionStatus::failed;
	s.end_tick = tick;
	s.post = holdings (s);
	s.atomic = audit_atomicity (s, s.pre, *s.post);
	note (tick, s, "", "finish", std::string (to_string (s.status)) + (*s.atomic ? " atomic" : " NOT atomic"));
}

void Coordinator::step (std::uint64_t tick)
{
	for (auto & s : sessions_)
		if (!s.terminal ())
			advance (s, tick);
}

Expected<SessionStatus, SwapError> Coordinator::run_cross_chain_swap (const SwapSpec & spec, std::uint64_t & tick, std::uint64_t max_ticks)
{
	auto id = start_swap (spec, tick);
	if (!id)
		return id.error ();
	step (tick);
	for (std::uint64_t n = 0; n < max_ticks && !session (*id).terminal (); ++n)
	{
		++tick;
		for (auto * c : chains_)
			if (auto produced = c->produce_block (tick))
				observe_block (c->id (), *produced);
		step (tick);
	}
	return session (*id).status;
}

}
