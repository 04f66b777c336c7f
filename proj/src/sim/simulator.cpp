#include <assetsim/chain/wallet.hpp>
#include <assetsim/sim/simulator.hpp>

#include <algorithm>

namespace assetsim::sim {

namespace {
constexpr Amount lane_value{ 1000 };

registry::ValidatorMode mode_from_string (std::string_view s)
{
	if (s == "crashed")
		return registry::ValidatorMode::crashed;
	if (s == "byzantine")
		return registry::ValidatorMode::byzantine;
	return registry::ValidatorMode::honest;
}

std::string result_of (const chain::Chain & c, const Digest & item)
{
	if (auto const * r = c.find_receipt (item))
	{
		if (r->call_error)
			return "included@" + std::to_string (r->height) + ":" + std::string (contract::to_string (*r->call_error));
		return "included@" + std::to_string (r->height);
	}
	if (auto const * e = c.find_eviction (item))
		return "evicted:" + std::string (to_string (e->error.code));
	return "pending";
}

json vars_json (const StateVars & vars)
{
	json j = json::object ();
	for (auto const & [k, v] : vars)
		j[k] = to_json (v);
	return j;
}
}

Simulator::Simulator (Scenario scenario) :
	scenario_ (std::move (scenario)),
	registry_ (scenario_.registry),
	coordinator_ (scenario_.swap)
{
	for (auto const & config : scenario_.chains)
		chains_.push_back (std::make_unique<chain::Chain> (config));
	for (auto & c : chains_)
	{
		registry_.attach_chain (*c);
		coordinator_.attach_chain (*c);
	}
	for (auto const & name : scenario_.parties)
	{
		auto id = party_identity (name);
		party_by_address_.emplace (derive_address (id.public_key ()), name);
		coordinator_.add_party (name, id);
		identities_.emplace (name, std::move (id));
	}
}

chain::Chain & Simulator::chain (std::string_view id)
{
	for (auto & c : chains_)
		if (c->id () == id)
			return *c;
	throw NotFound ("no chain " + std::string (id));
}

const chain::Chain & Simulator::chain (std::string_view id) const
{
	return const_cast<Simulator *> (this)->chain (id);
}

const Identity & Simulator::identity (const std::string & party) const
{
	return identities_.at (party);
}

std::optional<std::string> Simulator::party_of (const Address & a) const
{
	auto it = party_by_address_.find (a);
	if (it == party_by_address_.end ())
		return std::nullopt;
	return it->second;
}

std::optional<Digest> Simulator::contract_id (std::string_view handle) const
{
	auto it = handles_.find (std::string (handle));
	if (it == handles_.end ())
		return std::nullopt;
	auto const & h = it->second;
	if (h.key)
	{
		auto const * entry = registry_.find (*h.key);
		if (entry == nullptr)
			return std::nullopt;
		return entry->contract_id;
	}
	auto const * r = chain (h.chain).find_receipt (*h.deploy_message);
	if (r == nullptr || !r->succeeded ())
		return std::nullopt;
	return r->contract_id;
}

std::optional<std::uint64_t> Simulator::swap_session (std::string_view handle) const
{
	auto it = swaps_.find (std::string (handle));
	if (it == swaps_.end ())
		return std::nullopt;
	return it->second;
}

void Simulator::run ()
{
	while (step ())
		;
}

bool Simulator::step ()
{
	if (finished_)
		return false;
	auto tick = next_tick_;
	registry_.set_tick (tick);
	while (next_event_ < scenario_.events.size () && scenario_.events[next_event_].tick == tick)
		fire (scenario_.events[next_event_++], tick);
	for (auto & g : loads_)
		if (tick >= g.from && tick < g.until)
			top_up (g, tick);

	std::vector<std::pair<std::string, chain::BlockProduced>> produced;
	for (auto & c : chains_)
		if (auto b = c->produce_block (tick))
			produced.emplace_back (c->id (), std::move (*b));
	for (auto const & [id, b] : produced)
		registry_.observe_block (id, b);
	for (auto const & [id, b] : produced)
		coordinator_.observe_block (id, b);
	coordinator_.step (tick);

	check_invariants (tick);
	++next_tick_;
	if (!violations_.empty () || next_tick_ > scenario_.ticks)
		finished_ = true;
	return !finished_;
}

void Simulator::check_invariants (std::uint64_t tick)
{
	for (auto const & c : chains_)
		if (c->state ().total_value () != c->state ().minted)
			violations_.push_back ({ tick, "chain " + c->id () + ": value " + c->state ().total_value ().to_string () + " != minted " + c->state ().minted.to_string () });
	for (auto & v : registry_.check_invariants ())
		violations_.push_back ({ tick, "registry: " + v });
	for (auto const & s : coordinator_.sessions ())
		if (s.terminal () && s.atomic && !*s.atomic)
			violations_.push_back ({ tick, "swap " + std::to_string (s.session_id) + " is not atomic" });
}

std::optional<Value> Simulator::resolve_arg (const json & arg, const chain::Chain & c) const
{
	if (arg.is_number_unsigned ())
		return Value{ arg.get<std::uint64_t> () };
	if (arg.is_string ())
		return Value{ arg.get<std::string> () };
	auto const kind = arg.begin ().key ();
	auto const & v = arg.begin ().value ();
	if (kind == "party")
		return Value{ derive_address (identity (v.get<std::string> ()).public_key ()) };
	if (kind == "amount")
		return Value{ Amount::parse (v.get<std::string> ()) };
	if (kind == "u64")
		return Value{ v.get<std::uint64_t> () };
	if (kind == "height_plus")
		return Value{ c.height () + v.get<std::uint64_t> () };
	if (kind == "string")
		return Value{ v.get<std::string> () };
	if (kind == "sha256")
		return Value{ sha256 (v.get<std::string> ()) };
	if (kind == "text")
	{
		auto s = v.get<std::string> ();
		return Value{ Bytes (s.begin (), s.end ()) };
	}
	auto id = contract_id (v.get<std::string> ());
	if (!id)
		return std::nullopt;
	return Value{ contract_address (*id) };
}

std::optional<chain::SubmitResult> Simulator::submit_funded (chain::Chain & c, const Identity & sender, ContractMessage msg)
{
	msg.sender = derive_address (sender.public_key ());
	msg.nonce = ++nonce_;
	if (!msg.value.is_zero ())
	{
		auto plan = chain::plan_funding (c, sender, msg.value);
		if (!plan)
			return std::nullopt;
		if (plan->split)
			c.submit (*plan->split);
		msg.funding = plan->funding;
	}
	msg.sign (sender);
	return c.submit (std::move (msg));
}

registry::RegistrationRequest Simulator::registration (const json & a) const
{
	registry::RegistrationRequest req;
	req.key = { a.value ("asset_class", std::string ("car")), a.at ("id").get<std::string> () };
	req.make = a.at ("make").get<std::string> ();
	req.model = a.at ("model").get<std::string> ();
	req.year = a.at ("year").get<std::uint64_t> ();
	req.price = Amount::parse (a.at ("price").get<std::string> ());
	req.tax_percent = a.at ("tax_percent").get<std::uint64_t> ();
	req.owner = derive_address (identity (a.at ("owner").get<std::string> ()).public_key ());
	req.target_chain = a.at ("chain").get<std::string> ();
	return req;
}

void Simulator::fire (const Event & e, std::uint64_t tick)
{
	auto const & a = e.args;
	EventOutcome out{ tick, e.index, e.type, "ok", "", std::nullopt, std::nullopt };
	auto submitted = [&] (chain::Chain & c, const chain::SubmitResult & r) {
		out.outcome = std::string (chain::to_string (r.status));
		out.detail = r.detail;
		out.chain = c.id ();
		out.item = r.item_id;
	};
	auto registry_result = [&] (auto const & r) {
		if (!r)
			out.outcome = std::string (registry::to_string (r.error ()));
	};
	auto stolen = [&] (const std::string & thief, std::uint64_t epoch) -> const std::vector<Identity> * {
		auto t = stolen_.find (thief);
		if (t == stolen_.end ())
			return nullptr;
		auto k = t->second.find (epoch);
		return k == t->second.end () ? nullptr : &k->second;
	};

	switch (e.type)
	{
		case EventType::submit_tx:
		{
			auto & c = chain (a.at ("chain").get<std::string> ());
			std::vector<TxOutput> outputs;
			if (a.contains ("to"))
				outputs.push_back ({ Amount::parse (a.at ("amount").get<std::string> ()), derive_address (identity (a.at ("to").get<std::string> ()).public_key ()) });
			else
				for (auto const & o : a.at ("outputs"))
					outputs.push_back ({ Amount::parse (o.at ("amount").get<std::string> ()), derive_address (identity (o.at ("to").get<std::string> ()).public_key ()) });

			std::optional<ValueTransferTx> tx;
			if (a.contains ("from"))
			{
				tx = chain::make_transfer (c, identity (a.at ("from").get<std::string> ()), std::move (outputs));
				if (!tx)
				{
					out.outcome = "InsufficientFunds";
					break;
				}
			}
			else
			{
				tx.emplace ();
				std::vector<std::optional<std::string>> signers;
				for (auto const & in : a.at ("inputs"))
				{
					Outpoint op;
					std::optional<Address> owner;
					if (in.contains ("genesis"))
					{
						op = { Coinbase{ c.id (), 0, c.config ().genesis }.id (), static_cast<std::uint32_t> (in.at ("genesis").get<std::uint64_t> ()) };
						owner = c.config ().genesis.at (op.index).recipient;
					}
					else
					{
						auto const & named = txs_.at (in.at ("tx").get<std::string> ());
						op = { named.tx.id (), static_cast<std::uint32_t> (in.at ("index").get<std::uint64_t> ()) };
						if (op.index < named.tx.outputs.size ())
							owner = named.tx.outputs[op.index].recipient;
					}
					tx->inputs.push_back ({ op, {} });
					signers.push_back (owner ? party_of (*owner) : std::nullopt);
				}
				tx->outputs = std::move (outputs);
				for (std::size_t i = 0; i < signers.size (); ++i)
					if (signers[i])
						tx->sign_input (i, identity (*signers[i]));
			}
			if (a.contains ("as"))
				txs_[a.at ("as").get<std::string> ()] = { c.id (), *tx };
			submitted (c, c.submit (*tx));
			break;
		}
		case EventType::deploy:
		case EventType::call:
		{
			ContractMessage msg;
			std::string chain_id;
			if (e.type == EventType::deploy)
			{
				chain_id = a.at ("chain").get<std::string> ();
				msg.contract_class = a.at ("class").get<std::string> ();
				msg.function = std::string (constructor_function);
			}
			else
			{
				auto target = a.at ("target").get<std::string> ();
				chain_id = handles_.at (target).chain;
				auto id = contract_id (target);
				if (!id)
				{
					out.outcome = "UnresolvedHandle";
					out.detail = target;
					break;
				}
				msg.target = *id;
				msg.function = a.at ("function").get<std::string> ();
			}
			auto & c = chain (chain_id);
			bool resolved = true;
			for (auto const & arg : a.value ("args", json::array ()))
			{
				auto v = resolve_arg (arg, c);
				if (!v)
				{
					resolved = false;
					break;
				}
				msg.args.push_back (std::move (*v));
			}
			if (!resolved)
			{
				out.outcome = "UnresolvedHandle";
				break;
			}
			if (a.contains ("value"))
				msg.value = Amount::parse (a.at ("value").get<std::string> ());
			auto r = submit_funded (c, identity (a.at ("sender").get<std::string> ()), std::move (msg));
			if (!r)
			{
				out.outcome = "InsufficientFunds";
				break;
			}
			submitted (c, *r);
			if (e.type == EventType::deploy)
				handles_[a.at ("as").get<std::string> ()] = { chain_id, r->item_id, std::nullopt };
			break;
		}
		case EventType::register_asset:
		{
			auto req = registration (a);
			handles_[a.at ("as").get<std::string> ()] = { req.target_chain, std::nullopt, req.key };
			auto r = registry_.register_asset (req);
			registry_result (r);
			if (r)
			{
				out.chain = r->chain_id;
				out.item = r->deploy_message;
			}
			break;
		}
		case EventType::forge_registration:
		{
			auto epoch = a.at ("epoch").get<std::uint64_t> ();
			auto const * keys = stolen (a.at ("thief").get<std::string> (), epoch);
			if (keys == nullptr)
			{
				out.outcome = "NoStolenKeys";
				break;
			}
			auto req = registration (a);
			auto r = registry_.register_asset (req, registry::endorse (req, epoch, *keys));
			registry_result (r);
			break;
		}
		case EventType::buy:
		{
			auto handle = a.at ("asset").get<std::string> ();
			auto id = contract_id (handle);
			auto & c = chain (handles_.at (handle).chain);
			auto const * instance = id ? c.find_contract (*id) : nullptr;
			if (instance == nullptr)
			{
				out.outcome = "UnresolvedHandle";
				out.detail = handle;
				break;
			}
			Address current;
			if (a.contains ("current_owner"))
				current = derive_address (identity (a.at ("current_owner").get<std::string> ()).public_key ());
			else if (auto owner = instance->asset_owner ())
				current = *owner;
			ContractMessage msg;
			msg.target = *id;
			msg.function = std::string (contract::functions::buy);
			msg.args.push_back (current);
			msg.value = Amount::parse (a.at ("amount").get<std::string> ());
			auto r = submit_funded (c, identity (a.at ("buyer").get<std::string> ()), std::move (msg));
			if (!r)
			{
				out.outcome = "InsufficientFunds";
				break;
			}
			submitted (c, *r);
			break;
		}
		case EventType::cancel:
		{
			auto const & h = handles_.at (a.at ("asset").get<std::string> ());
			auto r = registry_.cancel_registration (registry::CancelRequest::make (*h.key, identity (a.at ("requester").get<std::string> ()), ++nonce_));
			registry_result (r);
			break;
		}
		case EventType::rotate:
		{
			std::optional<std::uint32_t> threshold;
			if (a.contains ("threshold"))
				threshold = static_cast<std::uint32_t> (a.at ("threshold").get<std::uint64_t> ());
			auto r = registry_.rotate_epoch (threshold);
			registry_result (r);
			if (r)
				out.detail = "epoch " + std::to_string (*r);
			break;
		}
		case EventType::revoke:
		case EventType::detect_theft:
		{
			auto r = registry_.revoke_epoch (a.at ("epoch").get<std::uint64_t> ());
			registry_result (r);
			if (r)
				out.detail = "revoked epoch " + std::to_string (*r) + ", active " + std::to_string (registry_.active_epoch ().index);
			break;
		}
		case EventType::steal_keys:
		{
			auto epoch = a.at ("epoch").get<std::uint64_t> ();
			if (epoch >= registry_.epochs ().size ())
			{
				out.outcome = std::string (registry::to_string (registry::RegistryError::no_such_epoch));
				break;
			}
			stolen_[a.at ("thief").get<std::string> ()][epoch] = registry_.epoch (epoch).keys;
			break;
		}
		case EventType::forge_destroy:
		{
			auto epoch = a.at ("epoch").get<std::uint64_t> ();
			auto const * keys = stolen (a.at ("thief").get<std::string> (), epoch);
			if (keys == nullptr)
			{
				out.outcome = "NoStolenKeys";
				break;
			}
			auto handle = a.at ("asset").get<std::string> ();
			auto id = contract_id (handle);
			if (!id)
			{
				out.outcome = "UnresolvedHandle";
				out.detail = handle;
				break;
			}
			auto & c = chain (handles_.at (handle).chain);
			ContractMessage msg;
			msg.sender = registry_.epoch (epoch).multisig;
			msg.target = *id;
			msg.function = std::string (contract::functions::destroy);
			msg.nonce = ++nonce_;
			msg.sign (*keys);
			submitted (c, c.submit (std::move (msg)));
			break;
		}
		case EventType::crash_validator:
			registry_.set_validator_mode (a.at ("slot").get<std::size_t> (), mode_from_string (a.value ("mode", std::string ("crashed"))));
			break;
		case EventType::start_swap:
		{
			swap::SwapSpec spec;
			spec.category = static_cast<swap::Category> (a.at ("category").get<int> ());
			spec.initiator = a.at ("initiator").get<std::string> ();
			spec.responder = a.at ("responder").get<std::string> ();
			bool resolved = true;
			auto leg = [&] (const json & l) {
				swap::LegSpec s;
				s.chain_id = l.at ("chain").get<std::string> ();
				s.timeout_blocks = l.at ("timeout_blocks").get<std::uint64_t> ();
				if (l.contains ("amount"))
					s.item = Amount::parse (l.at ("amount").get<std::string> ());
				else if (auto id = contract_id (l.at ("asset").get<std::string> ()))
					s.item = swap::AssetRef{ *id };
				else
					resolved = false;
				return s;
			};
			spec.initiator_leg = leg (a.at ("initiator_leg"));
			spec.responder_leg = leg (a.at ("responder_leg"));
			if (!resolved)
			{
				out.outcome = "UnresolvedHandle";
				break;
			}
			if (a.contains ("faults"))
			{
				auto const & f = a.at ("faults");
				if (f.contains ("crash"))
					spec.faults.crashed = swap::role_from_string (f.at ("crash").get<std::string> ());
				spec.faults.crash_step = static_cast<std::uint32_t> (f.value ("step", std::uint64_t{ 1 }));
				if (f.contains ("recover_tick"))
					spec.faults.recover_tick = f.at ("recover_tick").get<std::uint64_t> ();
				spec.faults.refuse_reveal = f.value ("refuse_reveal", false);
			}
			auto r = coordinator_.start_swap (spec, tick);
			if (!r)
			{
				out.outcome = std::string (swap::to_string (r.error ().code));
				out.detail = r.error ().detail;
				break;
			}
			out.detail = "session " + std::to_string (*r);
			if (a.contains ("as"))
				swaps_[a.at ("as").get<std::string> ()] = *r;
			break;
		}
		case EventType::saturate_chain:
		{
			auto & c = chain (a.at ("chain").get<std::string> ());
			LoadGenerator g;
			g.chain = c.id ();
			g.from = a.at ("from_tick").get<std::uint64_t> ();
			g.until = a.at ("until_tick").get<std::uint64_t> ();
			g.loader = Identity::from_seed ("load:" + c.id () + ":" + std::to_string (e.index));
			auto lanes = a.value ("lanes", 4 * c.config ().max_tx_per_block);
			auto loader = derive_address (g.loader->public_key ());
			std::vector<TxOutput> outputs (lanes, TxOutput{ lane_value, loader });
			auto tx = chain::make_transfer (c, identity (a.at ("funder").get<std::string> ()), std::move (outputs));
			if (!tx)
			{
				out.outcome = "InsufficientFunds";
				break;
			}
			for (std::uint32_t i = 0; i < lanes; ++i)
				g.lanes.push_back ({ tx->id (), i });
			submitted (c, c.submit (*tx));
			out.detail = std::to_string (lanes) + " lanes";
			loads_.push_back (std::move (g));
			break;
		}
	}
	outcomes_.push_back (std::move (out));
}

void Simulator::top_up (LoadGenerator & g, std::uint64_t)
{
	auto & c = chain (g.chain);
	auto target = 2 * c.config ().max_tx_per_block;
	auto pending = c.pending_spends ();
	auto loader = derive_address (g.loader->public_key ());
	for (auto & lane : g.lanes)
	{
		if (c.mempool ().size () >= target)
			break;
		if (pending.contains (lane) || !c.state ().utxo.contains (lane))
			continue;
		ValueTransferTx tx;
		tx.inputs.push_back ({ lane, {} });
		tx.outputs.push_back ({ lane_value, loader });
		tx.sign_input (0, *g.loader);
		if (c.submit (tx).accepted ())
			lane = { tx.id (), 0 };
	}
}

MetricsReport Simulator::report () const
{
	MetricsReport r;
	r.scenario = scenario_.name;
	r.seed = scenario_.seed;
	r.ticks = scenario_.ticks;
	r.tick_seconds = scenario_.tick_seconds;
	if (loads_.empty ())
	{
		r.window_start = 1;
		r.window_end = std::max<std::uint64_t> (1, next_tick_);
	}
	else
	{
		r.window_start = loads_.front ().from;
		r.window_end = loads_.front ().until;
		for (auto const & g : loads_)
		{
			r.window_start = std::min (r.window_start, g.from);
			r.window_end = std::max (r.window_end, g.until);
		}
	}

	auto non_coinbase = [] (const Block & b) {
		return static_cast<std::uint64_t> (std::count_if (b.items.begin (), b.items.end (), [] (auto const & i) { return kind_of (i) != ItemKind::coinbase; }));
	};
	for (auto const & c : chains_)
	{
		ChainMetrics m;
		m.chain_id = c->id ();
		m.height = c->height ();
		m.state_digest = c->state ().digest ().hex ();
		m.holdings_digest = c->state ().holdings_digest ().hex ();
		m.capacity_tps = static_cast<double> (c->config ().max_tx_per_block) / static_cast<double> (c->config ().block_interval_ticks * scenario_.tick_seconds);
		for (auto const & b : c->blocks ())
		{
			auto n = non_coinbase (b);
			m.included += n;
			if (b.tick >= r.window_start && b.tick < r.window_end)
				m.window_included += n;
		}
		if (r.window_seconds () > 0)
			m.tps = static_cast<double> (m.window_included) / static_cast<double> (r.window_seconds ());
		for (auto const & g : loads_)
		{
			if (g.chain != c->id ())
				continue;
			m.loaded = true;
			auto interval = c->config ().block_interval_ticks;
			for (auto t = g.from; t < g.until && !m.drained_at; ++t)
			{
				if (t == 0 || t % interval != 0)
					continue;
				auto it = std::find_if (c->blocks ().begin (), c->blocks ().end (), [t] (const Block & b) { return b.tick == t; });
				if (it == c->blocks ().end () || non_coinbase (*it) < c->config ().max_tx_per_block)
					m.drained_at = t;
			}
		}
		r.chains.push_back (std::move (m));
	}
	r.aggregate_tps = measure_aggregate_tps (r).aggregate;
	if (!loads_.empty ())
		r.warnings = measure_aggregate_tps (r).not_saturated;
	r.tax_by_epoch = registry_.tax_by_epoch ();
	r.registry_ledger_digest = registry_.ledger_digest ().hex ();
	r.violations = violations_;
	if (!violations_.empty ())
		r.aborted_at = violations_.front ().tick;

	json balances = json::object ();
	for (auto const & c : chains_)
	{
		json per = json::object ();
		for (auto const & name : scenario_.parties)
			per[name] = c->balance (derive_address (identity (name).public_key ())).to_string ();
		balances[c->id ()] = per;
	}
	json contracts = json::object ();
	for (auto const & [name, h] : handles_)
	{
		auto id = contract_id (name);
		auto const * instance = id ? chain (h.chain).find_contract (*id) : nullptr;
		if (instance == nullptr)
		{
			contracts[name] = { { "chain", h.chain }, { "status", "absent" } };
			continue;
		}
		contracts[name] = { { "chain", h.chain },
			{ "id", instance->id.hex () },
			{ "class", contract::class_name (instance->cls) },
			{ "status", contract::to_string (instance->status) },
			{ "locked_balance", instance->locked_balance.to_string () },
			{ "state", vars_json (instance->state_vars ()) } };
	}
	json events = json::array ();
	for (auto const & o : outcomes_)
	{
		json j{ { "tick", o.tick }, { "index", o.index }, { "type", to_string (o.type) }, { "outcome", o.outcome } };
		if (!o.detail.empty ())
			j["detail"] = o.detail;
		if (o.chain && o.item)
		{
			j["chain"] = *o.chain;
			j["item"] = o.item->hex ();
			j["result"] = result_of (chain (*o.chain), *o.item);
		}
		events.push_back (std::move (j));
	}
	json swaps = json::array ();
	for (auto const & s : coordinator_.sessions ())
		swaps.push_back (s.to_json ());
	json transcript = json::array ();
	for (auto const & t : coordinator_.transcript ())
		transcript.push_back (t.to_json ());
	json entries = json::array ();
	for (auto const & entry : registry_.entries ())
		entries.push_back (entry.to_json ());
	json epochs = json::array ();
	for (auto const & ep : registry_.epochs ())
		epochs.push_back ({ { "index", ep.index }, { "status", registry::to_string (ep.status) }, { "threshold", ep.threshold }, { "multisig", ep.multisig.to_string () } });

	r.details = { { "balances", balances },
		{ "contracts", contracts },
		{ "events", events },
		{ "swaps", swaps },
		{ "transcript", transcript },
		{ "registry", { { "entries", entries }, { "epochs", epochs }, { "records", registry_.ledger ().size () } } } };
	return r;
}

}
