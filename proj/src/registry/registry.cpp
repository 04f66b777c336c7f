#include <assetsim/core/serialize.hpp>
#include <assetsim/registry/registry.hpp>

#include <algorithm>

namespace assetsim::registry {

std::string_view to_string (FaultModel m)
{
	return m == FaultModel::crash ? "crash" : "byzantine";
}

FaultModel fault_model_from_string (std::string_view name)
{
	if (name == "crash")
		return FaultModel::crash;
	if (name == "byzantine")
		return FaultModel::byzantine;
	throw std::invalid_argument ("unknown fault model: " + std::string (name));
}

std::size_t quorum_size (FaultModel model, std::size_t n, std::size_t f)
{
	if (model == FaultModel::crash)
		return n / 2 + 1;
	return (n + f + 2) / 2;
}

void ValidatorSet::validate () const
{
	auto needed = model == FaultModel::crash ? 2 * f + 1 : 3 * f + 1;
	if (count < needed)
		throw std::invalid_argument (std::string (to_string (model)) + " model with f=" + std::to_string (f) + " needs at least " + std::to_string (needed) + " validators, got " + std::to_string (count));
}

std::string_view to_string (EpochStatus s)
{
	switch (s)
	{
		case EpochStatus::active:
			return "active";
		case EpochStatus::retired:
			return "retired";
		case EpochStatus::revoked:
			return "revoked";
	}
	return "?";
}

std::string_view to_string (EntryStatus s)
{
	switch (s)
	{
		case EntryStatus::pending:
			return "pending";
		case EntryStatus::live:
			return "live";
		case EntryStatus::cancelled:
			return "cancelled";
	}
	return "?";
}

std::string_view to_string (RegistryError e)
{
	switch (e)
	{
		case RegistryError::quorum_unavailable:
			return "QuorumUnavailable";
		case RegistryError::already_registered:
			return "AlreadyRegistered";
		case RegistryError::deployment_failed:
			return "DeploymentFailed";
		case RegistryError::not_owner:
			return "NotOwner";
		case RegistryError::no_such_asset:
			return "NoSuchAsset";
		case RegistryError::no_such_epoch:
			return "NoSuchEpoch";
		case RegistryError::bad_endorsement:
			return "BadEndorsement";
		case RegistryError::bad_request:
			return "BadRequest";
		case RegistryError::unknown_chain:
			return "UnknownChain";
	}
	return "?";
}

std::vector<PublicKey> Epoch::keyset () const
{
	std::vector<PublicKey> out;
	for (auto const & k : keys)
		out.push_back (k.public_key ());
	return out;
}

std::vector<Identity> epoch_keys (std::string_view name, std::uint64_t index, std::size_t count)
{
	std::vector<Identity> keys;
	for (std::size_t i = 0; i < count; ++i)
		keys.push_back (Identity::from_seed (std::string (name) + ":epoch:" + std::to_string (index) + ":validator:" + std::to_string (i)));
	return keys;
}

Digest RegistrationRequest::digest () const
{
	Writer w;
	w.tag ("assetsim/registration").str (key.asset_class).str (key.natural_id).str (make).str (model).u64 (year).u64 (price.units ()).u64 (tax_percent);
	owner.encode (w);
	w.str (target_chain).u64 (fee.units ());
	return w.hash ();
}

json RegistrationRequest::to_json () const
{
	return json{ { "asset_class", key.asset_class },
		{ "natural_id", key.natural_id },
		{ "make", make },
		{ "model", model },
		{ "year", year },
		{ "price", price.units () },
		{ "tax_percent", tax_percent },
		{ "owner", owner.to_string () },
		{ "target_chain", target_chain },
		{ "fee", fee.units () } };
}

Endorsement endorse (const RegistrationRequest & req, std::uint64_t epoch, const std::vector<Identity> & signers)
{
	auto d = req.digest ();
	return Endorsement{ epoch, sign_witness (d.view (), signers) };
}

Bytes CancelRequest::body_bytes () const
{
	Writer w;
	w.tag ("assetsim/cancel").str (key.asset_class).str (key.natural_id);
	requester.encode (w);
	w.u64 (nonce);
	return w.take ();
}

CancelRequest CancelRequest::make (AssetKey key, const Identity & requester, std::uint64_t nonce)
{
	CancelRequest req{ std::move (key), derive_address (requester.public_key ()), nonce, {} };
	req.witness = sign_witness (req.body_bytes (), requester);
	return req;
}

json RegistryEntry::to_json () const
{
	return json{ { "asset_class", key.asset_class },
		{ "natural_id", key.natural_id },
		{ "chain", chain_id },
		{ "contract_id", contract_id ? json (contract_id->hex ()) : json (nullptr) },
		{ "owner", owner.to_string () },
		{ "epoch", epoch },
		{ "co_epoch", co_epoch },
		{ "status", to_string (status) },
		{ "seq", seq } };
}

json LedgerRecord::to_json () const
{
	return json{ { "seq", seq }, { "kind", kind }, { "payload", payload }, { "epoch", epoch } };
}

LedgerRecord LedgerRecord::from_json (const json & j)
{
	require_keys (j, { "seq", "kind", "payload", "epoch" }, "record");
	LedgerRecord r;
	r.seq = require_field (j, "seq", "record").get<std::uint64_t> ();
	r.kind = require_field (j, "kind", "record").get<std::string> ();
	r.payload = require_field (j, "payload", "record");
	r.epoch = require_field (j, "epoch", "record").get<std::uint64_t> ();
	return r;
}

Registry::Registry (RegistryConfig config) :
	config_ (std::move (config))
{
	config_.validators.validate ();
	if (config_.threshold == 0)
		config_.threshold = static_cast<std::uint32_t> (config_.validators.quorum ());
	if (config_.threshold > config_.validators.count)
		throw std::invalid_argument ("multisig threshold exceeds validator count");
	modes_.assign (config_.validators.count, ValidatorMode::honest);
	activate_epoch (config_.threshold);
}

void Registry::attach_chain (chain::Chain & chain)
{
	chains_[chain.id ()] = &chain;
}

void Registry::set_validator_mode (std::size_t slot, ValidatorMode mode)
{
	modes_.at (slot) = mode;
	static constexpr std::string_view names[] = { "honest", "crashed", "byzantine" };
	record ("validator_mode", { { "slot", slot }, { "mode", names[static_cast<int> (mode)] } });
}

void Registry::record (std::string kind, json payload)
{
	payload["tick"] = tick_;
	std::uint64_t epoch = epochs_.empty () ? 0 : epochs_.back ().index;
	for (auto const & e : epochs_)
		if (e.status == EpochStatus::active)
			epoch = e.index;
	ledger_.push_back ({ ledger_.size () + 1, std::move (kind), std::move (payload), epoch });
}

Epoch & Registry::active ()
{
	for (auto & e : epochs_)
		if (e.status == EpochStatus::active)
			return e;
	throw std::logic_error ("registry has no active epoch");
}

const Epoch & Registry::active_epoch () const
{
	return const_cast<Registry *> (this)->active ();
}

const Epoch & Registry::epoch (std::uint64_t index) const
{
	if (index >= epochs_.size ())
		throw NotFound ("no epoch " + std::to_string (index));
	return epochs_[index];
}

void Registry::activate_epoch (std::uint32_t threshold)
{
	Epoch e;
	e.index = epochs_.size ();
	e.keys = epoch_keys (config_.name, e.index, config_.validators.count);
	e.threshold = threshold;
	e.multisig = derive_multisig_address ({ threshold, e.keyset (), e.index });
	e.status = EpochStatus::active;
	epochs_.push_back (std::move (e));
	auto const & added = epochs_.back ();
	record ("epoch_activated", { { "index", added.index }, { "threshold", added.threshold }, { "multisig", added.multisig.to_string () } });
}

std::optional<std::uint64_t> Registry::epoch_index_of (const Address & multisig) const
{
	for (auto const & e : epochs_)
		if (e.multisig == multisig)
			return e.index;
	return std::nullopt;
}

Registry::Vote Registry::vote ()
{
	std::size_t honest = 0;
	std::size_t colluding = 0;
	for (auto mode : modes_)
	{
		if (mode == ValidatorMode::honest)
			++honest;
		else if (mode == ValidatorMode::byzantine)
			++colluding;
	}
	auto q = config_.validators.quorum ();
	if (colluding >= q)
		violations_.push_back ("byzantine validators reached quorum on a conflicting decision");
	return Vote{ honest >= q, honest };
}

std::vector<Identity> Registry::signers (const Epoch & epoch) const
{
	std::vector<Identity> out;
	for (std::size_t i = 0; i < epoch.keys.size (); ++i)
		if (modes_[i] == ValidatorMode::honest)
			out.push_back (epoch.keys[i]);
	return out;
}

bool Registry::validate_multisig (const Witness & witness, ByteView body, const Address & multisig) const
{
	auto idx = epoch_index_of (multisig);
	if (!idx)
		return false;
	auto const & e = epochs_[*idx];
	if (e.status == EpochStatus::revoked)
		return false;
	return count_valid_members (*multisig.policy, witness, body) >= e.threshold;
}

Expected<std::uint64_t, RegistryError> Registry::order_request (const RegistrationRequest & req)
{
	if (req.key.asset_class.empty () || req.key.natural_id.empty () || req.tax_percent > 100 || !req.owner.well_formed ())
		return RegistryError::bad_request;
	if (!vote ().decided)
		return RegistryError::quorum_unavailable;
	record ("request", { { "request", req.to_json () }, { "digest", req.digest ().hex () } });
	return ledger_.back ().seq;
}

Expected<std::uint64_t, RegistryError> Registry::order_request (const RegistrationRequest & req, const Endorsement & endorsement)
{
	if (req.key.asset_class.empty () || req.key.natural_id.empty () || req.tax_percent > 100 || !req.owner.well_formed ())
		return RegistryError::bad_request;
	auto const & current = active_epoch ();
	auto d = req.digest ();
	bool ok = endorsement.epoch == current.index && validate_multisig (endorsement.witness, d.view (), current.multisig);
	if (!ok)
	{
		record ("endorsement_rejected", { { "digest", d.hex () }, { "claimed_epoch", endorsement.epoch } });
		return RegistryError::bad_endorsement;
	}
	record ("request", { { "request", req.to_json () }, { "digest", d.hex () }, { "endorsed_by", endorsement.epoch } });
	return ledger_.back ().seq;
}

const RegistryEntry * Registry::find (const AssetKey & key) const
{
	for (auto it = entries_.rbegin (); it != entries_.rend (); ++it)
		if (it->key == key)
			return &*it;
	return nullptr;
}

RegistryEntry * Registry::entry_by_contract (const std::string & chain_id, const Digest & contract_id)
{
	for (auto & e : entries_)
		if (e.chain_id == chain_id && e.contract_id == contract_id)
			return &e;
	return nullptr;
}

Expected<RegistryEntry, RegistryError> Registry::register_asset (const RegistrationRequest & req)
{
	auto seq = order_request (req);
	if (!seq)
		return seq.error ();
	return admit (req, seq.value ());
}

Expected<RegistryEntry, RegistryError> Registry::register_asset (const RegistrationRequest & req, const Endorsement & endorsement)
{
	auto seq = order_request (req, endorsement);
	if (!seq)
		return seq.error ();
	return admit (req, seq.value ());
}

Expected<RegistryEntry, RegistryError> Registry::admit (const RegistrationRequest & req, std::uint64_t seq)
{
	auto reject = [&] (RegistryError e) {
		record ("decision", { { "seq", seq }, { "accepted", false }, { "reason", to_string (e) } });
		return e;
	};
	for (auto const & e : entries_)
		if (e.key == req.key && e.status != EntryStatus::cancelled)
			return reject (RegistryError::already_registered);
	auto chain = chains_.find (req.target_chain);
	if (chain == chains_.end ())
		return reject (RegistryError::unknown_chain);

	auto const & epoch = active_epoch ();
	ContractMessage msg;
	msg.sender = epoch.multisig;
	msg.contract_class = "AuthCar";
	msg.function = std::string (constructor_function);
	msg.args = { req.make, req.model, req.year, req.price, req.tax_percent, req.owner };
	msg.nonce = ++nonce_;
	msg.sign (signers (epoch));

	RegistryEntry entry;
	entry.key = req.key;
	entry.chain_id = req.target_chain;
	entry.owner = req.owner;
	entry.epoch = epoch.index;
	entry.co_epoch = epoch.index;
	entry.deploy_message = msg.id ();
	entry.seq = seq;

	auto submitted = chain->second->submit (msg);
	if (!submitted.accepted ())
	{
		entry.status = EntryStatus::cancelled;
		entries_.push_back (entry);
		return reject (RegistryError::deployment_failed);
	}
	entry.status = EntryStatus::pending;
	entries_.push_back (entry);
	in_flight_[entry.deploy_message] = Pending{ "deploy", entries_.size () - 1, epoch.index };
	record ("decision", { { "seq", seq }, { "accepted", true }, { "entry", entry.to_json () }, { "deploy_message", entry.deploy_message.hex () } });
	return entry;
}

std::optional<Digest> Registry::submit_call (const RegistryEntry & entry, std::string_view function, std::vector<Value> args, const Epoch & as)
{
	auto chain = chains_.find (entry.chain_id);
	if (chain == chains_.end () || !entry.contract_id)
		return std::nullopt;
	ContractMessage msg;
	msg.sender = as.multisig;
	msg.target = entry.contract_id;
	msg.function = std::string (function);
	msg.args = std::move (args);
	msg.nonce = ++nonce_;
	msg.sign (signers (as));
	if (!chain->second->submit (msg).accepted ())
		return std::nullopt;
	return msg.id ();
}

Expected<RegistryEntry, RegistryError> Registry::cancel_registration (const CancelRequest & req)
{
	if (!authorizes (req.requester, req.witness, req.body_bytes ()))
		return RegistryError::bad_request;
	auto it = std::find_if (entries_.begin (), entries_.end (), [&] (auto const & e) { return e.key == req.key && e.status == EntryStatus::live; });
	if (it == entries_.end ())
		return RegistryError::no_such_asset;
	if (!vote ().decided)
		return RegistryError::quorum_unavailable;
	auto & entry = *it;
	auto const * instance = chains_.at (entry.chain_id)->find_contract (*entry.contract_id);
	if (instance == nullptr || !instance->live ())
		return RegistryError::no_such_asset;
	if (instance->asset_owner () != req.requester)
	{
		record ("cancel_rejected", { { "asset", req.key.to_string () }, { "requester", req.requester.to_string () }, { "reason", "NotOwner" } });
		return RegistryError::not_owner;
	}
	auto id = submit_call (entry, contract::functions::destroy, {}, epochs_[entry.co_epoch]);
	if (!id)
		return RegistryError::deployment_failed;
	in_flight_[*id] = Pending{ "destroy", static_cast<std::size_t> (it - entries_.begin ()), entry.co_epoch };
	record ("cancel_ordered", { { "asset", req.key.to_string () }, { "requester", req.requester.to_string () }, { "message", id->hex () } });
	return entry;
}

Expected<std::uint64_t, RegistryError> Registry::rotate_epoch (std::optional<std::uint32_t> threshold)
{
	auto & current = active ();
	if (!vote ().decided)
		return RegistryError::quorum_unavailable;
	current.status = EpochStatus::retired;
	record ("epoch_retired", { { "index", current.index } });
	activate_epoch (threshold.value_or (config_.threshold));
	reconcile ();
	return active_epoch ().index;
}

Expected<std::uint64_t, RegistryError> Registry::revoke_epoch (std::uint64_t index)
{
	if (index >= epochs_.size ())
		return RegistryError::no_such_epoch;
	auto & target = epochs_[index];
	if (target.status == EpochStatus::revoked)
		return index;
	if (!vote ().decided)
		return RegistryError::quorum_unavailable;
	bool was_active = target.status == EpochStatus::active;
	target.status = EpochStatus::revoked;
	record ("epoch_revoked", { { "index", index }, { "was_active", was_active } });
	for (auto & e : entries_)
	{
		if (e.epoch == index && e.status == EntryStatus::pending)
		{
			e.status = EntryStatus::cancelled;
			record ("registration_cancelled", { { "asset", e.key.to_string () }, { "reason", "epoch revoked" } });
		}
	}
	if (was_active)
	{
		activate_epoch (config_.threshold);
		reconcile ();
	}
	return index;
}

void Registry::reconcile ()
{
	auto const & current = active_epoch ();
	std::set<std::size_t> updating;
	for (auto const & [id, p] : in_flight_)
		if (p.kind == "update_owner")
			updating.insert (p.entry);
	std::vector<std::size_t> due;
	for (std::size_t i = 0; i < entries_.size (); ++i)
	{
		auto const & e = entries_[i];
		if (e.status != EntryStatus::live || e.co_epoch == current.index || updating.contains (i) || stranded_.contains (i))
			continue;
		if (signers (epochs_[e.co_epoch]).size () >= epochs_[e.co_epoch].threshold)
			due.push_back (i);
	}
	std::sort (due.begin (), due.end (), [this] (auto a, auto b) { return entries_[a].contract_id < entries_[b].contract_id; });
	for (auto i : due)
	{
		auto const & e = entries_[i];
		if (auto id = submit_call (e, contract::functions::update_contract_owner, { current.multisig }, epochs_[e.co_epoch]))
		{
			in_flight_[*id] = Pending{ "update_owner", i, current.index };
			record ("owner_update_issued", { { "asset", e.key.to_string () }, { "from_epoch", e.co_epoch }, { "to_epoch", current.index }, { "message", id->hex () } });
		}
	}
}

void Registry::observe_block (const std::string & chain_id, const chain::BlockProduced & produced)
{
	auto chain_it = chains_.find (chain_id);
	if (chain_it == chains_.end ())
		return;
	auto const & chain = *chain_it->second;

	for (auto const & r : produced.receipts)
	{
		auto const & item = produced.block.items.at (r.position);
		if (auto flight = in_flight_.find (r.item_id); flight != in_flight_.end ())
		{
			auto p = flight->second;
			in_flight_.erase (flight);
			auto & entry = entries_[p.entry];
			json base{ { "asset", entry.key.to_string () }, { "chain", chain_id }, { "message", r.item_id.hex () } };
			if (!r.succeeded ())
				base["error"] = contract::to_string (*r.call_error);
			if (p.kind == "deploy")
			{
				if (r.succeeded ())
				{
					entry.contract_id = r.contract_id;
					base["contract_id"] = r.contract_id->hex ();
					if (entry.status == EntryStatus::pending)
					{
						entry.status = EntryStatus::live;
						record ("registered", base);
					}
					else
					{
						record ("orphan_deploy", base);
						if (auto id = submit_call (entry, contract::functions::destroy, {}, epochs_[entry.co_epoch]))
							in_flight_[*id] = Pending{ "orphan_destroy", p.entry, entry.co_epoch };
					}
				}
				else
				{
					entry.status = EntryStatus::cancelled;
					record ("deployment_failed", base);
				}
			}
			else if (p.kind == "destroy" || p.kind == "orphan_destroy")
			{
				if (r.succeeded () && entry.status == EntryStatus::live)
					entry.status = EntryStatus::cancelled;
				record (r.succeeded () ? "destroyed" : "destroy_failed", base);
			}
			else if (p.kind == "update_owner")
			{
				if (r.succeeded ())
				{
					entry.co_epoch = p.epoch;
				}
				else
				{
					auto const * instance = chain.find_contract (*entry.contract_id);
					auto const * car = instance ? instance->as<contract::AuthCarState> () : nullptr;
					if (instance && instance->live () && car && car->contract_owner != epochs_[entry.co_epoch].multisig)
					{
						stranded_.insert (p.entry);
						violations_.push_back ("contract for " + entry.key.to_string () + " is owned outside the registry");
					}
				}
				record (r.succeeded () ? "owner_updated" : "owner_update_failed", base);
			}
		}

		auto const * msg = std::get_if<ContractMessage> (&item);
		if (msg == nullptr || !r.succeeded () || msg->function != contract::functions::buy || !r.contract_id)
			continue;
		auto const * instance = chain.find_contract (*r.contract_id);
		auto const * car = instance ? instance->as<contract::AuthCarState> () : nullptr;
		if (car == nullptr)
			continue;
		auto tax = contract::tax_due (msg->value, car->tax_percent);
		if (tax.is_zero ())
			continue;
		auto epoch_idx = epoch_index_of (car->contract_owner);
		if (!epoch_idx)
			violations_.push_back ("tax on " + r.contract_id->hex () + " paid to " + car->contract_owner.to_string ());
		record ("tax_receipt",
			{ { "chain", chain_id },
				{ "contract_id", r.contract_id->hex () },
				{ "amount", tax.units () },
				{ "recipient", car->contract_owner.to_string () },
				{ "recipient_epoch", epoch_idx ? json (*epoch_idx) : json (nullptr) } });
	}

	for (auto const & ev : produced.evictions)
	{
		auto flight = in_flight_.find (ev.item_id);
		if (flight == in_flight_.end ())
			continue;
		auto p = flight->second;
		in_flight_.erase (flight);
		auto & entry = entries_[p.entry];
		if (p.kind == "deploy")
			entry.status = EntryStatus::cancelled;
		record (p.kind == "deploy" ? "deployment_failed" : "call_evicted",
			{ { "asset", entry.key.to_string () }, { "chain", chain_id }, { "message", ev.item_id.hex () }, { "error", to_string (ev.error.code) } });
	}

	reconcile ();
}

Digest ledger_digest (std::span<const LedgerRecord> records)
{
	std::string text;
	for (auto const & r : records)
		text += r.to_json ().dump () + "\n";
	return sha256 (text);
}

Digest Registry::ledger_digest () const
{
	return registry::ledger_digest (ledger_);
}

std::map<std::uint64_t, Amount> Registry::tax_by_epoch () const
{
	std::map<std::uint64_t, Amount> out;
	for (auto const & r : ledger_)
	{
		if (r.kind != "tax_receipt" || r.payload["recipient_epoch"].is_null ())
			continue;
		out[r.payload["recipient_epoch"].get<std::uint64_t> ()] += Amount{ r.payload["amount"].get<std::uint64_t> () };
	}
	return out;
}

std::vector<std::string> Registry::check_invariants () const
{
	auto out = violations_;
	std::map<AssetKey, int> open;
	for (auto const & e : entries_)
		if (e.status != EntryStatus::cancelled && ++open[e.key] > 1)
			out.push_back ("asset " + e.key.to_string () + " has more than one pending or live entry");

	std::set<std::size_t> updating;
	for (auto const & [id, p] : in_flight_)
		if (p.kind == "update_owner" || p.kind == "destroy")
			updating.insert (p.entry);
	auto const & current = active_epoch ();
	for (std::size_t i = 0; i < entries_.size (); ++i)
	{
		auto const & e = entries_[i];
		if (e.status != EntryStatus::live || stranded_.contains (i))
			continue;
		auto const * instance = chains_.at (e.chain_id)->find_contract (*e.contract_id);
		auto const * car = instance ? instance->as<contract::AuthCarState> () : nullptr;
		if (car == nullptr || !instance->live ())
		{
			out.push_back ("live entry " + e.key.to_string () + " has no live contract on " + e.chain_id);
			continue;
		}
		if (car->contract_owner != epochs_[e.co_epoch].multisig)
			out.push_back ("contract for " + e.key.to_string () + " is not owned by the recorded epoch");
		else if (e.co_epoch != current.index && !updating.contains (i))
			out.push_back ("contract for " + e.key.to_string () + " still owned by epoch " + std::to_string (e.co_epoch) + " with no update in flight");
	}
	return out;
}

}
