#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/core/error.hpp>
#include <assetsim/core/identity.hpp>
#include <assetsim/core/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace assetsim::registry {

enum class FaultModel : std::uint8_t
{
	crash,
	byzantine,
};

std::string_view to_string (FaultModel m);
FaultModel fault_model_from_string (std::string_view name);

/// Simulated behaviour of one validator slot; slots keep their mode across epochs.
enum class ValidatorMode : std::uint8_t
{
	honest,
	crashed,
	byzantine, ///< votes for a colluding wrong digest and withholds signatures
};

/// Smallest acknowledgment count that decides: ceil((n+f+1)/2) for
/// byzantine (2f+1 when n = 3f+1), floor(n/2)+1 for crash (f+1 when n = 2f+1).
std::size_t quorum_size (FaultModel model, std::size_t n, std::size_t f);

struct ValidatorSet
{
	std::size_t count{ 4 };
	FaultModel model{ FaultModel::byzantine };
	std::size_t f{ 1 };

	/// Throws std::invalid_argument when count is below 2f+1 (crash) or 3f+1 (byzantine).
	void validate () const;
	std::size_t quorum () const { return quorum_size (model, count, f); }
};

enum class EpochStatus : std::uint8_t
{
	active,
	retired,
	revoked,
};

std::string_view to_string (EpochStatus s);

struct Epoch
{
	std::uint64_t index{ 0 };
	std::vector<Identity> keys; ///< one per validator slot
	std::uint32_t threshold{ 0 };
	Address multisig;
	EpochStatus status{ EpochStatus::active };

	std::vector<PublicKey> keyset () const;
};

/// Fresh validator identities for epoch `index` of registry `name`.
std::vector<Identity> epoch_keys (std::string_view name, std::uint64_t index, std::size_t count);

struct AssetKey
{
	std::string asset_class;
	std::string natural_id;

	auto operator<=> (const AssetKey &) const = default;
	std::string to_string () const { return asset_class + "/" + natural_id; }
};

struct RegistrationRequest
{
	AssetKey key;
	std::string make;
	std::string model;
	std::uint64_t year{ 0 };
	Amount price;
	std::uint64_t tax_percent{ 0 };
	Address owner;
	std::string target_chain;
	Amount fee; ///< recorded only; defaults to zero

	Digest digest () const;
	json to_json () const;
};

/// Threshold witness over a request digest, presented on behalf of an epoch.
struct Endorsement
{
	std::uint64_t epoch{ 0 };
	Witness witness;
};

Endorsement endorse (const RegistrationRequest & req, std::uint64_t epoch, const std::vector<Identity> & signers);

/// Owner-signed request to cancel a registration.
struct CancelRequest
{
	AssetKey key;
	Address requester;
	std::uint64_t nonce{ 0 };
	Witness witness;

	Bytes body_bytes () const;
	static CancelRequest make (AssetKey key, const Identity & requester, std::uint64_t nonce);
};

enum class EntryStatus : std::uint8_t
{
	pending,
	live,
	cancelled,
};

std::string_view to_string (EntryStatus s);

struct RegistryEntry
{
	AssetKey key;
	std::string chain_id;
	std::optional<Digest> contract_id;
	Address owner; ///< owner at registration
	std::uint64_t epoch{ 0 }; ///< epoch the entry was created under
	std::uint64_t co_epoch{ 0 }; ///< epoch whose multisig is the contract owner on chain
	EntryStatus status{ EntryStatus::pending };
	Digest deploy_message;
	std::uint64_t seq{ 0 };

	json to_json () const;
};

enum class RegistryError : std::uint8_t
{
	quorum_unavailable,
	already_registered,
	deployment_failed,
	not_owner,
	no_such_asset,
	no_such_epoch,
	bad_endorsement,
	bad_request,
	unknown_chain,
};

std::string_view to_string (RegistryError e);

struct LedgerRecord
{
	std::uint64_t seq{ 0 };
	std::string kind;
	json payload;
	std::uint64_t epoch{ 0 };

	json to_json () const;
	static LedgerRecord from_json (const json & j);
};

/// Digest of the ordered decision log, one compact JSON record per line.
Digest ledger_digest (std::span<const LedgerRecord> records);

struct RegistryConfig
{
	std::string name{ "registry" };
	ValidatorSet validators;
	std::uint32_t threshold{ 0 }; ///< multisig m; 0 means the quorum size
};

/// The permissioned chain: a deterministic quorum-vote state machine that
/// owns the uniqueness registry and the epoch keysets. It reaches the
/// permissionless chains only through submit() and observe_block().
class Registry
{
public:
	explicit Registry (RegistryConfig config);

	const RegistryConfig & config () const { return config_; }

	void attach_chain (chain::Chain & chain);
	void set_tick (std::uint64_t tick) { tick_ = tick; }

	void set_validator_mode (std::size_t slot, ValidatorMode mode);
	ValidatorMode validator_mode (std::size_t slot) const { return modes_.at (slot); }

	/// Orders a request through the validator vote. Returns its sequence number.
	Expected<std::uint64_t, RegistryError> order_request (const RegistrationRequest & req);
	/// Orders a request carrying an externally produced endorsement, which
	/// must verify under the active, non-revoked epoch.
	Expected<std::uint64_t, RegistryError> order_request (const RegistrationRequest & req, const Endorsement & endorsement);

	Expected<RegistryEntry, RegistryError> register_asset (const RegistrationRequest & req);
	Expected<RegistryEntry, RegistryError> register_asset (const RegistrationRequest & req, const Endorsement & endorsement);
	Expected<RegistryEntry, RegistryError> cancel_registration (const CancelRequest & req);

	Expected<std::uint64_t, RegistryError> rotate_epoch (std::optional<std::uint32_t> threshold = std::nullopt);
	Expected<std::uint64_t, RegistryError> revoke_epoch (std::uint64_t index);

	/// Registry-side check: threshold met under the epoch owning `multisig`, and that epoch is not revoked.
	bool validate_multisig (const Witness & witness, ByteView body, const Address & multisig) const;

	/// Handles receipts and evictions of one newly produced block, then
	/// re-issues any owner updates still outstanding.
	void observe_block (const std::string & chain_id, const chain::BlockProduced & produced);
	/// Issues UpdateContractOwner for every live entry whose contract is not
	/// yet owned by the active epoch, in contract_id order.
	void reconcile ();

	const Epoch & active_epoch () const;
	const Epoch & epoch (std::uint64_t index) const;
	const std::vector<Epoch> & epochs () const { return epochs_; }

	/// Current or most recent entry for a key.
	const RegistryEntry * find (const AssetKey & key) const;
	const std::vector<RegistryEntry> & entries () const { return entries_; }
	const std::vector<LedgerRecord> & ledger () const { return ledger_; }
	Digest ledger_digest () const;
	std::map<std::uint64_t, Amount> tax_by_epoch () const;

	/// Uniqueness, registry/chain agreement and tax routing. Empty when all hold.
	std::vector<std::string> check_invariants () const;

private:
	struct Vote
	{
		bool decided{ false };
		std::size_t acks{ 0 };
	};

	Vote vote ();
	std::vector<Identity> signers (const Epoch & epoch) const;
	std::optional<std::uint64_t> epoch_index_of (const Address & multisig) const;
	Epoch & active ();
	void record (std::string kind, json payload);
	Expected<RegistryEntry, RegistryError> admit (const RegistrationRequest & req, std::uint64_t seq);
	void activate_epoch (std::uint32_t threshold);
	std::optional<Digest> submit_call (const RegistryEntry & entry, std::string_view function, std::vector<Value> args, const Epoch & as);
	RegistryEntry * entry_by_contract (const std::string & chain_id, const Digest & contract_id);

	RegistryConfig config_;
	std::uint64_t tick_{ 0 };
	std::vector<ValidatorMode> modes_;
	std::vector<Epoch> epochs_;
	std::vector<RegistryEntry> entries_;
	std::map<std::string, chain::Chain *> chains_;
	std::vector<LedgerRecord> ledger_;
	std::uint64_t nonce_{ 0 };

	struct Pending
	{
		std::string kind; ///< deploy, destroy, update_owner
		std::size_t entry;
		std::uint64_t epoch{ 0 }; ///< for update_owner: the epoch being installed
	};
	std::map<Digest, Pending> in_flight_;
	std::set<std::size_t> stranded_; ///< entries whose contract owner left this registry's control
	std::vector<std::string> violations_;
};

}
