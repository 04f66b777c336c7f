#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/core/error.hpp>
#include <assetsim/core/identity.hpp>
#include <assetsim/core/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace assetsim::swap {

enum class Category : std::uint8_t
{
	currency_intra = 1,
	asset_for_currency_intra = 2,
	asset_for_currency_cross = 3,
	asset_for_asset = 4,
};

enum class SessionStatus : std::uint8_t
{
	setup,
	locked,
	completed,
	refunded,
	failed,
};

enum class LegStatus : std::uint8_t
{
	unlocked,
	lock_pending,
	locked,
	claim_pending,
	claimed,
	refund_pending,
	refunded,
	lock_failed,
};

enum class Role : std::uint8_t
{
	initiator,
	responder,
};

/// Protocol steps in order; a crash "at step k" silences the party before step k runs.
enum class Step : std::uint8_t
{
	initiator_lock = 1,
	responder_lock = 2,
	initiator_claim = 3,
	responder_claim = 4,
};
inline constexpr std::uint32_t protocol_steps = 4;

std::string_view to_string (Category c);
std::string_view to_string (SessionStatus s);
std::string_view to_string (LegStatus s);
std::string_view to_string (Role r);
std::optional<Role> role_from_string (std::string_view s);

struct AssetRef
{
	Digest contract_id;

	bool operator== (const AssetRef &) const = default;
};

using SwapItem = std::variant<Amount, AssetRef>;

struct LegSpec
{
	std::string chain_id;
	SwapItem item;
	std::uint64_t timeout_blocks{ 0 }; ///< relative to the chain height at setup
};

struct FaultPlan
{
	std::optional<Role> crashed;
	std::uint32_t crash_step{ 1 };
	/// Tick at which the crashed party comes back; nullopt means once its
	/// own leg becomes refundable. A party that crashed only ever refunds.
	std::optional<std::uint64_t> recover_tick;
	bool refuse_reveal{ false };

	bool operator== (const FaultPlan &) const = default;
};

/// Party names refer to identities registered with the coordinator.
struct SwapSpec
{
	Category category{ Category::asset_for_currency_cross };
	std::string initiator;
	std::string responder;
	LegSpec initiator_leg;
	LegSpec responder_leg;
	FaultPlan faults;
};

struct SwapLeg
{
	std::string chain_id;
	std::optional<Digest> contract_id; ///< lockbox once deployed, or the AuthCar
	Address locker;
	Address beneficiary;
	SwapItem item;
	std::uint64_t timeout_height{ 0 };
	LegStatus status{ LegStatus::unlocked };
	bool abandoned{ false };
	std::optional<Digest> pending; ///< message awaiting inclusion

	bool settled () const;
};

/// Balances of the two parties and owners of the swapped assets, per chain.
struct Holdings
{
	struct Chain
	{
		std::map<Address, Amount> balances;
		std::map<Digest, Address> asset_owners;

		bool operator== (const Chain &) const = default;
	};
	std::map<std::string, Chain> chains;

	Digest digest () const;
	bool operator== (const Holdings &) const = default;
};

struct SwapSession
{
	std::uint64_t session_id{ 0 };
	Category category{ Category::asset_for_currency_cross };
	std::string initiator;
	std::string responder;
	std::vector<SwapLeg> legs; ///< [0] locked by the initiator, [1] by the responder
	Bytes secret;
	Digest hash;
	SessionStatus status{ SessionStatus::setup };
	FaultPlan faults;
	bool crash_triggered{ false };
	bool recovered{ false };
	std::uint64_t start_tick{ 0 };
	std::optional<std::uint64_t> end_tick;
	Holdings pre;
	std::optional<Holdings> post;
	std::optional<bool> atomic; ///< audit result once terminal

	bool terminal () const;
	json to_json () const;
};

struct TranscriptEntry
{
	std::uint64_t tick{ 0 };
	std::uint64_t session{ 0 };
	std::string chain;
	std::string action;
	std::string outcome;

	json to_json () const;
};

enum class SwapErrorCode : std::uint8_t
{
	config_error,
	unknown_chain,
	unknown_party,
	bad_item,
};

std::string_view to_string (SwapErrorCode c);

struct SwapError
{
	SwapErrorCode code{ SwapErrorCode::config_error };
	std::string detail;
};

/// True iff either every item reached its counterparty or nothing moved.
bool audit_atomicity (const SwapSession & session, const Holdings & pre, const Holdings & post);
/// `pre` with both legs' items handed to their beneficiaries.
Holdings exchanged (const SwapSession & session, const Holdings & pre);

/// Submits and mines until the item is included or evicted.
Expected<chain::ItemReceipt, ValidationError> execute_category1 (chain::Chain & chain, const ValueTransferTx & tx, std::uint64_t & tick);
Expected<chain::ItemReceipt, ValidationError> execute_category2 (chain::Chain & chain, const ContractMessage & buy, std::uint64_t & tick);

struct CoordinatorConfig
{
	std::uint64_t margin_blocks{ 2 }; ///< in responder-chain blocks
	bool watchtower{ true };
	std::string watchtower_seed{ "watchtower" };
};

/// Drives two-leg hash/time-locked swaps on attached chains.
class Coordinator
{
public:
	explicit Coordinator (CoordinatorConfig config = {});

	void attach_chain (chain::Chain & chain);
	void add_party (const std::string & name, const Identity & id);
	const Identity & party (const std::string & name) const;
	bool has_party (const std::string & name) const { return parties_.contains (name); }

	/// Validates the spec and records the pre-swap holdings. Nothing is submitted until step().
	Expected<std::uint64_t, SwapError> start_swap (const SwapSpec & spec, std::uint64_t tick);
	void observe_block (std::string_view chain_id, const chain::BlockProduced & produced);
	/// Runs every session's next actions; call after the tick's blocks were observed.
	void step (std::uint64_t tick);

	/// Starts a session and advances the attached chains until it is terminal.
	Expected<SessionStatus, SwapError> run_cross_chain_swap (const SwapSpec & spec, std::uint64_t & tick, std::uint64_t max_ticks = 100000);

	bool idle () const;
	const SwapSession & session (std::uint64_t id) const;
	const std::vector<SwapSession> & sessions () const { return sessions_; }
	const std::vector<TranscriptEntry> & transcript () const { return transcript_; }
	Holdings holdings (const SwapSession & session) const;

private:
	chain::Chain & chain_of (const std::string & id) const;
	void advance (SwapSession & s, std::uint64_t tick);
	void finish (SwapSession & s, std::uint64_t tick);
	bool submit (SwapSession & s, std::size_t leg, std::string action, const Identity & who, ContractMessage msg, std::uint64_t tick);
	void lock (SwapSession & s, std::size_t leg, const Identity & who, std::uint64_t tick);
	bool lock_verified (const SwapSession & s, std::size_t leg) const;
	std::optional<Bytes> revealed_secret (const SwapSession & s) const;
	void note (std::uint64_t tick, const SwapSession & s, const std::string & chain, std::string action, std::string outcome);

	struct Pending
	{
		std::uint64_t session;
		std::size_t leg;
		LegStatus on_success;
		LegStatus on_failure;
		std::string action;
	};

	CoordinatorConfig config_;
	Identity watchtower_;
	std::vector<chain::Chain *> chains_;
	std::map<std::string, Identity> parties_;
	std::vector<SwapSession> sessions_;
	std::map<Digest, Pending> pending_;
	std::vector<TranscriptEntry> transcript_;
	std::uint64_t nonce_{ 0 };
};

}
