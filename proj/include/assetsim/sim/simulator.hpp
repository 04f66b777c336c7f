#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/registry/registry.hpp>
#include <assetsim/sim/metrics.hpp>
#include <assetsim/sim/scenario.hpp>
#include <assetsim/swap/swap.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace assetsim::sim {

struct EventOutcome
{
	std::uint64_t tick{ 0 };
	std::size_t index{ 0 };
	EventType type{ EventType::submit_tx };
	std::string outcome;
	std::string detail;
	std::optional<std::string> chain; ///< chain and item, when the event submitted one
	std::optional<Digest> item;
};

/// Deterministic single-threaded scheduler. At each tick: the tick's events
/// fire in file order, load generators top up, every chain produces in
/// declaration order, then the registry and the swap coordinator observe the
/// new blocks. Invariants are checked at the end of every tick and the run
/// stops at the first violation.
class Simulator
{
public:
	explicit Simulator (Scenario scenario);
	Simulator (const Simulator &) = delete;
	Simulator & operator= (const Simulator &) = delete;

	void run ();
	/// Runs the next tick; false once the run is over.
	bool step ();
	bool finished () const { return finished_; }
	std::uint64_t next_tick () const { return next_tick_; }

	MetricsReport report () const;

	const Scenario & scenario () const { return scenario_; }
	chain::Chain & chain (std::string_view id);
	const chain::Chain & chain (std::string_view id) const;
	const std::vector<std::unique_ptr<chain::Chain>> & chains () const { return chains_; }
	const registry::Registry & registry () const { return registry_; }
	const swap::Coordinator & coordinator () const { return coordinator_; }
	const std::vector<EventOutcome> & outcomes () const { return outcomes_; }
	const std::vector<Violation> & violations () const { return violations_; }

	/// Contract behind a deploy or register_asset handle, once it exists.
	std::optional<Digest> contract_id (std::string_view handle) const;
	std::optional<std::uint64_t> swap_session (std::string_view handle) const;

private:
	struct Handle
	{
		std::string chain;
		std::optional<Digest> deploy_message;
		std::optional<registry::AssetKey> key;
	};
	struct NamedTx
	{
		std::string chain;
		ValueTransferTx tx;
	};
	struct LoadGenerator
	{
		std::string chain;
		std::uint64_t from{ 0 };
		std::uint64_t until{ 0 };
		std::optional<Identity> loader;
		std::vector<Outpoint> lanes;
	};

	void fire (const Event & e, std::uint64_t tick);
	void top_up (LoadGenerator & g, std::uint64_t tick);
	void check_invariants (std::uint64_t tick);
	const Identity & identity (const std::string & party) const;
	std::optional<std::string> party_of (const Address & a) const;
	std::optional<Value> resolve_arg (const json & arg, const chain::Chain & chain) const;
	/// Submits a funded message, preceded by its split transfer when needed.
	/// nullopt when the sender cannot cover msg.value.
	std::optional<chain::SubmitResult> submit_funded (chain::Chain & chain, const Identity & sender, ContractMessage msg);
	registry::RegistrationRequest registration (const json & args) const;

	Scenario scenario_;
	std::vector<std::unique_ptr<chain::Chain>> chains_;
	registry::Registry registry_;
	swap::Coordinator coordinator_;
	std::map<std::string, Identity> identities_;
	std::map<Address, std::string> party_by_address_;
	std::map<std::string, Handle> handles_;
	std::map<std::string, NamedTx> txs_;
	std::map<std::string, std::uint64_t> swaps_;
	std::map<std::string, std::map<std::uint64_t, std::vector<Identity>>> stolen_;
	std::vector<LoadGenerator> loads_;
	std::vector<EventOutcome> outcomes_;
	std::vector<Violation> violations_;
	std::size_t next_event_{ 0 };
	std::uint64_t next_tick_{ 0 };
	std::uint64_t nonce_{ 0 };
	bool finished_{ false };
};

}
