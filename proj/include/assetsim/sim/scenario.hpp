#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/core/json.hpp>
#include <assetsim/registry/registry.hpp>
#include <assetsim/swap/swap.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace assetsim::sim {

inline constexpr std::string_view scenario_format = "assetsim-scenario";
inline constexpr int scenario_version = 1;

class ScenarioError : public std::runtime_error
{
public:
	ScenarioError (std::size_t line, std::string field, const std::string & message);

	std::size_t line () const { return line_; } ///< 1-based; 0 when unknown
	const std::string & field () const { return field_; }

private:
	std::size_t line_;
	std::string field_;
};

enum class EventType : std::uint8_t
{
	submit_tx,
	deploy,
	call,
	register_asset,
	buy,
	cancel,
	rotate,
	revoke,
	steal_keys,
	detect_theft,
	forge_destroy,
	forge_registration,
	crash_validator,
	start_swap,
	saturate_chain,
};

std::string_view to_string (EventType t);
std::optional<EventType> event_type_from_string (std::string_view s);

/// One scheduled event. `args` has been validated against the event's
/// schema; every party, chain and handle it names resolves.
struct Event
{
	std::uint64_t tick{ 0 };
	EventType type{ EventType::submit_tx };
	json args;
	std::size_t index{ 0 }; ///< position in the file
	std::size_t line{ 0 };
};

struct Scenario
{
	std::string name;
	std::uint64_t seed{ 0 };
	std::uint64_t ticks{ 0 };
	std::uint64_t tick_seconds{ 1 };
	std::vector<std::string> parties;
	std::vector<chain::ChainConfig> chains;
	registry::RegistryConfig registry;
	swap::CoordinatorConfig swap;
	std::vector<Event> events;
};

/// Identity behind a scenario party name.
Identity party_identity (std::string_view name);
Address party_address (std::string_view name);

/// Throws ScenarioError naming the line and field of the first problem.
Scenario parse_scenario (std::string_view text);
Scenario load_scenario (const std::filesystem::path & path);

json chain_config_to_json (const chain::ChainConfig & config);
/// Strict: unknown fields throw FormatError.
chain::ChainConfig chain_config_from_json (const json & j);

/// Maps JSON pointers ("/events/3/amount") to the 1-based line where the value starts.
class LineIndex
{
public:
	explicit LineIndex (std::string_view text);
	/// Line of the longest recorded prefix of `pointer`.
	std::size_t line (std::string_view pointer) const;

private:
	std::map<std::string, std::size_t, std::less<>> lines_;
};

}
