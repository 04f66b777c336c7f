#pragma once

#include <assetsim/core/amount.hpp>
#include <assetsim/core/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace assetsim::sim {

struct ChainMetrics
{
	std::string chain_id;
	std::uint64_t height{ 0 };
	std::uint64_t included{ 0 }; ///< non-coinbase items over the whole run
	std::uint64_t window_included{ 0 };
	double tps{ 0 }; ///< window_included / window seconds
	double capacity_tps{ 0 };
	bool loaded{ false }; ///< a saturate_chain event drove this chain
	std::optional<std::uint64_t> drained_at; ///< first window tick whose block was not full
	std::string state_digest;
	std::string holdings_digest;

	bool operator== (const ChainMetrics &) const = default;
};

struct Violation
{
	std::uint64_t tick{ 0 };
	std::string what;

	bool operator== (const Violation &) const = default;
};

struct MetricsReport
{
	std::string scenario;
	std::uint64_t seed{ 0 };
	std::uint64_t ticks{ 0 };
	std::uint64_t tick_seconds{ 1 };
	std::uint64_t window_start{ 0 }; ///< first tick counted
	std::uint64_t window_end{ 0 }; ///< one past the last tick counted
	std::vector<ChainMetrics> chains;
	double aggregate_tps{ 0 };
	std::map<std::uint64_t, Amount> tax_by_epoch;
	std::string registry_ledger_digest;
	std::vector<std::string> warnings;
	std::vector<Violation> violations;
	std::optional<std::uint64_t> aborted_at;
	json details; ///< balances, contracts, events, swaps, transcript, registry entries

	std::uint64_t window_seconds () const { return (window_end - window_start) * tick_seconds; }
	json to_json () const;
	/// Strict on the metric fields; throws FormatError.
	static MetricsReport from_json (const json & j);
};

struct TpsMeasurement
{
	double aggregate{ 0 };
	std::vector<std::string> not_saturated; ///< one warning per chain whose mempool drained early
};

/// Sum over chains of window_included / window seconds.
TpsMeasurement measure_aggregate_tps (const MetricsReport & report);

}
