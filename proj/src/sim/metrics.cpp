#include <assetsim/sim/metrics.hpp>

namespace assetsim::sim {

TpsMeasurement measure_aggregate_tps (const MetricsReport & report)
{
	TpsMeasurement m;
	auto seconds = report.window_seconds ();
	for (auto const & c : report.chains)
	{
		if (seconds > 0)
			m.aggregate += static_cast<double> (c.window_included) / static_cast<double> (seconds);
		if (!c.loaded)
			m.not_saturated.push_back ("NotSaturated: chain " + c.chain_id + " carried no load");
		else if (c.drained_at)
			m.not_saturated.push_back ("NotSaturated: chain " + c.chain_id + " mempool drained at tick " + std::to_string (*c.drained_at));
	}
	return m;
}

json MetricsReport::to_json () const
{
	json chains_j = json::array ();
	for (auto const & c : chains)
	{
		json j{ { "chain_id", c.chain_id },
			{ "height", c.height },
			{ "included", c.included },
			{ "window_included", c.window_included },
			{ "tps", c.tps },
			{ "capacity_tps", c.capacity_tps },
			{ "loaded", c.loaded },
			{ "state_digest", c.state_digest },
			{ "holdings_digest", c.holdings_digest } };
		j["drained_at"] = c.drained_at ? json (*c.drained_at) : json ();
		chains_j.push_back (std::move (j));
	}
	json tax = json::object ();
	for (auto const & [epoch, amount] : tax_by_epoch)
		tax[std::to_string (epoch)] = amount.to_string ();
	json violations_j = json::array ();
	for (auto const & v : violations)
		violations_j.push_back ({ { "tick", v.tick }, { "what", v.what } });
	return { { "scenario", scenario },
		{ "seed", seed },
		{ "ticks", ticks },
		{ "tick_seconds", tick_seconds },
		{ "window", { { "start", window_start }, { "end", window_end }, { "seconds", window_seconds () } } },
		{ "chains", chains_j },
		{ "aggregate_tps", aggregate_tps },
		{ "tax_by_epoch", tax },
		{ "registry_ledger_digest", registry_ledger_digest },
		{ "warnings", warnings },
		{ "violations", violations_j },
		{ "aborted_at", aborted_at ? json (*aborted_at) : json () },
		{ "details", details } };
}

MetricsReport MetricsReport::from_json (const json & j)
{
	require_keys (j, { "scenario", "seed", "ticks", "tick_seconds", "window", "chains", "aggregate_tps", "tax_by_epoch", "registry_ledger_digest", "warnings", "violations", "aborted_at", "details" }, "report");
	MetricsReport r;
	try
	{
		r.scenario = j.at ("scenario").get<std::string> ();
		r.seed = j.at ("seed").get<std::uint64_t> ();
		r.ticks = j.at ("ticks").get<std::uint64_t> ();
		r.tick_seconds = j.at ("tick_seconds").get<std::uint64_t> ();
		auto const & w = j.at ("window");
		require_keys (w, { "start", "end", "seconds" }, "report.window");
		r.window_start = w.at ("start").get<std::uint64_t> ();
		r.window_end = w.at ("end").get<std::uint64_t> ();
		for (auto const & c : j.at ("chains"))
		{
			require_keys (c, { "chain_id", "height", "included", "window_included", "tps", "capacity_tps", "loaded", "drained_at", "state_digest", "holdings_digest" }, "report.chains");
			ChainMetrics m;
			m.chain_id = c.at ("chain_id").get<std::string> ();
			m.height = c.at ("height").get<std::uint64_t> ();
			m.included = c.at ("included").get<std::uint64_t> ();
			m.window_included = c.at ("window_included").get<std::uint64_t> ();
			m.tps = c.at ("tps").get<double> ();
			m.capacity_tps = c.at ("capacity_tps").get<double> ();
			m.loaded = c.at ("loaded").get<bool> ();
			if (!c.at ("drained_at").is_null ())
				m.drained_at = c.at ("drained_at").get<std::uint64_t> ();
			m.state_digest = c.at ("state_digest").get<std::string> ();
			m.holdings_digest = c.at ("holdings_digest").get<std::string> ();
			r.chains.push_back (std::move (m));
		}
		r.aggregate_tps = j.at ("aggregate_tps").get<double> ();
		for (auto const & [epoch, amount] : j.at ("tax_by_epoch").items ())
			r.tax_by_epoch[std::stoull (epoch)] = Amount::parse (amount.get<std::string> ());
		r.registry_ledger_digest = j.at ("registry_ledger_digest").get<std::string> ();
		r.warnings = j.at ("warnings").get<std::vector<std::string>> ();
		for (auto const & v : j.at ("violations"))
			r.violations.push_back ({ v.at ("tick").get<std::uint64_t> (), v.at ("what").get<std::string> () });
		if (!j.at ("aborted_at").is_null ())
			r.aborted_at = j.at ("aborted_at").get<std::uint64_t> ();
		r.details = j.at ("details");
	}
	catch (const json::exception & e)
	{
		throw FormatError ("report", e.what ());
	}
	catch (const std::invalid_argument & e)
	{
		throw FormatError ("report.tax_by_epoch", e.what ());
	}
	return r;
}

}
