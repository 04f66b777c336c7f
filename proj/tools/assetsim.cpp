#include <assetsim/sim/dump.hpp>
#include <assetsim/sim/simulator.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace assetsim;
using namespace assetsim::sim;

namespace {
constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_scenario = 2;
constexpr int exit_invariant = 3;

int run_command (const std::string & path, std::string dump_dir, const std::string & report_path)
{
	Scenario scenario;
	try
	{
		scenario = load_scenario (path);
	}
	catch (const ScenarioError & e)
	{
		std::cerr << path << ": " << e.what () << "\n";
		return exit_scenario;
	}

	Simulator sim (std::move (scenario));
	sim.run ();
	auto report = sim.report ();

	if (dump_dir.empty ())
		if (auto const * env = std::getenv (dump_dir_env))
			dump_dir = env;
	if (!dump_dir.empty ())
		dump_state (sim, dump_dir);

	auto text = report.to_json ().dump (2) + "\n";
	if (report_path.empty ())
		std::cout << text;
	else
	{
		std::ofstream out (report_path, std::ios::binary | std::ios::trunc);
		if (!out)
		{
			std::cerr << "cannot write " << report_path << "\n";
			return exit_failure;
		}
		out << text;
	}

	for (auto const & w : report.warnings)
		std::cerr << "warning: " << w << "\n";
	if (!report.violations.empty ())
	{
		auto const & v = report.violations.front ();
		std::cerr << "invariant violated at tick " << v.tick << ": " << v.what << "\n";
		return exit_invariant;
	}
	return exit_ok;
}

std::optional<Address> parse_address (const std::string & text)
{
	auto colon = text.find (':');
	if (colon == std::string::npos)
		return party_address (text);
	Address a;
	try
	{
		a.kind = address_kind_from_string (text.substr (0, colon));
		a.hash = Digest::from_hex (text.substr (colon + 1));
	}
	catch (const std::exception &)
	{
		return std::nullopt;
	}
	return a;
}

int inspect_command (const std::string & dump, const std::string & chain_id, const std::string & contract, const std::string & address)
{
	LoadedChain loaded;
	try
	{
		std::filesystem::path p (dump);
		loaded = load_chain_dump (std::filesystem::is_directory (p) ? p / (chain_id + ".jsonl") : p);
	}
	catch (const CorruptDump & e)
	{
		std::cerr << "CorruptDump: " << e.what () << "\n";
		return exit_failure;
	}
	if (loaded.config.chain_id != chain_id)
	{
		std::cerr << "dump holds chain " << loaded.config.chain_id << ", not " << chain_id << "\n";
		return exit_failure;
	}
	auto const & state = loaded.state;
	json out;
	if (!contract.empty ())
	{
		Digest id;
		try
		{
			id = Digest::from_hex (contract);
		}
		catch (const std::exception &)
		{
			std::cerr << "bad contract id " << contract << "\n";
			return exit_failure;
		}
		auto it = state.contracts.find (id);
		if (it == state.contracts.end ())
		{
			std::cerr << "no contract " << contract << " on " << chain_id << "\n";
			return exit_failure;
		}
		auto const & c = it->second;
		json vars = json::object ();
		for (auto const & [k, v] : c.state_vars ())
			vars[k] = to_json (v);
		out = { { "id", c.id.hex () },
			{ "class", contract::class_name (c.cls) },
			{ "status", contract::to_string (c.status) },
			{ "created_height", c.created_height },
			{ "locked_balance", c.locked_balance.to_string () },
			{ "state", vars } };
	}
	else if (!address.empty ())
	{
		auto a = parse_address (address);
		if (!a)
		{
			std::cerr << "bad address " << address << "\n";
			return exit_failure;
		}
		json outputs = json::array ();
		for (auto const & [op, o] : state.utxo.outputs_of (*a))
			outputs.push_back ({ { "outpoint", op.to_string () }, { "value", o.value.to_string () } });
		out = { { "address", a->to_string () }, { "balance", state.balance (*a).to_string () }, { "outputs", outputs } };
	}
	else
	{
		json contracts = json::array ();
		for (auto const & [id, c] : state.contracts)
			contracts.push_back ({ { "id", id.hex () }, { "class", contract::class_name (c.cls) }, { "status", contract::to_string (c.status) } });
		out = { { "chain", chain_id },
			{ "height", state.height },
			{ "tip", state.tip.hex () },
			{ "state_digest", state.digest ().hex () },
			{ "holdings_digest", state.holdings_digest ().hex () },
			{ "minted", state.minted.to_string () },
			{ "utxos", state.utxo.size () },
			{ "contracts", contracts } };
	}
	std::cout << out.dump (2) << "\n";
	return exit_ok;
}

int metrics_command (const std::string & path)
{
	MetricsReport report;
	try
	{
		std::ifstream in (path, std::ios::binary);
		if (!in)
		{
			std::cerr << "cannot read " << path << "\n";
			return exit_failure;
		}
		report = MetricsReport::from_json (json::parse (in));
	}
	catch (const std::exception & e)
	{
		std::cerr << path << ": " << e.what () << "\n";
		return exit_failure;
	}
	auto m = measure_aggregate_tps (report);
	std::cout << "window ticks [" << report.window_start << ", " << report.window_end << "), " << report.window_seconds () << " s\n";
	for (auto const & c : report.chains)
		std::cout << c.chain_id << ": " << c.window_included << " tx, " << c.tps << " tps (capacity " << c.capacity_tps << ")\n";
	std::cout << "aggregate: " << m.aggregate << " tps\n";
	for (auto const & w : m.not_saturated)
		std::cout << "warning: " << w << "\n";
	return exit_ok;
}
}

int main (int argc, char ** argv)
{
	CLI::App app{ "assetsim: multi-chain asset registry simulator" };
	app.require_subcommand (1);

	std::string scenario, dump_dir, report_path;
	auto * run = app.add_subcommand ("run", "Run a scenario and emit its metrics report");
	run->add_option ("scenario", scenario, "Scenario file")->required ();
	run->add_option ("--dump-dir", dump_dir, std::string ("Write chain and registry dumps here (default $") + dump_dir_env + ")");
	run->add_option ("--report", report_path, "Write the report here instead of stdout");

	std::string dump, chain_id, contract, address;
	auto * inspect = app.add_subcommand ("inspect", "Replay a dump and show chain, contract or address state");
	inspect->add_option ("dump", dump, "Dump directory or chain dump file")->required ();
	inspect->add_option ("--chain", chain_id, "Chain id")->required ();
	auto * contract_opt = inspect->add_option ("--contract", contract, "Contract id (hex)");
	inspect->add_option ("--address", address, "Party name or kind:hex address")->excludes (contract_opt);

	std::string report_in;
	auto * metrics = app.add_subcommand ("metrics", "Summarize the throughput in a report");
	metrics->add_option ("report", report_in, "Report file")->required ();

	try
	{
		app.parse (argc, argv);
	}
	catch (const CLI::ParseError & e)
	{
		return app.exit (e) == 0 ? exit_ok : exit_failure;
	}

	if (*run)
		return run_command (scenario, dump_dir, report_path);
	if (*inspect)
		return inspect_command (dump, chain_id, contract, address);
	return metrics_command (report_in);
}
