#include <assetsim/sim/dump.hpp>
#include <assetsim/sim/scenario.hpp>
#include <assetsim/sim/simulator.hpp>

#include <fstream>

namespace assetsim::sim {

namespace fs = std::filesystem;

namespace {
json header (std::string_view kind)
{
	return { { "format", dump_format }, { "version", dump_version }, { "kind", kind } };
}

void write_lines (const fs::path & file, const std::vector<json> & lines)
{
	std::ofstream out (file, std::ios::binary | std::ios::trunc);
	if (!out)
		throw std::runtime_error ("cannot write " + file.string ());
	for (auto const & l : lines)
		out << l.dump () << '\n';
}

std::vector<json> read_lines (const fs::path & file)
{
	std::ifstream in (file, std::ios::binary);
	if (!in)
		throw CorruptDump ("", "cannot read " + file.string ());
	std::vector<json> lines;
	std::string line;
	std::size_t n = 0;
	while (std::getline (in, line))
	{
		++n;
		if (line.empty ())
			continue;
		try
		{
			lines.push_back (json::parse (line));
		}
		catch (const json::parse_error & e)
		{
			throw CorruptDump ("line " + std::to_string (n), e.what ());
		}
	}
	return lines;
}

void check_header (const json & j, std::string_view kind, std::initializer_list<std::string_view> keys)
{
	try
	{
		require_keys (j, keys, "header");
		if (require_field (j, "format", "header") != dump_format)
			throw CorruptDump ("header.format", "not an assetsim dump");
		if (require_field (j, "version", "header") != dump_version)
			throw CorruptDump ("header.version", "unsupported version");
		if (require_field (j, "kind", "header") != kind)
			throw CorruptDump ("header.kind", "expected " + std::string (kind));
	}
	catch (const FormatError & e)
	{
		throw CorruptDump (e.field (), e.what ());
	}
}

/// Splits body lines from the trailer; every body line must be {key: ...}.
std::pair<std::vector<json>, json> body_and_trailer (const std::vector<json> & lines, std::string_view key)
{
	std::vector<json> body;
	std::optional<json> trailer;
	for (std::size_t i = 1; i < lines.size (); ++i)
	{
		auto const & l = lines[i];
		if (trailer)
			throw CorruptDump ("trailer", "data after trailer");
		if (!l.is_object () || l.size () != 1)
			throw CorruptDump ("line " + std::to_string (i + 1), "expected one key");
		if (l.contains ("trailer"))
			trailer = l.at ("trailer");
		else if (l.contains (std::string (key)))
			body.push_back (l.at (std::string (key)));
		else
			throw CorruptDump (l.begin ().key (), "unknown field");
	}
	if (!trailer)
		throw CorruptDump ("trailer", "truncated dump");
	return { std::move (body), std::move (*trailer) };
}

Digest digest_of (const json & j, const std::string & field)
{
	try
	{
		return Digest::from_hex (j.at (field).get<std::string> ());
	}
	catch (const std::exception & e)
	{
		throw CorruptDump ("trailer." + field, e.what ());
	}
}

ChainDigests chain_digests (const chain::ChainState & s)
{
	return { s.height, s.tip, s.digest (), s.holdings_digest () };
}
}

DumpDigests digests_of (const Simulator & sim)
{
	DumpDigests d;
	for (auto const & c : sim.chains ())
		d.chains[c->id ()] = chain_digests (c->state ());
	d.registry_ledger = sim.registry ().ledger_digest ();
	return d;
}

DumpDigests dump_state (const Simulator & sim, const fs::path & dir)
{
	fs::create_directories (dir);
	auto digests = digests_of (sim);
	json chains = json::array ();
	for (auto const & c : sim.chains ())
	{
		std::vector<json> lines;
		auto h = header ("chain");
		h["config"] = chain_config_to_json (c->config ());
		lines.push_back (std::move (h));
		for (auto const & b : c->blocks ())
			lines.push_back ({ { "block", to_json (b) } });
		auto const & d = digests.chains.at (c->id ());
		lines.push_back ({ { "trailer", { { "height", d.height }, { "tip", d.tip.hex () }, { "state_digest", d.state.hex () }, { "holdings_digest", d.holdings.hex () } } } });
		write_lines (dir / (c->id () + ".jsonl"), lines);
		chains.push_back (c->id ());
	}

	std::vector<json> lines;
	auto h = header ("registry");
	h["name"] = sim.registry ().config ().name;
	lines.push_back (std::move (h));
	for (auto const & r : sim.registry ().ledger ())
		lines.push_back ({ { "record", r.to_json () } });
	lines.push_back ({ { "trailer", { { "records", sim.registry ().ledger ().size () }, { "ledger_digest", digests.registry_ledger->hex () } } } });
	write_lines (dir / "registry.jsonl", lines);

	auto manifest = header ("manifest");
	manifest["chains"] = chains;
	manifest["registry"] = "registry.jsonl";
	write_lines (dir / "manifest.json", { manifest });
	return digests;
}

LoadedChain load_chain_dump (const fs::path & file)
{
	auto lines = read_lines (file);
	if (lines.empty ())
		throw CorruptDump ("header", "empty dump");
	check_header (lines[0], "chain", { "format", "version", "kind", "config" });
	LoadedChain loaded;
	try
	{
		loaded.config = chain_config_from_json (lines[0].at ("config"));
		loaded.config.validate ();
	}
	catch (const FormatError & e)
	{
		throw CorruptDump ("header." + e.field (), e.what ());
	}
	catch (const std::invalid_argument & e)
	{
		throw CorruptDump ("header.config", e.what ());
	}
	auto [body, trailer] = body_and_trailer (lines, "block");
	for (std::size_t i = 0; i < body.size (); ++i)
	{
		try
		{
			loaded.blocks.push_back (block_from_json (body[i]));
		}
		catch (const FormatError & e)
		{
			throw CorruptDump (e.field (), "block " + std::to_string (i) + ": " + e.what ());
		}
		catch (const std::exception & e)
		{
			throw CorruptDump ("block", "block " + std::to_string (i) + ": " + e.what ());
		}
	}
	try
	{
		loaded.state = chain::replay (loaded.config, loaded.blocks);
	}
	catch (const chain::InvalidBlock & e)
	{
		throw CorruptDump ("block", e.what ());
	}

	try
	{
		require_keys (trailer, { "height", "tip", "state_digest", "holdings_digest" }, "trailer");
	}
	catch (const FormatError & e)
	{
		throw CorruptDump (e.field (), e.what ());
	}
	if (!trailer.at ("height").is_number_unsigned () || trailer.at ("height").get<std::uint64_t> () != loaded.state.height)
		throw CorruptDump ("trailer.height", "does not match the replayed chain");
	if (digest_of (trailer, "tip") != loaded.state.tip)
		throw CorruptDump ("trailer.tip", "does not match the replayed chain");
	if (digest_of (trailer, "state_digest") != loaded.state.digest ())
		throw CorruptDump ("trailer.state_digest", "does not match the replayed chain");
	if (digest_of (trailer, "holdings_digest") != loaded.state.holdings_digest ())
		throw CorruptDump ("trailer.holdings_digest", "does not match the replayed chain");
	return loaded;
}

DumpDigests load_dump (const fs::path & dir)
{
	auto manifest_lines = read_lines (dir / "manifest.json");
	if (manifest_lines.size () != 1)
		throw CorruptDump ("manifest", "expected one JSON object");
	auto const & manifest = manifest_lines[0];
	check_header (manifest, "manifest", { "format", "version", "kind", "chains", "registry" });

	DumpDigests d;
	try
	{
		for (auto const & id : manifest.at ("chains"))
		{
			auto name = id.get<std::string> ();
			auto loaded = load_chain_dump (dir / (name + ".jsonl"));
			if (loaded.config.chain_id != name)
				throw CorruptDump ("header.config.chain_id", "does not match the manifest");
			d.chains[name] = chain_digests (loaded.state);
		}
	}
	catch (const json::exception & e)
	{
		throw CorruptDump ("manifest.chains", e.what ());
	}

	auto lines = read_lines (dir / manifest.at ("registry").get<std::string> ());
	if (lines.empty ())
		throw CorruptDump ("header", "empty dump");
	check_header (lines[0], "registry", { "format", "version", "kind", "name" });
	auto [body, trailer] = body_and_trailer (lines, "record");
	std::vector<registry::LedgerRecord> records;
	for (auto const & r : body)
	{
		try
		{
			records.push_back (registry::LedgerRecord::from_json (r));
		}
		catch (const FormatError & e)
		{
			throw CorruptDump (e.field (), e.what ());
		}
		catch (const json::exception & e)
		{
			throw CorruptDump ("record", e.what ());
		}
	}
	try
	{
		require_keys (trailer, { "records", "ledger_digest" }, "trailer");
	}
	catch (const FormatError & e)
	{
		throw CorruptDump (e.field (), e.what ());
	}
	if (trailer.at ("records") != records.size ())
		throw CorruptDump ("trailer.records", "record count mismatch");
	auto digest = registry::ledger_digest (records);
	if (digest_of (trailer, "ledger_digest") != digest)
		throw CorruptDump ("trailer.ledger_digest", "does not match the records");
	d.registry_ledger = digest;
	return d;
}

}
