#pragma once

#include <assetsim/chain/chain.hpp>
#include <assetsim/core/bytes.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace assetsim::sim {

class Simulator;

inline constexpr std::string_view dump_format = "assetsim-dump";
inline constexpr int dump_version = 1;
inline constexpr const char * dump_dir_env = "ASSETSIM_DUMP_DIR";

class CorruptDump : public std::runtime_error
{
public:
	CorruptDump (std::string field, const std::string & message) :
		std::runtime_error (field.empty () ? message : field + ": " + message),
		field_ (std::move (field))
	{
	}

	const std::string & field () const { return field_; }

private:
	std::string field_;
};

struct ChainDigests
{
	std::uint64_t height{ 0 };
	Digest tip;
	Digest state;
	Digest holdings;

	bool operator== (const ChainDigests &) const = default;
};

struct DumpDigests
{
	std::map<std::string, ChainDigests> chains;
	std::optional<Digest> registry_ledger;

	bool operator== (const DumpDigests &) const = default;
};

/// A chain rebuilt from its dump file.
struct LoadedChain
{
	chain::ChainConfig config;
	std::vector<Block> blocks;
	chain::ChainState state;
};

DumpDigests digests_of (const Simulator & sim);

/// Writes manifest.json, one <chain>.jsonl per chain (header, one block per
/// line, digest trailer) and registry.jsonl. Returns the digests written.
DumpDigests dump_state (const Simulator & sim, const std::filesystem::path & dir);

/// Replays every dump in `dir` and checks the trailers. Throws CorruptDump.
DumpDigests load_dump (const std::filesystem::path & dir);
LoadedChain load_chain_dump (const std::filesystem::path & file);

}
