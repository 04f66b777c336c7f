#include <assetsim/contract/contract.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/sim/scenario.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace assetsim::sim {

ScenarioError::ScenarioError (std::size_t line, std::string field, const std::string & message) :
	std::runtime_error ("line " + std::to_string (line) + (field.empty () ? "" : ", " + field) + ": " + message),
	line_ (line),
	field_ (std::move (field))
{
}

namespace {
constexpr std::string_view event_names[] = {
	"submit_tx",
	"deploy",
	"call",
	"register_asset",
	"buy",
	"cancel",
	"rotate",
	"revoke",
	"steal_keys",
	"detect_theft",
	"forge_destroy",
	"forge_registration",
	"crash_validator",
	"start_swap",
	"saturate_chain",
};
}

std::string_view to_string (EventType t)
{
	return event_names[static_cast<int> (t)];
}

std::optional<EventType> event_type_from_string (std::string_view s)
{
	for (std::size_t i = 0; i < std::size (event_names); ++i)
		if (event_names[i] == s)
			return static_cast<EventType> (i);
	return std::nullopt;
}

Identity party_identity (std::string_view name)
{
	return Identity::from_seed ("party:" + std::string (name));
}

Address party_address (std::string_view name)
{
	return derive_address (party_identity (name).public_key ());
}

LineIndex::LineIndex (std::string_view text)
{
	struct Frame
	{
		bool object;
		std::string base;
		std::size_t index{ 0 };
		std::string key;
		bool want_key{ true };
	};
	std::vector<Frame> stack;
	std::size_t line = 1;
	std::size_t i = 0;

	auto here = [&] () -> std::string {
		if (stack.empty ())
			return "";
		auto const & f = stack.back ();
		return f.base + "/" + (f.object ? f.key : std::to_string (f.index));
	};
	auto read_string = [&] () {
		std::string out;
		++i;
		while (i < text.size () && text[i] != '"')
		{
			if (text[i] == '\\' && i + 1 < text.size ())
			{
				out += text[i + 1];
				i += 2;
				continue;
			}
			if (text[i] == '\n')
				++line;
			out += text[i++];
		}
		++i;
		return out;
	};

	while (i < text.size ())
	{
		char c = text[i];
		if (c == '\n')
		{
			++line;
			++i;
		}
		else if (c == ' ' || c == '\t' || c == '\r')
			++i;
		else if (c == ':')
		{
			stack.back ().want_key = false;
			++i;
		}
		else if (c == ',')
		{
			auto & f = stack.back ();
			if (f.object)
				f.want_key = true;
			else
				++f.index;
			++i;
		}
		else if (c == '}' || c == ']')
		{
			stack.pop_back ();
			++i;
		}
		else if (c == '"' && !stack.empty () && stack.back ().object && stack.back ().want_key)
		{
			stack.back ().key = read_string ();
		}
		else
		{
			auto pointer = here ();
			lines_.emplace (pointer, line);
			if (c == '{' || c == '[')
			{
				stack.push_back ({ c == '{', pointer, 0, "", true });
				++i;
			}
			else if (c == '"')
				read_string ();
			else
				while (i < text.size () && text[i] != ',' && text[i] != '}' && text[i] != ']' && text[i] != '\n')
					++i;
		}
	}
}

std::size_t LineIndex::line (std::string_view pointer) const
{
	std::string p (pointer);
	while (true)
	{
		if (auto it = lines_.find (p); it != lines_.end ())
			return it->second;
		if (p.empty ())
			return 0;
		p.erase (p.rfind ('/'));
	}
}

json chain_config_to_json (const chain::ChainConfig & config)
{
	json miners = json::array ();
	for (auto const & m : config.miners)
		miners.push_back (to_json (m));
	json genesis = json::array ();
	for (auto const & o : config.genesis)
		genesis.push_back (to_json (o));
	return { { "chain_id", config.chain_id },
		{ "block_interval_ticks", config.block_interval_ticks },
		{ "max_tx_per_block", config.max_tx_per_block },
		{ "mining_reward", config.mining_reward.to_string () },
		{ "rng_seed", config.rng_seed },
		{ "miners", miners },
		{ "genesis", genesis } };
}

chain::ChainConfig chain_config_from_json (const json & j)
{
	require_keys (j, { "chain_id", "block_interval_ticks", "max_tx_per_block", "mining_reward", "rng_seed", "miners", "genesis" }, "chain");
	chain::ChainConfig c;
	try
	{
		c.chain_id = require_field (j, "chain_id", "chain").get<std::string> ();
		c.block_interval_ticks = require_field (j, "block_interval_ticks", "chain").get<std::uint64_t> ();
		c.max_tx_per_block = require_field (j, "max_tx_per_block", "chain").get<std::uint64_t> ();
		c.mining_reward = Amount::parse (require_field (j, "mining_reward", "chain").get<std::string> ());
		c.rng_seed = require_field (j, "rng_seed", "chain").get<std::uint64_t> ();
	}
	catch (const json::exception & e)
	{
		throw FormatError ("chain", e.what ());
	}
	catch (const std::invalid_argument & e)
	{
		throw FormatError ("chain.mining_reward", e.what ());
	}
	for (auto const & m : require_field (j, "miners", "chain"))
		c.miners.push_back (address_from_json (m));
	for (auto const & o : require_field (j, "genesis", "chain"))
		c.genesis.push_back (output_from_json (o));
	return c;
}

namespace {
struct Node
{
	const json & j;
	std::string path;
	std::string ptr;

	Node child (std::string_view key) const
	{
		return { j.at (std::string (key)), path.empty () ? std::string (key) : path + "." + std::string (key), ptr + "/" + std::string (key) };
	}
	Node at (std::size_t i) const
	{
		return { j.at (i), path + "[" + std::to_string (i) + "]", ptr + "/" + std::to_string (i) };
	}
	bool has (std::string_view key) const { return j.contains (std::string (key)); }
};

struct Handle
{
	std::string chain;
	bool registered{ false };
};

class Parser
{
public:
	explicit Parser (std::string_view text) :
		index_ (text)
	{
	}

	Scenario parse (const json & root);

private:
	[[noreturn]] void fail (const Node & n, const std::string & message) const
	{
		throw ScenarioError (index_.line (n.ptr), n.path, message);
	}

	void keys (const Node & n, std::initializer_list<std::string_view> required, std::initializer_list<std::string_view> optional) const
	{
		if (!n.j.is_object ())
			fail (n, "expected an object");
		for (auto const & [key, value] : n.j.items ())
		{
			bool known = std::find (required.begin (), required.end (), key) != required.end () || std::find (optional.begin (), optional.end (), key) != optional.end ();
			if (!known)
				fail (n.child (key), "unknown field");
		}
		for (auto key : required)
			if (!n.has (key))
				fail (n, "missing field '" + std::string (key) + "'");
	}

	std::uint64_t u64 (const Node & n) const
	{
		if (!n.j.is_number_unsigned ())
			fail (n, "expected a non-negative integer");
		return n.j.get<std::uint64_t> ();
	}
	std::uint64_t u64 (const Node & n, std::string_view key, std::uint64_t fallback) const
	{
		return n.has (key) ? u64 (n.child (key)) : fallback;
	}
	std::string str (const Node & n) const
	{
		if (!n.j.is_string ())
			fail (n, "expected a string");
		return n.j.get<std::string> ();
	}
	bool boolean (const Node & n) const
	{
		if (!n.j.is_boolean ())
			fail (n, "expected true or false");
		return n.j.get<bool> ();
	}
	Amount amount (const Node & n) const
	{
		try
		{
			return Amount::parse (str (n));
		}
		catch (const std::invalid_argument & e)
		{
			fail (n, e.what ());
		}
	}
	std::string party (const Node & n) const
	{
		auto name = str (n);
		if (!parties_.contains (name))
			fail (n, "unknown party '" + name + "'");
		return name;
	}
	std::string chain_ref (const Node & n) const
	{
		auto id = str (n);
		if (!chains_.contains (id))
			fail (n, "unknown chain '" + id + "'");
		return id;
	}
	const Handle & contract_ref (const Node & n) const
	{
		auto name = str (n);
		auto it = handles_.find (name);
		if (it == handles_.end ())
			fail (n, "unknown contract handle '" + name + "'");
		return it->second;
	}
	void define (std::set<std::string> & names, const Node & n)
	{
		auto name = str (n);
		if (names.contains (name) || handles_.contains (name))
			fail (n, "handle '" + name + "' already defined");
		names.insert (name);
	}
	void define_contract (const Node & n, Handle h)
	{
		auto name = str (n);
		if (handles_.contains (name) || txs_.contains (name) || swaps_.contains (name))
			fail (n, "handle '" + name + "' already defined");
		handles_.emplace (name, std::move (h));
	}

	chain::ChainConfig chain_config (const Node & n, std::uint64_t seed);
	void args (const Node & n) const;
	void registration (const Node & n) const;
	void leg (const Node & n) const;
	void event (const Node & n, Event & e, std::uint64_t ticks);

	LineIndex index_;
	std::set<std::string> parties_;
	std::map<std::string, std::size_t> chains_; ///< id -> genesis output count
	std::map<std::string, Handle> handles_;
	std::set<std::string> txs_;
	std::set<std::string> swaps_;
	std::map<std::string, std::string> tx_chain_;
	std::uint64_t validators_{ 0 };
};

chain::ChainConfig Parser::chain_config (const Node & n, std::uint64_t seed)
{
	keys (n, { "id" }, { "block_interval_ticks", "max_tx_per_block", "mining_reward", "rng_seed", "miners", "genesis" });
	chain::ChainConfig c;
	c.chain_id = str (n.child ("id"));
	if (chains_.contains (c.chain_id))
		fail (n.child ("id"), "duplicate chain id");
	c.block_interval_ticks = u64 (n, "block_interval_ticks", 1);
	c.max_tx_per_block = u64 (n, "max_tx_per_block", 7);
	if (n.has ("mining_reward"))
		c.mining_reward = amount (n.child ("mining_reward"));
	if (n.has ("rng_seed"))
		c.rng_seed = u64 (n.child ("rng_seed"));
	else
	{
		Writer w;
		w.tag ("assetsim/chain-seed").u64 (seed).str (c.chain_id);
		auto d = w.hash ();
		for (int i = 0; i < 8; ++i)
			c.rng_seed = (c.rng_seed << 8) | d.bytes[i];
	}
	auto miners = u64 (n, "miners", 0);
	for (std::uint64_t i = 0; i < miners; ++i)
		c.miners.push_back (derive_address (Identity::from_seed ("miner:" + c.chain_id + ":" + std::to_string (i)).public_key ()));
	if (n.has ("genesis"))
	{
		auto g = n.child ("genesis");
		if (!g.j.is_array ())
			fail (g, "expected an array");
		for (std::size_t i = 0; i < g.j.size (); ++i)
		{
			auto o = g.at (i);
			keys (o, { "to", "amount" }, {});
			c.genesis.push_back ({ amount (o.child ("amount")), party_address (party (o.child ("to"))) });
		}
	}
	try
	{
		c.validate ();
	}
	catch (const std::invalid_argument & e)
	{
		fail (n, e.what ());
	}
	chains_[c.chain_id] = c.genesis.size ();
	return c;
}

void Parser::args (const Node & n) const
{
	if (!n.j.is_array ())
		fail (n, "expected an array");
	for (std::size_t i = 0; i < n.j.size (); ++i)
	{
		auto a = n.at (i);
		if (a.j.is_number_unsigned () || a.j.is_string ())
			continue;
		if (!a.j.is_object () || a.j.size () != 1)
			fail (a, "expected an integer, a string or a one-key typed object");
		auto const kind = a.j.begin ().key ();
		auto v = a.child (kind);
		if (kind == "party")
			party (v);
		else if (kind == "amount")
			amount (v);
		else if (kind == "u64" || kind == "height_plus")
			u64 (v);
		else if (kind == "string" || kind == "sha256" || kind == "text")
			str (v);
		else if (kind == "contract")
			contract_ref (v);
		else
			fail (v, "unknown argument type");
	}
}

void Parser::registration (const Node & n) const
{
	party (n.child ("owner"));
	chain_ref (n.child ("chain"));
	if (n.has ("asset_class"))
		str (n.child ("asset_class"));
	str (n.child ("id"));
	str (n.child ("make"));
	str (n.child ("model"));
	u64 (n.child ("year"));
	amount (n.child ("price"));
	if (u64 (n.child ("tax_percent")) > 100)
		fail (n.child ("tax_percent"), "must be at most 100");
}

void Parser::leg (const Node & n) const
{
	keys (n, { "chain", "timeout_blocks" }, { "asset", "amount" });
	auto chain = chain_ref (n.child ("chain"));
	if (n.has ("asset") == n.has ("amount"))
		fail (n, "exactly one of 'asset' or 'amount'");
	if (n.has ("asset") && contract_ref (n.child ("asset")).chain != chain)
		fail (n.child ("asset"), "asset lives on another chain");
	if (n.has ("amount"))
		amount (n.child ("amount"));
	if (u64 (n.child ("timeout_blocks")) == 0)
		fail (n.child ("timeout_blocks"), "must be positive");
}

void Parser::event (const Node & n, Event & e, std::uint64_t ticks)
{
	if (!n.j.is_object ())
		fail (n, "expected an object");
	if (!n.has ("tick") || !n.has ("type"))
		fail (n, "events need 'tick' and 'type'");
	e.tick = u64 (n.child ("tick"));
	if (e.tick > ticks)
		fail (n.child ("tick"), "after the last tick");
	auto type = event_type_from_string (str (n.child ("type")));
	if (!type)
		fail (n.child ("type"), "unknown event type");
	e.type = *type;
	e.line = index_.line (n.ptr);
	switch (e.type)
	{
		case EventType::submit_tx:
		{
			keys (n, { "tick", "type", "chain" }, { "from", "to", "amount", "inputs", "outputs", "as" });
			auto chain = chain_ref (n.child ("chain"));
			if (n.has ("inputs") == n.has ("from"))
				fail (n, "exactly one of 'from' or 'inputs'");
			if (n.has ("to") != n.has ("amount"))
				fail (n, "'to' and 'amount' go together");
			if (n.has ("to") == n.has ("outputs"))
				fail (n, "exactly one of 'to'/'amount' or 'outputs'");
			if (n.has ("inputs") && !n.has ("outputs"))
				fail (n, "explicit inputs need explicit outputs");
			if (n.has ("from"))
				party (n.child ("from"));
			if (n.has ("to"))
			{
				party (n.child ("to"));
				amount (n.child ("amount"));
			}
			if (n.has ("inputs"))
			{
				auto ins = n.child ("inputs");
				if (!ins.j.is_array () || ins.j.empty ())
					fail (ins, "expected a non-empty array");
				for (std::size_t i = 0; i < ins.j.size (); ++i)
				{
					auto in = ins.at (i);
					if (in.has ("genesis"))
					{
						keys (in, { "genesis" }, {});
						if (u64 (in.child ("genesis")) >= chains_.at (chain))
							fail (in.child ("genesis"), "no such genesis output");
					}
					else
					{
						keys (in, { "tx", "index" }, {});
						auto tx = str (in.child ("tx"));
						if (!txs_.contains (tx))
							fail (in.child ("tx"), "unknown transaction '" + tx + "'");
						if (tx_chain_.at (tx) != chain)
							fail (in.child ("tx"), "transaction is on another chain");
						u64 (in.child ("index"));
					}
				}
			}
			if (n.has ("outputs"))
			{
				auto outs = n.child ("outputs");
				if (!outs.j.is_array () || outs.j.empty ())
					fail (outs, "expected a non-empty array");
				for (std::size_t i = 0; i < outs.j.size (); ++i)
				{
					auto o = outs.at (i);
					keys (o, { "to", "amount" }, {});
					party (o.child ("to"));
					amount (o.child ("amount"));
				}
			}
			if (n.has ("as"))
			{
				define (txs_, n.child ("as"));
				tx_chain_[str (n.child ("as"))] = chain;
			}
			break;
		}
		case EventType::deploy:
		{
			keys (n, { "tick", "type", "chain", "sender", "class", "as" }, { "args", "value" });
			auto chain = chain_ref (n.child ("chain"));
			party (n.child ("sender"));
			if (!contract::class_from_name (str (n.child ("class"))))
				fail (n.child ("class"), "unknown contract class");
			if (n.has ("args"))
				args (n.child ("args"));
			if (n.has ("value"))
				amount (n.child ("value"));
			define_contract (n.child ("as"), { chain, false });
			break;
		}
		case EventType::call:
			keys (n, { "tick", "type", "target", "sender", "function" }, { "args", "value" });
			contract_ref (n.child ("target"));
			party (n.child ("sender"));
			if (str (n.child ("function")).empty ())
				fail (n.child ("function"), "empty function name");
			if (n.has ("args"))
				args (n.child ("args"));
			if (n.has ("value"))
				amount (n.child ("value"));
			break;
		case EventType::register_asset:
			keys (n, { "tick", "type", "as", "owner", "chain", "id", "make", "model", "year", "price", "tax_percent" }, { "asset_class" });
			registration (n);
			define_contract (n.child ("as"), { str (n.child ("chain")), true });
			break;
		case EventType::forge_registration:
			keys (n, { "tick", "type", "thief", "epoch", "owner", "chain", "id", "make", "model", "year", "price", "tax_percent" }, { "asset_class" });
			party (n.child ("thief"));
			u64 (n.child ("epoch"));
			registration (n);
			break;
		case EventType::buy:
			keys (n, { "tick", "type", "asset", "buyer", "amount" }, { "current_owner" });
			contract_ref (n.child ("asset"));
			party (n.child ("buyer"));
			amount (n.child ("amount"));
			if (n.has ("current_owner"))
				party (n.child ("current_owner"));
			break;
		case EventType::cancel:
			keys (n, { "tick", "type", "asset", "requester" }, {});
			if (!contract_ref (n.child ("asset")).registered)
				fail (n.child ("asset"), "not a registered asset");
			party (n.child ("requester"));
			break;
		case EventType::rotate:
			keys (n, { "tick", "type" }, { "threshold" });
			if (n.has ("threshold") && (u64 (n.child ("threshold")) == 0 || u64 (n.child ("threshold")) > validators_))
				fail (n.child ("threshold"), "threshold must be 1..validators");
			break;
		case EventType::revoke:
		case EventType::detect_theft:
			keys (n, { "tick", "type", "epoch" }, {});
			u64 (n.child ("epoch"));
			break;
		case EventType::steal_keys:
			keys (n, { "tick", "type", "epoch", "thief" }, {});
			u64 (n.child ("epoch"));
			party (n.child ("thief"));
			break;
		case EventType::forge_destroy:
			keys (n, { "tick", "type", "thief", "asset", "epoch" }, {});
			party (n.child ("thief"));
			if (!contract_ref (n.child ("asset")).registered)
				fail (n.child ("asset"), "not a registered asset");
			u64 (n.child ("epoch"));
			break;
		case EventType::crash_validator:
		{
			keys (n, { "tick", "type", "slot" }, { "mode" });
			if (u64 (n.child ("slot")) >= validators_)
				fail (n.child ("slot"), "no such validator slot");
			if (n.has ("mode"))
			{
				auto mode = str (n.child ("mode"));
				if (mode != "honest" && mode != "crashed" && mode != "byzantine")
					fail (n.child ("mode"), "expected honest, crashed or byzantine");
			}
			break;
		}
		case EventType::start_swap:
		{
			keys (n, { "tick", "type", "category", "initiator", "responder", "initiator_leg", "responder_leg" }, { "as", "faults" });
			auto category = u64 (n.child ("category"));
			if (category != 3 && category != 4)
				fail (n.child ("category"), "swaps are category 3 or 4");
			party (n.child ("initiator"));
			party (n.child ("responder"));
			leg (n.child ("initiator_leg"));
			leg (n.child ("responder_leg"));
			if (n.has ("faults"))
			{
				auto f = n.child ("faults");
				keys (f, {}, { "crash", "step", "recover_tick", "refuse_reveal" });
				if (f.has ("crash") && !swap::role_from_string (str (f.child ("crash"))))
					fail (f.child ("crash"), "expected initiator or responder");
				if (f.has ("step"))
				{
					auto step = u64 (f.child ("step"));
					if (step < 1 || step > swap::protocol_steps)
						fail (f.child ("step"), "protocol steps are 1..4");
				}
				if (f.has ("recover_tick"))
					u64 (f.child ("recover_tick"));
				if (f.has ("refuse_reveal"))
					boolean (f.child ("refuse_reveal"));
			}
			if (n.has ("as"))
				define (swaps_, n.child ("as"));
			break;
		}
		case EventType::saturate_chain:
		{
			keys (n, { "tick", "type", "chain", "funder", "from_tick", "until_tick" }, { "lanes" });
			chain_ref (n.child ("chain"));
			party (n.child ("funder"));
			auto from = u64 (n.child ("from_tick"));
			auto until = u64 (n.child ("until_tick"));
			if (from <= e.tick)
				fail (n.child ("from_tick"), "load must start after the event tick");
			if (until <= from || until > ticks)
				fail (n.child ("until_tick"), "must be after from_tick and within the run");
			if (n.has ("lanes") && u64 (n.child ("lanes")) == 0)
				fail (n.child ("lanes"), "must be positive");
			break;
		}
	}
	e.args = n.j;
	e.args.erase ("tick");
	e.args.erase ("type");
}

Scenario Parser::parse (const json & root)
{
	Node n{ root, "", "" };
	keys (n, { "format", "version", "seed", "ticks", "parties", "chains", "events" }, { "name", "tick_seconds", "registry", "swap" });
	if (str (n.child ("format")) != scenario_format)
		fail (n.child ("format"), "expected \"" + std::string (scenario_format) + "\"");
	if (u64 (n.child ("version")) != scenario_version)
		fail (n.child ("version"), "unsupported version");

	Scenario s;
	s.name = n.has ("name") ? str (n.child ("name")) : "";
	s.seed = u64 (n.child ("seed"));
	s.ticks = u64 (n.child ("ticks"));
	s.tick_seconds = u64 (n, "tick_seconds", 1);
	if (s.tick_seconds == 0)
		fail (n.child ("tick_seconds"), "must be positive");

	auto parties = n.child ("parties");
	if (!parties.j.is_array ())
		fail (parties, "expected an array");
	for (std::size_t i = 0; i < parties.j.size (); ++i)
	{
		auto name = str (parties.at (i));
		if (name.empty () || !parties_.insert (name).second)
			fail (parties.at (i), "empty or duplicate party");
		s.parties.push_back (name);
	}

	auto chains = n.child ("chains");
	if (!chains.j.is_array ())
		fail (chains, "expected an array");
	for (std::size_t i = 0; i < chains.j.size (); ++i)
		s.chains.push_back (chain_config (chains.at (i), s.seed));

	if (n.has ("registry"))
	{
		auto r = n.child ("registry");
		keys (r, {}, { "name", "validators", "fault_model", "f", "threshold" });
		if (r.has ("name"))
			s.registry.name = str (r.child ("name"));
		s.registry.validators.count = u64 (r, "validators", s.registry.validators.count);
		s.registry.validators.f = u64 (r, "f", s.registry.validators.f);
		if (r.has ("fault_model"))
		{
			try
			{
				s.registry.validators.model = registry::fault_model_from_string (str (r.child ("fault_model")));
			}
			catch (const std::invalid_argument &)
			{
				fail (r.child ("fault_model"), "expected crash or byzantine");
			}
		}
		s.registry.threshold = static_cast<std::uint32_t> (u64 (r, "threshold", 0));
		try
		{
			s.registry.validators.validate ();
		}
		catch (const std::invalid_argument & e)
		{
			fail (r, e.what ());
		}
		if (s.registry.threshold > s.registry.validators.count)
			fail (r.child ("threshold"), "exceeds validator count");
	}
	validators_ = s.registry.validators.count;

	if (n.has ("swap"))
	{
		auto w = n.child ("swap");
		keys (w, {}, { "margin_blocks", "watchtower" });
		s.swap.margin_blocks = u64 (w, "margin_blocks", s.swap.margin_blocks);
		if (w.has ("watchtower"))
			s.swap.watchtower = boolean (w.child ("watchtower"));
	}

	auto events = n.child ("events");
	if (!events.j.is_array ())
		fail (events, "expected an array");
	std::uint64_t last = 0;
	for (std::size_t i = 0; i < events.j.size (); ++i)
	{
		Event e;
		e.index = i;
		event (events.at (i), e, s.ticks);
		if (e.tick < last)
			fail (events.at (i).child ("tick"), "events must be sorted by tick");
		last = e.tick;
		s.events.push_back (std::move (e));
	}
	return s;
}

std::size_t line_of_offset (std::string_view text, std::size_t offset)
{
	std::size_t line = 1;
	for (std::size_t i = 0; i < offset && i < text.size (); ++i)
		line += text[i] == '\n';
	return line;
}
}

Scenario parse_scenario (std::string_view text)
{
	json root;
	try
	{
		root = json::parse (text);
	}
	catch (const json::parse_error & e)
	{
		throw ScenarioError (line_of_offset (text, e.byte == 0 ? 0 : e.byte - 1), "", e.what ());
	}
	return Parser (text).parse (root);
}

Scenario load_scenario (const std::filesystem::path & path)
{
	std::ifstream in (path, std::ios::binary);
	if (!in)
		throw ScenarioError (0, "", "cannot read " + path.string ());
	std::stringstream buffer;
	buffer << in.rdbuf ();
	return parse_scenario (buffer.str ());
}

}
