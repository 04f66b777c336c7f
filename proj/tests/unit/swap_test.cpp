#include "../support/fixtures.hpp"

#include <assetsim/registry/registry.hpp>
#include <assetsim/swap/swap.hpp>

#include <gtest/gtest.h>

#include <chrono>
#include <memory>

using namespace assetsim;
using namespace assetsim::swap;
using namespace assetsim::test;

namespace {
struct world
{
	Identity alice = party ("alice");
	Identity bob = party ("bob");
	Identity carol = party ("carol");
	Identity dave = party ("dave");
	std::vector<std::unique_ptr<chain::Chain>> chains;
	registry::Registry reg;
	Coordinator coord;
	std::uint64_t tick{ 0 };

	explicit world (CoordinatorConfig cc = {}, std::uint64_t eth_interval = 1) :
		reg (registry::RegistryConfig{}),
		coord (cc)
	{
		std::vector<TxOutput> funds{ { btc ("5"), addr (alice) }, { btc ("20"), addr (bob) }, { btc ("20"), addr (carol) }, { btc ("20"), addr (dave) } };
		chains.push_back (std::make_unique<chain::Chain> (config ("btc", funds)));
		chains.push_back (std::make_unique<chain::Chain> (config ("eth", funds, 100, eth_interval)));
		for (auto & c : chains)
		{
			reg.attach_chain (*c);
			coord.attach_chain (*c);
		}
		coord.add_party ("alice", alice);
		coord.add_party ("bob", bob);
	}

	chain::Chain & on (std::string_view id)
	{
		return *chains[id == "btc" ? 0 : 1];
	}

	void step ()
	{
		++tick;
		reg.set_tick (tick);
		for (auto & c : chains)
		{
			if (auto produced = c->produce_block (tick))
			{
				reg.observe_block (c->id (), *produced);
				coord.observe_block (c->id (), *produced);
			}
		}
		coord.step (tick);
	}

	Digest register_car (std::string vin, const Identity & owner, std::string chain_id)
	{
		registry::RegistrationRequest r;
		r.key = { "car", vin };
		r.make = "Tesla";
		r.model = "S";
		r.year = 2020;
		r.price = btc ("10");
		r.tax_percent = 10;
		r.owner = addr (owner);
		r.target_chain = std::move (chain_id);
		EXPECT_TRUE (reg.register_asset (r));
		for (int i = 0; i < 8 && reg.find (r.key)->status != registry::EntryStatus::live; ++i)
			step ();
		return *reg.find (r.key)->contract_id;
	}

	Address owner_of (std::string_view chain_id, const Digest & id)
	{
		return *on (chain_id).contract (id).asset_owner ();
	}

	ContractMessage buy (const Identity & buyer, const Digest & car, const Address & current, Amount paid, std::uint64_t nonce)
	{
		auto & c = on ("btc");
		auto plan = chain::plan_funding (c, buyer, paid);
		EXPECT_TRUE (plan);
		if (plan->split)
		{
			EXPECT_TRUE (execute_category1 (c, *plan->split, tick));
		}
		return message (buyer, car, "", "Buy", { current }, paid, plan->funding, nonce);
	}

	std::uint64_t start (const SwapSpec & spec)
	{
		auto id = coord.start_swap (spec, tick);
		EXPECT_TRUE (id) << (id ? "" : id.error ().detail);
		return *id;
	}

	const SwapSession & run (std::uint64_t id)
	{
		for (int n = 0; n < 500 && !coord.session (id).terminal (); ++n)
			step ();
		return coord.session (id);
	}
};

SwapSpec car_for_eth (const Digest & car, FaultPlan faults = {})
{
	SwapSpec s;
	s.category = Category::asset_for_currency_cross;
	s.initiator = "alice";
	s.responder = "bob";
	s.initiator_leg = { "btc", AssetRef{ car }, 12 };
	s.responder_leg = { "eth", btc ("2"), 6 };
	s.faults = faults;
	return s;
}

SwapSpec car_for_boat (const Digest & car, const Digest & boat, FaultPlan faults = {})
{
	SwapSpec s;
	s.category = Category::asset_for_asset;
	s.initiator = "alice";
	s.responder = "bob";
	s.initiator_leg = { "btc", AssetRef{ car }, 12 };
	s.responder_leg = { "eth", AssetRef{ boat }, 6 };
	s.faults = faults;
	return s;
}

struct schedule
{
	FaultPlan faults;
	SessionStatus expected;
};

/// Every crash-at-step-k for both parties plus refusal to reveal, with the outcome each must reach.
std::vector<schedule> all_fault_schedules ()
{
	using enum SessionStatus;
	auto crash = [] (Role r, std::uint32_t k) { return FaultPlan{ r, k, std::nullopt, false }; };
	return {
		{ {}, completed },
		{ crash (Role::initiator, 1), refunded },
		{ crash (Role::initiator, 2), refunded },
		{ crash (Role::initiator, 3), refunded },
		{ crash (Role::initiator, 4), completed },
		{ crash (Role::responder, 1), refunded },
		{ crash (Role::responder, 2), refunded },
		{ crash (Role::responder, 3), completed },
		{ crash (Role::responder, 4), completed },
		{ { std::nullopt, 1, std::nullopt, true }, refunded },
	};
}
}

TEST (category1, transfers_through_the_chain)
{
	world w;
	auto & c = w.on ("btc");
	auto erin = party ("erin");
	auto pay = chain::make_payment (c, w.alice, addr (erin), btc ("0.4"));
	ASSERT_TRUE (pay);
	auto r = execute_category1 (c, *pay, w.tick);
	ASSERT_TRUE (r);
	EXPECT_EQ (r->height, 1u);
	EXPECT_EQ (c.balance (addr (erin)), btc ("0.4"));
	EXPECT_EQ (c.balance (addr (w.alice)), btc ("4.6"));

	ValueTransferTx empty;
	empty.inputs.push_back ({ genesis_output (c.config (), 1), {} });
	auto bad = execute_category1 (c, empty, w.tick);
	ASSERT_FALSE (bad);
	EXPECT_EQ (bad.error ().code, ValidationCode::malformed);

	auto self = transfer ({ { genesis_output (c.config (), 1), w.bob } }, { { btc ("1"), addr (w.bob) }, { btc ("19"), addr (w.bob) } });
	ASSERT_TRUE (execute_category1 (c, self, w.tick));
	EXPECT_EQ (c.balance (addr (w.bob)), btc ("20"));
	EXPECT_EQ (c.state ().utxo.outputs_of (addr (w.bob)).size (), 2u);
	EXPECT_FALSE (execute_category1 (c, self, w.tick));
}

TEST (category2, bob_buys_alices_car)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & c = w.on ("btc");
	auto co = w.reg.active_epoch ().multisig;

	auto r = execute_category2 (c, w.buy (w.bob, car, addr (w.alice), btc ("11"), 1), w.tick);
	ASSERT_TRUE (r);
	EXPECT_TRUE (r->succeeded ());
	EXPECT_EQ (c.balance (addr (w.alice)), btc ("14.9"));
	EXPECT_EQ (c.balance (co), btc ("1.1"));
	EXPECT_EQ (c.balance (addr (w.bob)), btc ("9"));
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.bob));
}

TEST (category2, underpayment_moves_nothing)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & c = w.on ("btc");
	auto r = execute_category2 (c, w.buy (w.bob, car, addr (w.alice), btc ("10.99"), 1), w.tick);
	ASSERT_TRUE (r);
	EXPECT_EQ (r->call_error, contract::CallError::price_too_low);
	EXPECT_EQ (c.balance (addr (w.alice)), btc ("5"));
	EXPECT_EQ (c.balance (addr (w.bob)), btc ("20"));
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.alice));
}

TEST (category2, interleaved_buyers_second_is_stale)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & c = w.on ("btc");
	auto first = w.buy (w.bob, car, addr (w.alice), btc ("11"), 1);
	auto second = w.buy (w.carol, car, addr (w.alice), btc ("12"), 2);
	ASSERT_TRUE (c.submit (first).accepted ());
	auto r = execute_category2 (c, second, w.tick);
	ASSERT_TRUE (r);
	EXPECT_EQ (r->call_error, contract::CallError::stale_owner);
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.bob));
	EXPECT_EQ (c.balance (addr (w.carol)), btc ("20"));
}

TEST (swap, category3_car_for_ether)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & s = w.run (w.start (car_for_eth (car)));
	EXPECT_EQ (s.status, SessionStatus::completed);
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.bob));
	EXPECT_EQ (w.on ("eth").balance (addr (w.alice)), btc ("7"));
	EXPECT_EQ (w.on ("eth").balance (addr (w.bob)), btc ("18"));
	EXPECT_TRUE (*s.atomic);
	EXPECT_TRUE (audit_atomicity (s, s.pre, *s.post));

	std::vector<std::string> actions;
	for (auto const & e : w.coord.transcript ())
		if (e.outcome == "ok")
			actions.push_back (e.chain + ":" + e.action);
	std::vector<std::string> expected{ "btc:lock", "eth:lock", "eth:claim", "btc:claim" };
	EXPECT_EQ (actions, expected);
}

TEST (swap, category4_car_for_boat)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto boat = w.register_car ("B1", w.bob, "eth");
	auto & s = w.run (w.start (car_for_boat (car, boat)));
	EXPECT_EQ (s.status, SessionStatus::completed);
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.bob));
	EXPECT_EQ (w.owner_of ("eth", boat), addr (w.alice));
	EXPECT_TRUE (*s.atomic);
}

TEST (swap, intra_chain_asset_for_asset)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto boat = w.register_car ("B1", w.bob, "btc");
	auto spec = car_for_boat (car, boat);
	spec.responder_leg.chain_id = "btc";
	auto & s = w.run (w.start (spec));
	EXPECT_EQ (s.status, SessionStatus::completed);
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.bob));
	EXPECT_EQ (w.owner_of ("btc", boat), addr (w.alice));
}

TEST (swap, timeout_ordering_rejected_at_setup)
{
	world w ({}, 2);
	auto car = w.register_car ("V1", w.alice, "btc");
	auto spec = car_for_eth (car);
	spec.initiator_leg.timeout_blocks = 15;
	spec.responder_leg.timeout_blocks = 6;
	auto r = w.coord.start_swap (spec, w.tick);
	ASSERT_FALSE (r);
	EXPECT_EQ (r.error ().code, SwapErrorCode::config_error);
	spec.initiator_leg.timeout_blocks = 16;
	EXPECT_TRUE (w.coord.start_swap (spec, w.tick));

	spec.initiator_leg.timeout_blocks = 6;
	spec.responder_leg.timeout_blocks = 6;
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::config_error);
	EXPECT_TRUE (w.coord.transcript ().size () == 1);
}

TEST (swap, setup_errors)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto spec = car_for_eth (car);
	spec.responder = "nobody";
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::unknown_party);
	spec = car_for_eth (car);
	spec.responder_leg.chain_id = "ltc";
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::unknown_chain);
	spec = car_for_eth (car);
	spec.responder_leg.item = btc ("21");
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::bad_item);
	spec = car_for_eth (car);
	std::swap (spec.initiator, spec.responder);
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::bad_item);
	spec = car_for_eth (car);
	spec.responder_leg.chain_id = "btc";
	EXPECT_EQ (w.coord.start_swap (spec, w.tick).error ().code, SwapErrorCode::config_error);
}

TEST (swap, responder_never_locks)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto btc_before = w.on ("btc").state ().holdings_digest ();
	auto eth_before = w.on ("eth").state ().holdings_digest ();
	auto & s = w.run (w.start (car_for_eth (car, { Role::responder, 2, std::nullopt, false })));
	EXPECT_EQ (s.status, SessionStatus::refunded);
	EXPECT_TRUE (*s.atomic);
	EXPECT_EQ (*s.post, s.pre);
	EXPECT_EQ (w.on ("btc").state ().holdings_digest (), btc_before);
	EXPECT_EQ (w.on ("eth").state ().holdings_digest (), eth_before);
	EXPECT_EQ (w.owner_of ("btc", car), addr (w.alice));
}

TEST (swap, refusal_to_reveal_refunds_both)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & s = w.run (w.start (car_for_eth (car, { std::nullopt, 1, std::nullopt, true })));
	EXPECT_EQ (s.status, SessionStatus::refunded);
	EXPECT_EQ (s.legs[0].status, LegStatus::refunded);
	EXPECT_EQ (s.legs[1].status, LegStatus::refunded);
	EXPECT_TRUE (*s.atomic);
	EXPECT_EQ (w.on ("eth").balance (addr (w.bob)), btc ("20"));
}

TEST (swap, watchtower_completes_for_crashed_responder)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & s = w.run (w.start (car_for_eth (car, { Role::responder, 4, std::nullopt, false })));
	EXPECT_EQ (s.status, SessionStatus::completed);
	EXPECT_TRUE (*s.atomic);
	bool watched = false;
	for (auto const & e : w.coord.transcript ())
		watched |= e.action == "claim (watchtower)" && e.outcome == "ok";
	EXPECT_TRUE (watched);
}

TEST (swap, no_watchtower_breaks_atomicity)
{
	CoordinatorConfig cc;
	cc.watchtower = false;
	world w (cc);
	auto car = w.register_car ("V1", w.alice, "btc");
	auto & s = w.run (w.start (car_for_eth (car, { Role::responder, 4, std::nullopt, false })));
	EXPECT_EQ (s.status, SessionStatus::failed);
	EXPECT_FALSE (*s.atomic);
}

TEST (swap, audit_rejects_half_swap_fixture)
{
	SwapSession s;
	auto alice = addr (party ("alice"));
	auto bob = addr (party ("bob"));
	Digest car = sha256 (std::string_view ("car"));
	SwapLeg a;
	a.chain_id = "btc";
	a.locker = alice;
	a.beneficiary = bob;
	a.item = AssetRef{ car };
	SwapLeg b;
	b.chain_id = "eth";
	b.locker = bob;
	b.beneficiary = alice;
	b.item = btc ("2");
	s.legs = { a, b };
	Holdings pre;
	pre.chains["btc"].asset_owners[car] = alice;
	pre.chains["btc"].balances = { { alice, btc ("1") }, { bob, btc ("1") } };
	pre.chains["eth"].balances = { { alice, btc ("0") }, { bob, btc ("3") } };

	auto done = exchanged (s, pre);
	EXPECT_EQ (done.chains["btc"].asset_owners[car], bob);
	EXPECT_EQ (done.chains["eth"].balances[alice], btc ("2"));
	EXPECT_TRUE (audit_atomicity (s, pre, done));
	EXPECT_TRUE (audit_atomicity (s, pre, pre));

	auto half = pre;
	half.chains["btc"].asset_owners[car] = bob;
	EXPECT_FALSE (audit_atomicity (s, pre, half));
	auto other_half = pre;
	other_half.chains["eth"].balances[alice] = btc ("2");
	other_half.chains["eth"].balances[bob] = btc ("1");
	EXPECT_FALSE (audit_atomicity (s, pre, other_half));
	auto leak = done;
	leak.chains["eth"].balances[bob] = btc ("0.5");
	EXPECT_FALSE (audit_atomicity (s, pre, leak));
	EXPECT_NE (pre.digest (), done.digest ());
}

TEST (swap, every_fault_schedule_is_atomic)
{
	auto started = std::chrono::steady_clock::now ();
	std::size_t runs = 0;
	for (bool asset_for_asset : { false, true })
	{
		for (auto const & [faults, expected] : all_fault_schedules ())
		{
			world w;
			auto car = w.register_car ("V1", w.alice, "btc");
			auto boat = w.register_car ("B1", w.bob, "eth");
			auto spec = asset_for_asset ? car_for_boat (car, boat, faults) : car_for_eth (car, faults);
			auto & s = w.run (w.start (spec));
			ASSERT_TRUE (s.terminal ());
			EXPECT_TRUE (*s.atomic) << "crash " << (faults.crashed ? to_string (*faults.crashed) : "none") << " step " << faults.crash_step << " refuse " << faults.refuse_reveal;
			EXPECT_EQ (s.status, expected) << "crash step " << faults.crash_step;
			++runs;
		}
	}
	EXPECT_EQ (runs, 2 * (2 * protocol_steps + 2));
	EXPECT_LT (std::chrono::steady_clock::now () - started, std::chrono::seconds (10));
}

TEST (swap, crash_with_early_recovery_is_atomic)
{
	for (std::uint32_t k = 1; k <= protocol_steps; ++k)
	{
		for (auto role : { Role::initiator, Role::responder })
		{
			world w;
			auto car = w.register_car ("V1", w.alice, "btc");
			auto & s = w.run (w.start (car_for_eth (car, { role, k, w.tick + 2, false })));
			ASSERT_TRUE (s.terminal ());
			EXPECT_TRUE (*s.atomic) << to_string (role) << " step " << k;
		}
	}
}

TEST (swap, concurrent_sessions_are_isolated)
{
	world w;
	w.coord.add_party ("carol", w.carol);
	w.coord.add_party ("dave", w.dave);
	auto car = w.register_car ("V1", w.alice, "btc");
	auto boat = w.register_car ("B1", w.carol, "btc");
	auto first = w.start (car_for_eth (car));
	auto spec = car_for_eth (boat, { std::nullopt, 1, std::nullopt, true });
	spec.initiator = "carol";
	spec.responder = "dave";
	auto second = w.start (spec);
	w.run (first);
	w.run (second);
	EXPECT_EQ (w.coord.session (first).status, SessionStatus::completed);
	EXPECT_EQ (w.coord.session (second).status, SessionStatus::refunded);
	EXPECT_TRUE (*w.coord.session (first).atomic);
	EXPECT_TRUE (*w.coord.session (second).atomic);
	EXPECT_EQ (w.owner_of ("btc", boat), addr (w.carol));
}

TEST (swap, run_cross_chain_swap_drives_chains)
{
	world w;
	auto car = w.register_car ("V1", w.alice, "btc");
	auto r = w.coord.run_cross_chain_swap (car_for_eth (car), w.tick);
	ASSERT_TRUE (r);
	EXPECT_EQ (*r, SessionStatus::completed);
	auto bad = car_for_eth (car);
	bad.responder_leg.timeout_blocks = 20;
	EXPECT_FALSE (w.coord.run_cross_chain_swap (bad, w.tick));
}
