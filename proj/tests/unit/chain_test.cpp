#include "../support/fixtures.hpp"

#include <assetsim/core/error.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace assetsim;
using namespace assetsim::chain;
using namespace assetsim::test;

namespace {
struct merge_split_chain
{
	Identity q = party ("addr_Q");
	Identity p = party ("addr_P");
	Identity x = party ("addr_X");
	ChainConfig cfg = config ("btc", { { btc ("0.4"), addr (q) }, { btc ("1.1"), addr (p) } });

	ValueTransferTx a () const { return transfer ({ { genesis_output (cfg, 0), q } }, { { btc ("0.4"), addr (x) } }); }
	ValueTransferTx b () const { return transfer ({ { genesis_output (cfg, 1), p } }, { { btc ("0.8"), addr (party ("addr_R")) }, { btc ("0.3"), addr (x) } }); }
	ValueTransferTx c () const
	{
		return transfer ({ { { a ().id (), 0 }, x }, { { b ().id (), 1 }, x } }, { { btc ("0.5"), addr (party ("addr_Y")) }, { btc ("0.2"), addr (party ("addr_Z")) } });
	}
};
}

TEST (chain, blocks_every_interval)
{
	Chain c (config ("c", { { btc ("1"), addr (party ("a")) } }, 5, 2));
	std::vector<std::uint64_t> heights;
	for (std::uint64_t t = 0; t <= 6; ++t)
		if (auto b = c.produce_block (t))
			heights.push_back (b->block.height);
	EXPECT_EQ (heights, (std::vector<std::uint64_t>{ 1, 2, 3 }));
}

TEST (chain, merge_split_through_mempool)
{
	merge_split_chain f;
	Chain c (f.cfg);
	for (auto const & tx : { f.a (), f.b (), f.c () })
		EXPECT_TRUE (c.submit (tx).accepted ());
	EXPECT_EQ (c.mempool ().size (), 3u);
	std::uint64_t tick = 0;
	auto produced = mine (c, tick);
	EXPECT_EQ (produced.block.items.size (), 3u);
	EXPECT_TRUE (produced.evictions.empty ());
	EXPECT_EQ (c.balance (addr (party ("addr_Y"))), btc ("0.5"));
	EXPECT_EQ (c.balance (addr (party ("addr_Z"))), btc ("0.2"));
	EXPECT_TRUE (c.balance (addr (f.x)).is_zero ());
}

TEST (chain, conflicting_spend_is_evicted)
{
	merge_split_chain f;
	Chain c (f.cfg);
	auto first = f.a ();
	auto second = transfer ({ { genesis_output (f.cfg, 0), f.q } }, { { btc ("0.4"), addr (f.q) } });
	ASSERT_TRUE (c.submit (first).accepted ());
	ASSERT_TRUE (c.submit (second).accepted ());
	std::uint64_t tick = 0;
	auto produced = mine (c, tick);
	ASSERT_EQ (produced.block.items.size (), 1u);
	EXPECT_EQ (item_id (produced.block.items[0]), first.id ());
	ASSERT_EQ (produced.evictions.size (), 1u);
	EXPECT_EQ (produced.evictions[0].error.code, ValidationCode::double_spend);
	EXPECT_TRUE (c.find_eviction (second.id ()));
}

TEST (chain, submit_rejections)
{
	merge_split_chain f;
	Chain c (f.cfg);
	Bytes garbage{ 1, 2, 3 };
	EXPECT_EQ (c.submit_bytes (garbage).status, SubmitStatus::malformed);
	EXPECT_TRUE (c.submit_bytes (serialize_item (BlockItem{ f.a () })).accepted ());
	EXPECT_EQ (c.submit (f.a ()).status, SubmitStatus::duplicate);
	EXPECT_EQ (c.submit (ValueTransferTx{}).status, SubmitStatus::malformed);
	EXPECT_EQ (c.submit (Coinbase{ "btc", 1, {} }).status, SubmitStatus::malformed);
	std::uint64_t tick = 0;
	mine (c, tick);
	EXPECT_EQ (c.submit (f.a ()).status, SubmitStatus::duplicate);
}

TEST (chain, choose_fork_rule)
{
	auto h = [] (std::uint8_t v) {
		Digest d;
		d.bytes[0] = v;
		return d;
	};
	std::vector<TipCandidate> two{ { 4, h (1) }, { 5, h (9) } };
	EXPECT_EQ (choose_fork (two).height, 5u);
	std::vector<TipCandidate> tie{ { 5, h (9) }, { 5, h (2) } };
	EXPECT_EQ (choose_fork (tie).hash, h (2));
	std::vector<TipCandidate> one{ { 3, h (3) } };
	EXPECT_EQ (choose_fork (one), one[0]);
}

TEST (chain, queries)
{
	merge_split_chain f;
	Chain c (f.cfg);
	EXPECT_THROW (c.contract (sha256 ("nope")), NotFound);
	EXPECT_THROW (c.block_at (3), NotFound);
	EXPECT_EQ (c.block_at (0).height, 0u);
	EXPECT_EQ (c.balance (addr (f.p)), btc ("1.1"));
}

TEST (chain, contract_message_lifecycle)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto cfg = config ("eth", { { btc ("20"), addr (bob) } });
	Chain c (cfg);
	std::uint64_t tick = 0;
	ASSERT_TRUE (c.submit (message (alice, std::nullopt, "Car", "constructor", { std::string ("T"), std::string ("S"), std::uint64_t{ 2020 }, btc ("10") })).accepted ());
	auto deployed = mine (c, tick);
	ASSERT_EQ (deployed.receipts.size (), 1u);
	ASSERT_TRUE (deployed.receipts[0].succeeded ());
	auto id = *deployed.receipts[0].contract_id;

	auto plan = plan_funding (c, bob, btc ("10"));
	ASSERT_TRUE (plan);
	ASSERT_TRUE (plan->split);
	ASSERT_TRUE (c.submit (*plan->split).accepted ());
	auto buy = message (bob, id, "", "Buy", { addr (alice) }, btc ("10"), plan->funding);
	ASSERT_TRUE (c.submit (buy).accepted ());
	auto bought = mine (c, tick);
	ASSERT_EQ (bought.receipts.size (), 2u);
	EXPECT_TRUE (bought.receipts[1].succeeded ());
	EXPECT_EQ (c.contract (id).asset_owner (), addr (bob));
	EXPECT_EQ (c.balance (addr (alice)), btc ("10"));
	EXPECT_EQ (c.balance (addr (bob)), btc ("10"));
	EXPECT_EQ (c.state ().total_value (), btc ("20"));

	// A second buy still naming alice fails and is refunded in full.
	auto plan2 = plan_funding (c, bob, btc ("10"));
	ASSERT_TRUE (plan2);
	EXPECT_FALSE (plan2->split);
	ASSERT_TRUE (c.submit (message (bob, id, "", "Buy", { addr (alice) }, btc ("10"), plan2->funding)).accepted ());
	auto stale = mine (c, tick);
	ASSERT_EQ (stale.receipts.size (), 1u);
	EXPECT_EQ (stale.receipts[0].call_error, contract::CallError::stale_owner);
	EXPECT_EQ (c.balance (addr (bob)), btc ("10"));
}

TEST (chain, message_validation)
{
	auto alice = party ("alice");
	auto cfg = config ("eth", { { btc ("5"), addr (alice) } });
	Chain c (cfg);
	auto g0 = genesis_output (cfg, 0);

	auto unknown = message (alice, sha256 ("missing"), "", "Buy", { addr (alice) });
	EXPECT_EQ (validate_item (unknown, c.state ())->code, ValidationCode::unknown_contract);

	auto short_funding = message (alice, std::nullopt, "HtlcLockbox", "constructor", { sha256 ("h"), std::uint64_t{ 9 } }, btc ("6"), { g0 });
	EXPECT_EQ (validate_item (short_funding, c.state ())->code, ValidationCode::value_mismatch);

	auto not_mine = message (party ("mallory"), std::nullopt, "HtlcLockbox", "constructor", { sha256 ("h"), std::uint64_t{ 9 } }, btc ("5"), { g0 });
	EXPECT_EQ (validate_item (not_mine, c.state ())->code, ValidationCode::bad_signature);

	auto forged = message (alice, std::nullopt, "HtlcLockbox", "constructor", { sha256 ("h"), std::uint64_t{ 9 } }, btc ("5"), { g0 });
	forged.nonce = 99;
	EXPECT_EQ (validate_item (forged, c.state ())->code, ValidationCode::bad_signature);

	auto twice = message (alice, std::nullopt, "HtlcLockbox", "constructor", { sha256 ("h"), std::uint64_t{ 9 } }, btc ("5"), { g0, g0 });
	EXPECT_EQ (validate_item (twice, c.state ())->code, ValidationCode::double_spend);

	auto zero = message (alice, std::nullopt, "Car", "constructor", { std::string ("T"), std::string ("S"), std::uint64_t{ 1 }, btc ("1") });
	ASSERT_TRUE (c.submit (zero).accepted ());
	std::uint64_t tick = 0;
	mine (c, tick);
	EXPECT_EQ (validate_item (zero, c.state ())->code, ValidationCode::double_spend);
}

TEST (chain, throughput_ceiling)
{
	auto alice = party ("alice");
	std::vector<TxOutput> genesis (50, TxOutput{ btc ("1"), addr (alice) });
	auto cfg = config ("c", genesis, 7, 3);
	Chain c (cfg);
	for (std::uint32_t i = 0; i < 50; ++i)
		ASSERT_TRUE (c.submit (transfer ({ { genesis_output (cfg, i), alice } }, { { btc ("1"), addr (alice) } })).accepted ());
	std::uint64_t included = 0;
	for (std::uint64_t t = 0; t < 20; ++t)
		if (auto b = c.produce_block (t))
			included += b->block.items.size ();
	EXPECT_EQ (included, 6u * 7u);
	EXPECT_LE (included, ((20 + 2) / 3) * 7u);
}

TEST (chain, replay_equivalence_and_determinism)
{
	std::mt19937_64 rng (3);
	std::vector<Identity> people;
	std::vector<TxOutput> genesis;
	for (int i = 0; i < 5; ++i)
	{
		people.push_back (party ("r" + std::to_string (i)));
		genesis.push_back ({ btc ("3"), addr (people.back ()) });
	}
	auto cfg = config ("r", genesis, 4);
	cfg.mining_reward = btc ("0.5");
	cfg.miners = { addr (people[0]), addr (people[1]) };
	Chain c1 (cfg);
	Chain c2 (cfg);
	std::uint64_t tick = 0;
	for (int round = 0; round < 30; ++round)
	{
		for (int k = 0; k < 3; ++k)
		{
			auto & from = people[rng () % people.size ()];
			auto & to = people[rng () % people.size ()];
			auto pay = make_payment (c1, from, addr (to), Amount{ 1 + rng () % 100'000'000 });
			if (pay)
			{
				c1.submit (*pay);
				c2.submit (*pay);
			}
		}
		++tick;
		c1.produce_block (tick);
		c2.produce_block (tick);
		EXPECT_EQ (c1.state ().total_value (), c1.state ().minted);
	}
	EXPECT_EQ (c1.state (), c2.state ());
	EXPECT_EQ (c1.state ().digest (), c2.state ().digest ());
	auto rebuilt = replay (cfg, c1.blocks ());
	EXPECT_EQ (rebuilt, c1.state ());
	EXPECT_EQ (c1.state ().minted, btc ("15") + Amount{ btc ("0.5").units () * 30 });
}

TEST (chain, import_block_reorganizes)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto cfg = config ("f", { { btc ("1"), addr (alice) }, { btc ("1"), addr (bob) } });
	Chain c (cfg);
	auto pay_bob = transfer ({ { genesis_output (cfg, 0), alice } }, { { btc ("1"), addr (bob) } });
	c.submit (pay_bob);
	std::uint64_t tick = 0;
	mine (c, tick);
	ASSERT_EQ (c.balance (addr (bob)), btc ("2"));

	// Competing branch from genesis: alice pays herself, two blocks long.
	auto miner = cfg.effective_miners ().front ();
	Block b1{ 1, c.block_at (0).hash (), miner, 1, { transfer ({ { genesis_output (cfg, 0), alice } }, { { btc ("1"), addr (alice) } }) } };
	Block b2{ 2, b1.hash (), miner, 2, {} };
	c.import_block (b1);
	EXPECT_EQ (c.height (), 1u);
	c.import_block (b2);
	EXPECT_EQ (c.height (), 2u);
	EXPECT_EQ (c.balance (addr (alice)), btc ("1"));
	EXPECT_EQ (c.balance (addr (bob)), btc ("1"));
	EXPECT_EQ (c.state (), replay (cfg, c.blocks ()));
	// The orphaned payment conflicts with the new branch and is evicted on the next block.
	ASSERT_EQ (c.mempool ().size (), 1u);
	auto next = mine (c, tick);
	EXPECT_EQ (next.evictions.size (), 1u);

	Block bad{ 3, c.state ().tip, miner, 3, { pay_bob } };
	EXPECT_THROW (c.import_block (bad), InvalidBlock);
	Block orphan{ 9, sha256 ("nowhere"), miner, 9, {} };
	EXPECT_THROW (c.import_block (orphan), InvalidBlock);
}

TEST (chain, config_validation)
{
	auto c = config ("x", {});
	c.max_tx_per_block = 0;
	EXPECT_THROW (Chain{ c }, std::invalid_argument);
	c = config ("x", {});
	c.block_interval_ticks = 0;
	EXPECT_THROW (Chain{ c }, std::invalid_argument);
}

TEST (wallet, skips_pending_outputs)
{
	auto alice = party ("alice");
	auto cfg = config ("w", { { btc ("1"), addr (alice) }, { btc ("2"), addr (alice) } });
	Chain c (cfg);
	auto first = plan_funding (c, alice, btc ("1"));
	ASSERT_TRUE (first);
	EXPECT_FALSE (first->split);
	ASSERT_EQ (first->funding.size (), 1u);
	ASSERT_TRUE (c.submit (message (alice, std::nullopt, "HtlcLockbox", "constructor", { sha256 ("h"), std::uint64_t{ 5 } }, btc ("1"), first->funding)).accepted ());
	auto second = plan_funding (c, alice, btc ("1"));
	ASSERT_TRUE (second);
	ASSERT_TRUE (second->split);
	EXPECT_EQ (second->split->inputs[0].prevout, genesis_output (cfg, 1));
	EXPECT_FALSE (plan_funding (c, alice, btc ("5")));
}
