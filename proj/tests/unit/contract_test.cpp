#include "../support/fixtures.hpp"
#include "../support/oracle.hpp"

#include <assetsim/contract/engine.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace assetsim;
using namespace assetsim::contract;
using namespace assetsim::test;

namespace {
ChainContext ctx (std::uint64_t height = 1)
{
	return { "test", height };
}

struct validators
{
	std::vector<Identity> keys;
	Address multisig;

	validators (std::uint64_t epoch, std::uint32_t m = 3)
	{
		std::vector<PublicKey> pub;
		for (int i = 0; i < 4; ++i)
		{
			keys.push_back (party ("epoch" + std::to_string (epoch) + ":v" + std::to_string (i)));
			pub.push_back (keys.back ().public_key ());
		}
		multisig = derive_multisig_address ({ m, pub, epoch });
	}

	ContractMessage sign (ContractMessage msg, std::size_t count) const
	{
		msg.sender = multisig;
		msg.sign (std::vector<Identity> (keys.begin (), keys.begin () + static_cast<long> (count)));
		return msg;
	}
};

ContractMessage unsigned_msg (const Address & sender, std::optional<Digest> target, std::string cls, std::string fn, std::vector<Value> args, Amount value = {})
{
	ContractMessage m;
	m.sender = sender;
	m.target = target;
	m.contract_class = std::move (cls);
	m.function = std::move (fn);
	m.args = std::move (args);
	m.value = value;
	return m;
}

ContractInstance deploy_car (const Identity & owner, Amount price)
{
	auto r = deploy (message (owner, std::nullopt, "Car", "constructor", { std::string ("Tesla"), std::string ("S"), std::uint64_t{ 2020 }, price }), ctx ());
	EXPECT_TRUE (r.ok ());
	return *r.instance;
}

ContractInstance deploy_authcar (const validators & v, const Address & owner, Amount price, std::uint64_t tp)
{
	auto msg = v.sign (unsigned_msg ({}, std::nullopt, "AuthCar", "constructor", { std::string ("Tesla"), std::string ("S"), std::uint64_t{ 2020 }, price, tp, owner }), 3);
	auto r = deploy (msg, ctx ());
	EXPECT_TRUE (r.ok ()) << (r.error ? to_string (*r.error) : "");
	return *r.instance;
}

Amount paid_to (const ExecutionEffect & e, const Address & who)
{
	Amount total;
	for (auto const & p : e.payouts)
		if (p.recipient == who)
			total += p.amount;
	return total;
}

ContractMessage buy (const Identity & buyer, const ContractInstance & car, const Address & cur, Amount val)
{
	return message (buyer, car.id, "", "Buy", { cur }, val);
}
}

TEST (car, deploy_sets_owner_from_sender)
{
	auto alice = party ("alice");
	auto car = deploy_car (alice, btc ("10"));
	EXPECT_EQ (car.asset_owner (), addr (alice));
	EXPECT_TRUE (car.locked_balance.is_zero ());
	auto vars = car.state_vars ();
	EXPECT_EQ (std::get<Amount> (vars.at ("price")), btc ("10"));
	EXPECT_EQ (std::get<std::string> (vars.at ("make")), "Tesla");
}

TEST (car, deploy_arity_and_types)
{
	auto alice = party ("alice");
	auto r = deploy (message (alice, std::nullopt, "Car", "constructor", { std::string ("Tesla") }), ctx ());
	EXPECT_EQ (r.error, CallError::arity_mismatch);
	r = deploy (message (alice, std::nullopt, "Car", "constructor", { std::string ("Tesla"), std::string ("S"), std::string ("2020"), btc ("1") }), ctx ());
	EXPECT_EQ (r.error, CallError::bad_argument);
	r = deploy (message (alice, std::nullopt, "Boat", "constructor", {}), ctx ());
	EXPECT_EQ (r.error, CallError::unknown_class);
}

TEST (car, buy_pays_owner_and_moves_ownership)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto car = deploy_car (alice, btc ("10"));
	auto r = car_buy (car, buy (bob, car, addr (alice), btc ("10")), addr (alice));
	ASSERT_TRUE (r.ok ());
	EXPECT_EQ (paid_to (r.effect, addr (alice)), btc ("10"));
	EXPECT_EQ (r.instance->asset_owner (), addr (bob));
	EXPECT_EQ (r.effect.ownership_change, addr (bob));
	EXPECT_TRUE (r.instance->locked_balance.is_zero ());
}

TEST (car, concurrent_buys_with_same_cur_owner)
{
	auto alice = party ("alice");
	auto car = deploy_car (alice, btc ("10"));
	auto first = execute (car, buy (party ("bob"), car, addr (alice), btc ("10")), ctx ());
	ASSERT_TRUE (first.ok ());
	auto carol = party ("carol");
	auto second = execute (*first.instance, buy (carol, car, addr (alice), btc ("10")), ctx ());
	EXPECT_EQ (second.error, CallError::stale_owner);
	EXPECT_EQ (*second.instance, *first.instance);
	ASSERT_EQ (second.effect.payouts.size (), 1u);
	EXPECT_EQ (second.effect.payouts[0].recipient, addr (carol));
	EXPECT_EQ (second.effect.payouts[0].amount, btc ("10"));
}

TEST (car, one_unit_short_is_refunded)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto car = deploy_car (alice, btc ("10"));
	auto r = execute (car, buy (bob, car, addr (alice), btc ("10") - Amount{ 1 }), ctx ());
	EXPECT_EQ (r.error, CallError::price_too_low);
	EXPECT_EQ (*r.instance, car);
	EXPECT_EQ (paid_to (r.effect, addr (bob)), btc ("10") - Amount{ 1 });
	EXPECT_FALSE (r.effect.ownership_change);
}

TEST (car, update_price)
{
	auto alice = party ("alice");
	auto car = deploy_car (alice, btc ("10"));
	auto r = execute (car, message (alice, car.id, "", "UpdatePrice", { btc ("12") }), ctx ());
	ASSERT_TRUE (r.ok ());
	EXPECT_EQ (std::get<CarState> (r.instance->state).price, btc ("12"));
	r = execute (car, message (party ("mallory"), car.id, "", "UpdatePrice", { btc ("1") }), ctx ());
	EXPECT_EQ (r.error, CallError::not_owner);
	EXPECT_EQ (*r.instance, car);
	r = execute (car, message (alice, car.id, "", "UpdatePrice", { Amount{} }), ctx ());
	ASSERT_TRUE (r.ok ());
	EXPECT_TRUE (std::get<CarState> (r.instance->state).price.is_zero ());
}

TEST (car, unknown_function)
{
	auto alice = party ("alice");
	auto car = deploy_car (alice, btc ("10"));
	EXPECT_EQ (execute (car, message (alice, car.id, "", "DestroyContract", {}), ctx ()).error, CallError::unknown_function);
	EXPECT_EQ (execute (car, message (alice, car.id, "", "Buy", {}), ctx ()).error, CallError::arity_mismatch);
}

TEST (authcar, deploy_requires_multisig_sender)
{
	validators v (0);
	auto alice = party ("alice");
	auto car = deploy_authcar (v, addr (alice), btc ("10"), 10);
	auto const & s = std::get<AuthCarState> (car.state);
	EXPECT_EQ (s.contract_owner, v.multisig);
	EXPECT_EQ (s.owner, addr (alice));

	auto weak = v.sign (unsigned_msg ({}, std::nullopt, "AuthCar", "constructor", { std::string ("T"), std::string ("S"), std::uint64_t{ 1 }, btc ("1"), std::uint64_t{ 10 }, addr (alice) }), 2);
	EXPECT_EQ (deploy (weak, ctx ()).error, CallError::bad_multisig);
	auto by_user = message (alice, std::nullopt, "AuthCar", "constructor", { std::string ("T"), std::string ("S"), std::uint64_t{ 1 }, btc ("1"), std::uint64_t{ 10 }, addr (alice) });
	EXPECT_EQ (deploy (by_user, ctx ()).error, CallError::bad_multisig);
	auto high_tax = v.sign (unsigned_msg ({}, std::nullopt, "AuthCar", "constructor", { std::string ("T"), std::string ("S"), std::uint64_t{ 1 }, btc ("1"), std::uint64_t{ 101 }, addr (alice) }), 3);
	EXPECT_EQ (deploy (high_tax, ctx ()).error, CallError::bad_argument);
}

TEST (authcar, buy_splits_tax)
{
	validators v (0);
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto car = deploy_authcar (v, addr (alice), btc ("10"), 10);
	auto r = execute (car, buy (bob, car, addr (alice), btc ("11")), ctx ());
	ASSERT_TRUE (r.ok ());
	EXPECT_EQ (paid_to (r.effect, addr (alice)), btc ("9.9"));
	EXPECT_EQ (paid_to (r.effect, v.multisig), btc ("1.1"));
	EXPECT_EQ (r.instance->asset_owner (), addr (bob));
	EXPECT_TRUE (r.instance->locked_balance.is_zero ());
}

TEST (authcar, zero_tax_and_threshold)
{
	validators v (0);
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto free = deploy_authcar (v, addr (alice), btc ("10"), 0);
	auto r = execute (free, buy (bob, free, addr (alice), btc ("10")), ctx ());
	ASSERT_TRUE (r.ok ());
	EXPECT_EQ (paid_to (r.effect, addr (alice)), btc ("10"));
	EXPECT_TRUE (paid_to (r.effect, v.multisig).is_zero ());

	auto taxed = deploy_authcar (v, addr (alice), btc ("10"), 10);
	r = execute (taxed, buy (bob, taxed, addr (alice), btc ("10.9")), ctx ());
	EXPECT_EQ (r.error, CallError::price_too_low);
	r = execute (taxed, buy (bob, taxed, addr (alice), btc ("11") - Amount{ 1 }), ctx ());
	EXPECT_EQ (r.error, CallError::price_too_low);
}

TEST (authcar, tax_matches_oracle_on_frozen_triples)
{
	struct row
	{
		std::uint64_t price, tp, paid;
		bool ok;
		std::uint64_t tax, owner;
	};
	// Generated with an exact big-integer reference and frozen.
	const row rows[] = {
		{ 24785864185, 33, 33161469943, true, 10943285081, 22218184862 },
		{ 1437339342, 29, 1854167752, true, 537708648, 1316459104 },
		{ 3712920510, 52, 5643639176, true, 2934692371, 2708946805 },
		{ 5075262690, 3, 5227520567, false, 0, 0 },
		{ 18188812345, 38, 25100561037, true, 9538213194, 15562347843 },
		{ 40640221409, 87, 76198220320, true, 66292451678, 9905768642 },
		{ 3053083405, 95, 6152353390, true, 5844735720, 307617670 },
		{ 14504432992, 27, 18420628942, false, 0, 0 },
		{ 44790680761, 7, 48283482465, true, 3379843772, 44903638693 },
		{ 21604704797, 89, 40832892067, true, 36341273939, 4491618128 },
	};
	validators v (0);
	auto alice = party ("alice");
	auto bob = party ("bob");
	for (auto const & x : rows)
	{
		ASSERT_EQ (oracle::price_met (x.paid, x.price, x.tp), x.ok);
		if (x.ok)
		{
			ASSERT_EQ (oracle::tax (x.paid, x.tp), x.tax);
		}
		auto car = deploy_authcar (v, addr (alice), Amount{ x.price }, x.tp);
		auto r = execute (car, buy (bob, car, addr (alice), Amount{ x.paid }), ctx ());
		EXPECT_EQ (r.ok (), x.ok);
		if (!x.ok)
			continue;
		EXPECT_EQ (paid_to (r.effect, v.multisig).units (), x.tax);
		EXPECT_EQ (paid_to (r.effect, addr (alice)).units (), x.owner);
		EXPECT_EQ (tax_due (Amount{ x.paid }, x.tp).units (), x.tax);
	}
}

TEST (authcar, tax_conservation_property)
{
	std::mt19937_64 rng (11);
	validators v (0);
	auto alice = party ("alice");
	auto bob = party ("bob");
	for (int i = 0; i < 300; ++i)
	{
		std::uint64_t price = rng () % 100'000'000'000ull;
		std::uint64_t tp = rng () % 101;
		std::uint64_t paid = rng () % 300'000'000'000ull;
		auto car = deploy_authcar (v, addr (alice), Amount{ price }, tp);
		auto r = execute (car, buy (bob, car, addr (alice), Amount{ paid }), ctx ());
		ASSERT_EQ (r.ok (), oracle::price_met (paid, price, tp));
		ASSERT_EQ (r.effect.total_paid ().units (), paid);
		if (r.ok ())
		{
			EXPECT_EQ (paid_to (r.effect, v.multisig).units (), oracle::tax (paid, tp));
			EXPECT_EQ (paid_to (r.effect, addr (alice)).units () + paid_to (r.effect, v.multisig).units (), paid);
		}
		else
		{
			EXPECT_EQ (*r.instance, car);
		}
	}
}

TEST (authcar, update_contract_owner_and_destroy)
{
	validators v0 (0);
	validators v1 (1);
	auto alice = party ("alice");
	auto car = deploy_authcar (v0, addr (alice), btc ("10"), 10);

	auto short_witness = v0.sign (unsigned_msg ({}, car.id, "", "UpdateContractOwner", { v1.multisig }), 2);
	EXPECT_EQ (execute (car, short_witness, ctx ()).error, CallError::bad_multisig);

	auto rotate = v0.sign (unsigned_msg ({}, car.id, "", "UpdateContractOwner", { v1.multisig }), 3);
	auto r = execute (car, rotate, ctx ());
	ASSERT_TRUE (r.ok ());
	car = *r.instance;
	EXPECT_EQ (std::get<AuthCarState> (car.state).contract_owner, v1.multisig);

	auto stale = v0.sign (unsigned_msg ({}, car.id, "", "DestroyContract", {}), 4);
	EXPECT_EQ (execute (car, stale, ctx ()).error, CallError::bad_multisig);

	auto kill = v1.sign (unsigned_msg ({}, car.id, "", "DestroyContract", {}), 3);
	r = execute (car, kill, ctx ());
	ASSERT_TRUE (r.ok ());
	EXPECT_TRUE (r.effect.destroyed);
	EXPECT_TRUE (r.effect.payouts.empty ());
	EXPECT_FALSE (r.instance->live ());

	auto bob = party ("bob");
	auto after = execute (*r.instance, buy (bob, car, addr (alice), btc ("11")), ctx ());
	EXPECT_EQ (after.error, CallError::contract_destroyed);
	EXPECT_EQ (paid_to (after.effect, addr (bob)), btc ("11"));
}

TEST (authcar, swap_lock_claim_and_refund)
{
	validators v (0);
	auto alice = party ("alice");
	auto bob = party ("bob");
	auto car = deploy_authcar (v, addr (alice), btc ("10"), 10);
	Bytes secret{ 's', 'e', 'c' };
	auto h = sha256 (secret);

	auto lock = message (alice, car.id, "", "LockForSwap", { h, std::uint64_t{ 10 }, addr (bob) });
	EXPECT_EQ (execute (car, message (bob, car.id, "", "LockForSwap", { h, std::uint64_t{ 10 }, addr (bob) }), ctx ()).error, CallError::not_owner);
	auto r = execute (car, lock, ctx (2));
	ASSERT_TRUE (r.ok ());
	auto locked = *r.instance;

	EXPECT_EQ (execute (locked, buy (party ("carol"), car, addr (alice), btc ("11")), ctx (3)).error, CallError::asset_locked);
	EXPECT_EQ (execute (locked, message (bob, car.id, "", "ClaimWithSecret", { Bytes{ 'x' } }), ctx (3)).error, CallError::wrong_preimage);
	EXPECT_EQ (execute (locked, message (alice, car.id, "", "RefundSwap", {}), ctx (9)).error, CallError::too_early_refund);
	EXPECT_EQ (execute (locked, message (bob, car.id, "", "ClaimWithSecret", { secret }), ctx (10)).error, CallError::too_late_claim);

	auto claimed = execute (locked, message (party ("watcher"), car.id, "", "ClaimWithSecret", { secret }), ctx (9));
	ASSERT_TRUE (claimed.ok ());
	EXPECT_EQ (claimed.instance->asset_owner (), addr (bob));
	EXPECT_EQ (execute (*claimed.instance, message (alice, car.id, "", "RefundSwap", {}), ctx (20)).error, CallError::already_resolved);

	auto refunded = execute (locked, message (alice, car.id, "", "RefundSwap", {}), ctx (10));
	ASSERT_TRUE (refunded.ok ());
	EXPECT_EQ (refunded.instance->asset_owner (), addr (alice));
	EXPECT_FALSE (std::get<AuthCarState> (refunded.instance->state).swap_locked ());
	EXPECT_TRUE (execute (*refunded.instance, buy (bob, car, addr (alice), btc ("11")), ctx (11)).ok ());
}

TEST (lockbox, deploy_claim_refund)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	Bytes secret{ 1, 2, 3, 4 };
	auto h = sha256 (secret);
	auto r = deploy (message (alice, std::nullopt, "HtlcLockbox", "constructor", { addr (bob), h, std::uint64_t{ 10 } }, btc ("2")), ctx (1));
	ASSERT_TRUE (r.ok ());
	auto box = *r.instance;
	EXPECT_EQ (box.locked_balance, btc ("2"));

	EXPECT_EQ (execute (box, message (alice, box.id, "", "Refund", {}), ctx (9)).error, CallError::too_early_refund);
	EXPECT_EQ (execute (box, message (bob, box.id, "", "Refund", {}), ctx (10)).error, CallError::not_locker);

	auto claim = execute (box, message (party ("anyone"), box.id, "", "Claim", { secret }), ctx (5));
	ASSERT_TRUE (claim.ok ());
	EXPECT_EQ (paid_to (claim.effect, addr (bob)), btc ("2"));
	EXPECT_TRUE (claim.instance->locked_balance.is_zero ());
	EXPECT_EQ (std::get<Bytes> (claim.instance->state_vars ().at ("preimage")), secret);
	EXPECT_EQ (execute (*claim.instance, message (alice, box.id, "", "Refund", {}), ctx (12)).error, CallError::already_resolved);

	auto refund = execute (box, message (alice, box.id, "", "Refund", {}), ctx (10));
	ASSERT_TRUE (refund.ok ());
	EXPECT_EQ (paid_to (refund.effect, addr (alice)), btc ("2"));
	EXPECT_EQ (execute (*refund.instance, message (bob, box.id, "", "Claim", { secret }), ctx (5)).error, CallError::already_resolved);

	EXPECT_EQ (deploy (message (alice, std::nullopt, "HtlcLockbox", "constructor", { h, std::uint64_t{ 10 } }), ctx (1)).error, CallError::bad_argument);
	EXPECT_EQ (deploy (message (alice, std::nullopt, "HtlcLockbox", "constructor", { h, std::uint64_t{ 1 } }, btc ("1")), ctx (1)).error, CallError::bad_argument);
}

TEST (lockbox, open_box_pays_claimer)
{
	auto alice = party ("alice");
	auto bob = party ("bob");
	Bytes x{ 'x' };
	auto r = deploy (message (alice, std::nullopt, "HtlcLockbox", "constructor", { sha256 (x), std::uint64_t{ 100 } }, btc ("0.5")), ctx (1));
	ASSERT_TRUE (r.ok ());
	EXPECT_EQ (std::get<std::string> (r.instance->state_vars ().at ("state")), "locked");
	auto claim = execute (*r.instance, message (bob, r.instance->id, "", "Claim", { x }), ctx (2));
	ASSERT_TRUE (claim.ok ());
	EXPECT_EQ (paid_to (claim.effect, addr (bob)), btc ("0.5"));
	EXPECT_EQ (std::get<std::string> (claim.instance->state_vars ().at ("state")), "claimed");
}

TEST (engine, failed_calls_are_atomic_property)
{
	std::mt19937_64 rng (5);
	validators v (0);
	auto alice = party ("alice");
	std::vector<Identity> callers{ alice, party ("bob"), party ("carol") };
	std::vector<std::string> fns{ "Buy", "UpdatePrice", "UpdateContractOwner", "DestroyContract", "LockForSwap", "ClaimWithSecret", "RefundSwap", "Nope" };
	auto car = deploy_authcar (v, addr (alice), btc ("10"), 10);
	int failures = 0;
	for (int i = 0; i < 500; ++i)
	{
		auto const & who = callers[rng () % callers.size ()];
		auto fn = fns[rng () % fns.size ()];
		std::vector<Value> args;
		switch (rng () % 4)
		{
			case 0:
				args = { addr (callers[rng () % callers.size ()]) };
				break;
			case 1:
				args = { Amount{ rng () % 2'000'000'000 } };
				break;
			case 2:
				args = { sha256 ("h"), std::uint64_t{ rng () % 20 }, addr (who) };
				break;
			default:
				break;
		}
		auto val = Amount{ rng () % 2'000'000'000 };
		auto r = execute (car, message (who, car.id, "", fn, args, val), ctx (1 + rng () % 20));
		ASSERT_LE (r.effect.total_paid (), car.locked_balance + val);
		if (!r.ok ())
		{
			++failures;
			ASSERT_EQ (*r.instance, car);
			ASSERT_EQ (r.effect.total_paid (), val);
		}
		else
		{
			EXPECT_EQ (r.instance->locked_balance, car.locked_balance + val - r.effect.total_paid ());
			if (r.instance->live ())
				car = *r.instance;
		}
	}
	EXPECT_GT (failures, 100);
}
