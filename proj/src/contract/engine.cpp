#include <assetsim/contract/engine.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/core/witness.hpp>

namespace assetsim::contract {

std::string_view to_string (CallError e)
{
	switch (e)
	{
		case CallError::arity_mismatch:
			return "ArityMismatch";
		case CallError::bad_argument:
			return "BadArgument";
		case CallError::unknown_class:
			return "UnknownClass";
		case CallError::unknown_function:
			return "UnknownFunction";
		case CallError::contract_destroyed:
			return "ContractDestroyed";
		case CallError::price_too_low:
			return "PriceTooLow";
		case CallError::stale_owner:
			return "StaleOwner";
		case CallError::not_owner:
			return "NotOwner";
		case CallError::bad_multisig:
			return "BadMultisig";
		case CallError::wrong_preimage:
			return "WrongPreimage";
		case CallError::too_early_refund:
			return "TooEarlyRefund";
		case CallError::too_late_claim:
			return "TooLateClaim";
		case CallError::already_resolved:
			return "AlreadyResolved";
		case CallError::not_locked:
			return "NotLocked";
		case CallError::asset_locked:
			return "AssetLocked";
		case CallError::not_locker:
			return "NotLocker";
	}
	return "?";
}

Amount ExecutionEffect::total_paid () const
{
	Amount sum;
	for (auto const & p : payouts)
		sum += p.amount;
	return sum;
}

Digest derive_contract_id (const ChainContext & ctx, const ContractMessage & msg)
{
	Writer w;
	w.tag ("assetsim/contract").str (ctx.chain_id).u64 (ctx.height).digest (msg.id ());
	return w.hash ();
}

bool validate_multisig (const ContractMessage & msg, const Address & contract_owner)
{
	if (contract_owner.kind != AddressKind::multisig || !contract_owner.well_formed ())
		return false;
	if (msg.sender != contract_owner)
		return false;
	auto const & policy = *contract_owner.policy;
	return count_valid_members (policy, msg.witness, msg.body_bytes ()) >= policy.threshold;
}

namespace {
CallResult fail (std::optional<ContractInstance> instance, const ContractMessage & msg, CallError error)
{
	CallResult r;
	r.instance = std::move (instance);
	r.error = error;
	if (!msg.value.is_zero ())
		r.effect.payouts.push_back ({ msg.sender, msg.value });
	return r;
}

void pay (ExecutionEffect & effect, const Address & to, Amount amount)
{
	if (!amount.is_zero ())
		effect.payouts.push_back ({ to, amount });
}

// Moves msg.val into the instance and the payouts out of it.
CallResult succeed (ContractInstance next, const ContractMessage & msg, ExecutionEffect effect)
{
	next.locked_balance = next.locked_balance + msg.value - effect.total_paid ();
	CallResult r;
	r.instance = std::move (next);
	r.effect = std::move (effect);
	return r;
}

template <typename T>
const T * arg (const ContractMessage & msg, std::size_t i)
{
	return i < msg.args.size () ? std::get_if<T> (&msg.args[i]) : nullptr;
}

using U64 = std::uint64_t;

#define ASSETSIM_ARG(type, name, index)                              \
	auto const * name = arg<type> (msg, index);                    \
	if (name == nullptr)                                           \
		return fail (std::nullopt, msg, CallError::bad_argument);

std::optional<CallError> guard_live (const ContractInstance & instance)
{
	if (!instance.live ())
		return CallError::contract_destroyed;
	return std::nullopt;
}
}

namespace {
__extension__ using u128 = unsigned __int128;
}

Amount tax_due (Amount paid, std::uint64_t tax_percent)
{
	auto tax = static_cast<u128> (paid.units ()) * tax_percent / 100;
	return Amount{ static_cast<std::uint64_t> (tax) };
}

bool meets_taxed_price (Amount paid, Amount price, std::uint64_t tax_percent)
{
	auto lhs = static_cast<u128> (paid.units ()) * 100;
	auto rhs = static_cast<u128> (price.units ()) * (100 + static_cast<u128> (tax_percent));
	return lhs >= rhs;
}

CallResult deploy (const ContractMessage & msg, const ChainContext & ctx)
{
	auto cls = class_from_name (msg.contract_class);
	if (!cls)
		return fail (std::nullopt, msg, CallError::unknown_class);

	ContractInstance instance;
	instance.id = derive_contract_id (ctx, msg);
	instance.cls = *cls;
	instance.created_height = ctx.height;

	switch (*cls)
	{
		case ContractClass::car:
		{
			if (msg.args.size () != 4)
				return fail (std::nullopt, msg, CallError::arity_mismatch);
			ASSETSIM_ARG (std::string, make, 0);
			ASSETSIM_ARG (std::string, model, 1);
			ASSETSIM_ARG (U64, year, 2);
			ASSETSIM_ARG (Amount, price, 3);
			instance.state = CarState{ *make, *model, *year, *price, msg.sender };
			break;
		}
		case ContractClass::auth_car:
		{
			if (msg.args.size () != 6)
				return fail (std::nullopt, msg, CallError::arity_mismatch);
			ASSETSIM_ARG (std::string, make, 0);
			ASSETSIM_ARG (std::string, model, 1);
			ASSETSIM_ARG (U64, year, 2);
			ASSETSIM_ARG (Amount, price, 3);
			ASSETSIM_ARG (U64, tax_percent, 4);
			ASSETSIM_ARG (Address, owner, 5);
			if (*tax_percent > 100 || !owner->well_formed ())
				return fail (std::nullopt, msg, CallError::bad_argument);
			if (!validate_multisig (msg, msg.sender))
				return fail (std::nullopt, msg, CallError::bad_multisig);
			AuthCarState s;
			s.make = *make;
			s.model = *model;
			s.year = *year;
			s.price = *price;
			s.tax_percent = *tax_percent;
			s.owner = *owner;
			s.contract_owner = msg.sender;
			instance.state = std::move (s);
			break;
		}
		case ContractClass::htlc_lockbox:
		{
			if (msg.args.size () != 2 && msg.args.size () != 3)
				return fail (std::nullopt, msg, CallError::arity_mismatch);
			std::size_t base = msg.args.size () == 3 ? 1 : 0;
			LockboxState s;
			if (base == 1)
			{
				ASSETSIM_ARG (Address, beneficiary, 0);
				if (!beneficiary->well_formed ())
					return fail (std::nullopt, msg, CallError::bad_argument);
				s.beneficiary = *beneficiary;
			}
			ASSETSIM_ARG (Digest, hash, base);
			ASSETSIM_ARG (U64, timeout, base + 1);
			if (msg.value.is_zero () || *timeout <= ctx.height)
				return fail (std::nullopt, msg, CallError::bad_argument);
			s.locker = msg.sender;
			s.hash = *hash;
			s.timeout_height = *timeout;
			instance.state = std::move (s);
			break;
		}
	}
	return succeed (std::move (instance), msg, {});
}

CallResult car_buy (const ContractInstance & instance, const ContractMessage & msg, const Address & current_owner)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<CarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (msg.value < car->price)
		return fail (instance, msg, CallError::price_too_low);
	if (current_owner != car->owner)
		return fail (instance, msg, CallError::stale_owner);

	auto next = instance;
	auto & s = std::get<CarState> (next.state);
	ExecutionEffect effect;
	pay (effect, s.owner, msg.value);
	s.owner = msg.sender;
	effect.ownership_change = msg.sender;
	effect.state_updates["owner"] = msg.sender;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult authcar_buy (const ContractInstance & instance, const ContractMessage & msg, const Address & current_owner)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (car->swap_locked ())
		return fail (instance, msg, CallError::asset_locked);
	if (!meets_taxed_price (msg.value, car->price, car->tax_percent))
		return fail (instance, msg, CallError::price_too_low);
	if (current_owner != car->owner)
		return fail (instance, msg, CallError::stale_owner);

	auto next = instance;
	auto & s = std::get<AuthCarState> (next.state);
	auto tax = tax_due (msg.value, s.tax_percent);
	ExecutionEffect effect;
	pay (effect, s.owner, msg.value - tax);
	pay (effect, s.contract_owner, tax);
	s.owner = msg.sender;
	effect.ownership_change = msg.sender;
	effect.state_updates["owner"] = msg.sender;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult update_price (const ContractInstance & instance, const ContractMessage & msg, Amount new_price)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto next = instance;
	Address * owner = nullptr;
	Amount * price = nullptr;
	if (auto * car = std::get_if<CarState> (&next.state))
	{
		owner = &car->owner;
		price = &car->price;
	}
	else if (auto * auth = std::get_if<AuthCarState> (&next.state))
	{
		owner = &auth->owner;
		price = &auth->price;
	}
	else
	{
		return fail (instance, msg, CallError::unknown_function);
	}
	if (msg.sender != *owner)
		return fail (instance, msg, CallError::not_owner);
	*price = new_price;
	ExecutionEffect effect;
	effect.state_updates["price"] = new_price;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult update_contract_owner (const ContractInstance & instance, const ContractMessage & msg, const Address & new_owner)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (!validate_multisig (msg, car->contract_owner))
		return fail (instance, msg, CallError::bad_multisig);
	if (!new_owner.well_formed ())
		return fail (instance, msg, CallError::bad_argument);
	auto next = instance;
	std::get<AuthCarState> (next.state).contract_owner = new_owner;
	ExecutionEffect effect;
	effect.state_updates["contract_owner"] = new_owner;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult destroy (const ContractInstance & instance, const ContractMessage & msg)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (!validate_multisig (msg, car->contract_owner))
		return fail (instance, msg, CallError::bad_multisig);
	auto next = instance;
	next.status = ContractStatus::destroyed;
	ExecutionEffect effect;
	effect.destroyed = true;
	pay (effect, car->contract_owner, instance.locked_balance + msg.value);
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult htlc_claim (const ContractInstance & instance, const ContractMessage & msg, const Bytes & preimage, const ChainContext & ctx)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * box = instance.as<LockboxState> ();
	if (box == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (box->status != LockStatus::locked)
		return fail (instance, msg, CallError::already_resolved);
	if (sha256 (preimage) != box->hash)
		return fail (instance, msg, CallError::wrong_preimage);
	if (ctx.height >= box->timeout_height)
		return fail (instance, msg, CallError::too_late_claim);

	auto next = instance;
	auto & s = std::get<LockboxState> (next.state);
	auto recipient = s.beneficiary.value_or (msg.sender);
	s.status = LockStatus::claimed;
	s.preimage = preimage;
	s.paid_to = recipient;
	ExecutionEffect effect;
	pay (effect, recipient, instance.locked_balance + msg.value);
	effect.state_updates["state"] = std::string ("claimed");
	effect.state_updates["preimage"] = preimage;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult htlc_refund (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * box = instance.as<LockboxState> ();
	if (box == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (box->status != LockStatus::locked)
		return fail (instance, msg, CallError::already_resolved);
	if (msg.sender != box->locker)
		return fail (instance, msg, CallError::not_locker);
	if (ctx.height < box->timeout_height)
		return fail (instance, msg, CallError::too_early_refund);

	auto next = instance;
	auto & s = std::get<LockboxState> (next.state);
	s.status = LockStatus::refunded;
	s.paid_to = s.locker;
	ExecutionEffect effect;
	pay (effect, s.locker, instance.locked_balance + msg.value);
	effect.state_updates["state"] = std::string ("refunded");
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult lock_for_swap (const ContractInstance & instance, const ContractMessage & msg, const Digest & hash, std::uint64_t timeout_height, const Address & beneficiary, const ChainContext & ctx)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (msg.sender != car->owner)
		return fail (instance, msg, CallError::not_owner);
	if (car->swap_locked ())
		return fail (instance, msg, CallError::asset_locked);
	if (timeout_height <= ctx.height || !beneficiary.well_formed ())
		return fail (instance, msg, CallError::bad_argument);

	auto next = instance;
	std::get<AuthCarState> (next.state).swap = SwapLock{ hash, timeout_height, msg.sender, beneficiary, LockStatus::locked, std::nullopt };
	ExecutionEffect effect;
	effect.state_updates["swap_state"] = std::string ("locked");
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult claim_with_secret (const ContractInstance & instance, const ContractMessage & msg, const Bytes & preimage, const ChainContext & ctx)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (!car->swap)
		return fail (instance, msg, CallError::not_locked);
	if (car->swap->status != LockStatus::locked)
		return fail (instance, msg, CallError::already_resolved);
	if (sha256 (preimage) != car->swap->hash)
		return fail (instance, msg, CallError::wrong_preimage);
	if (ctx.height >= car->swap->timeout_height)
		return fail (instance, msg, CallError::too_late_claim);

	auto next = instance;
	auto & s = std::get<AuthCarState> (next.state);
	s.swap->status = LockStatus::claimed;
	s.swap->preimage = preimage;
	s.owner = s.swap->beneficiary;
	ExecutionEffect effect;
	// A currency refund of msg.val, if any was attached, goes back to the caller.
	pay (effect, msg.sender, msg.value);
	effect.ownership_change = s.owner;
	effect.state_updates["owner"] = s.owner;
	effect.state_updates["swap_state"] = std::string ("claimed");
	effect.state_updates["swap_preimage"] = preimage;
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult refund_swap (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx)
{
	if (auto e = guard_live (instance))
		return fail (instance, msg, *e);
	auto const * car = instance.as<AuthCarState> ();
	if (car == nullptr)
		return fail (instance, msg, CallError::unknown_function);
	if (!car->swap)
		return fail (instance, msg, CallError::not_locked);
	if (car->swap->status != LockStatus::locked)
		return fail (instance, msg, CallError::already_resolved);
	if (msg.sender != car->swap->locker)
		return fail (instance, msg, CallError::not_locker);
	if (ctx.height < car->swap->timeout_height)
		return fail (instance, msg, CallError::too_early_refund);

	auto next = instance;
	std::get<AuthCarState> (next.state).swap->status = LockStatus::refunded;
	ExecutionEffect effect;
	pay (effect, msg.sender, msg.value);
	effect.state_updates["swap_state"] = std::string ("refunded");
	return succeed (std::move (next), msg, std::move (effect));
}

CallResult execute (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx)
{
	if (!instance.live ())
		return fail (instance, msg, CallError::contract_destroyed);

	auto arity = [&] (std::size_t n) { return msg.args.size () == n; };
	auto bad = [&] (CallError e) { return fail (instance, msg, e); };
	auto const & fn = msg.function;

	switch (instance.cls)
	{
		case ContractClass::car:
		case ContractClass::auth_car:
		{
			bool auth = instance.cls == ContractClass::auth_car;
			if (fn == functions::buy)
			{
				if (!arity (1))
					return bad (CallError::arity_mismatch);
				auto const * cur = arg<Address> (msg, 0);
				if (cur == nullptr)
					return bad (CallError::bad_argument);
				return auth ? authcar_buy (instance, msg, *cur) : car_buy (instance, msg, *cur);
			}
			if (fn == functions::update_price)
			{
				if (!arity (1))
					return bad (CallError::arity_mismatch);
				auto const * p = arg<Amount> (msg, 0);
				if (p == nullptr)
					return bad (CallError::bad_argument);
				return update_price (instance, msg, *p);
			}
			if (!auth)
				return bad (CallError::unknown_function);
			if (fn == functions::update_contract_owner)
			{
				if (!arity (1))
					return bad (CallError::arity_mismatch);
				auto const * co = arg<Address> (msg, 0);
				if (co == nullptr)
					return bad (CallError::bad_argument);
				return update_contract_owner (instance, msg, *co);
			}
			if (fn == functions::destroy)
			{
				if (!arity (0))
					return bad (CallError::arity_mismatch);
				return destroy (instance, msg);
			}
			if (fn == functions::lock_for_swap)
			{
				if (!arity (3))
					return bad (CallError::arity_mismatch);
				auto const * hash = arg<Digest> (msg, 0);
				auto const * timeout = arg<U64> (msg, 1);
				auto const * beneficiary = arg<Address> (msg, 2);
				if (!hash || !timeout || !beneficiary)
					return bad (CallError::bad_argument);
				return lock_for_swap (instance, msg, *hash, *timeout, *beneficiary, ctx);
			}
			if (fn == functions::claim_with_secret)
			{
				if (!arity (1))
					return bad (CallError::arity_mismatch);
				auto const * preimage = arg<Bytes> (msg, 0);
				if (preimage == nullptr)
					return bad (CallError::bad_argument);
				return claim_with_secret (instance, msg, *preimage, ctx);
			}
			if (fn == functions::refund_swap)
			{
				if (!arity (0))
					return bad (CallError::arity_mismatch);
				return refund_swap (instance, msg, ctx);
			}
			return bad (CallError::unknown_function);
		}
		case ContractClass::htlc_lockbox:
		{
			if (fn == functions::claim)
			{
				if (!arity (1))
					return bad (CallError::arity_mismatch);
				auto const * preimage = arg<Bytes> (msg, 0);
				if (preimage == nullptr)
					return bad (CallError::bad_argument);
				return htlc_claim (instance, msg, *preimage, ctx);
			}
			if (fn == functions::refund)
			{
				if (!arity (0))
					return bad (CallError::arity_mismatch);
				return htlc_refund (instance, msg, ctx);
			}
			return bad (CallError::unknown_function);
		}
	}
	return bad (CallError::unknown_function);
}

}
