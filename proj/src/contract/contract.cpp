#include <assetsim/contract/contract.hpp>
#include <assetsim/core/serialize.hpp>

namespace assetsim::contract {

std::string_view class_name (ContractClass cls)
{
	switch (cls)
	{
		case ContractClass::car:
			return "Car";
		case ContractClass::auth_car:
			return "AuthCar";
		case ContractClass::htlc_lockbox:
			return "HtlcLockbox";
	}
	return "?";
}

std::optional<ContractClass> class_from_name (std::string_view name)
{
	for (auto cls : { ContractClass::car, ContractClass::auth_car, ContractClass::htlc_lockbox })
		if (class_name (cls) == name)
			return cls;
	return std::nullopt;
}

std::string_view to_string (ContractStatus s)
{
	return s == ContractStatus::live ? "live" : "destroyed";
}

std::string_view to_string (LockStatus s)
{
	switch (s)
	{
		case LockStatus::locked:
			return "locked";
		case LockStatus::claimed:
			return "claimed";
		case LockStatus::refunded:
			return "refunded";
	}
	return "?";
}

std::optional<Address> ContractInstance::asset_owner () const
{
	if (auto const * car = as<CarState> ())
		return car->owner;
	if (auto const * car = as<AuthCarState> ())
		return car->owner;
	return std::nullopt;
}

StateVars ContractInstance::state_vars () const
{
	StateVars vars;
	std::visit (
		[&vars] (auto const & s) {
			using S = std::decay_t<decltype (s)>;
			if constexpr (std::is_same_v<S, CarState>)
			{
				vars = { { "make", s.make }, { "model", s.model }, { "year", s.year }, { "price", s.price }, { "owner", s.owner } };
			}
			else if constexpr (std::is_same_v<S, AuthCarState>)
			{
				vars = { { "make", s.make },
					{ "model", s.model },
					{ "year", s.year },
					{ "price", s.price },
					{ "tax_percent", s.tax_percent },
					{ "owner", s.owner },
					{ "contract_owner", s.contract_owner } };
				if (s.swap)
				{
					vars["swap_hash"] = s.swap->hash;
					vars["swap_timeout_height"] = s.swap->timeout_height;
					vars["swap_locker"] = s.swap->locker;
					vars["swap_beneficiary"] = s.swap->beneficiary;
					vars["swap_state"] = std::string (to_string (s.swap->status));
					if (s.swap->preimage)
						vars["swap_preimage"] = *s.swap->preimage;
				}
			}
			else
			{
				vars = { { "locker", s.locker }, { "hash", s.hash }, { "timeout_height", s.timeout_height }, { "state", std::string (to_string (s.status)) } };
				static constexpr std::string_view labels[] = { "s0", "s1", "s2" };
				vars["s"] = std::string (labels[static_cast<int> (s.status)]);
				if (s.beneficiary)
					vars["beneficiary"] = *s.beneficiary;
				if (s.preimage)
					vars["preimage"] = *s.preimage;
				if (s.paid_to)
					vars["paid_to"] = *s.paid_to;
			}
		},
		state);
	return vars;
}

void ContractInstance::encode (Writer & w) const
{
	w.digest (id).u8 (static_cast<std::uint8_t> (cls)).u64 (locked_balance.units ()).u8 (static_cast<std::uint8_t> (status)).u64 (created_height);
	auto vars = state_vars ();
	w.u32 (static_cast<std::uint32_t> (vars.size ()));
	for (auto const & [name, value] : vars)
	{
		w.str (name);
		encode_value (w, value);
	}
}

}
