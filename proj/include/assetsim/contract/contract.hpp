#pragma once

#include <assetsim/core/address.hpp>
#include <assetsim/core/amount.hpp>
#include <assetsim/core/value.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace assetsim::contract {

enum class ContractClass : std::uint8_t
{
	car = 0, ///< plain car listing, owner set from msg.sender
	auth_car = 1, ///< registry-authenticated car with sales tax
	htlc_lockbox = 2, ///< hash/time-locked currency escrow
};

std::string_view class_name (ContractClass cls);
std::optional<ContractClass> class_from_name (std::string_view name);

enum class ContractStatus : std::uint8_t
{
	live,
	destroyed,
};

enum class LockStatus : std::uint8_t
{
	locked,
	claimed,
	refunded,
};

std::string_view to_string (ContractStatus s);
std::string_view to_string (LockStatus s);

struct CarState
{
	std::string make;
	std::string model;
	std::uint64_t year{ 0 };
	Amount price;
	Address owner;

	bool operator== (const CarState &) const = default;
};

/// Pending or resolved hash/time lock on an AuthCar's ownership.
struct SwapLock
{
	Digest hash;
	std::uint64_t timeout_height{ 0 };
	Address locker;
	Address beneficiary;
	LockStatus status{ LockStatus::locked };
	std::optional<Bytes> preimage;

	bool operator== (const SwapLock &) const = default;
};

struct AuthCarState
{
	std::string make;
	std::string model;
	std::uint64_t year{ 0 };
	Amount price;
	std::uint64_t tax_percent{ 0 };
	Address owner;
	Address contract_owner;
	std::optional<SwapLock> swap;

	bool swap_locked () const { return swap && swap->status == LockStatus::locked; }
	bool operator== (const AuthCarState &) const = default;
};

/// A lockbox without a beneficiary pays whichever caller presents the preimage.
struct LockboxState
{
	Address locker;
	std::optional<Address> beneficiary;
	Digest hash;
	std::uint64_t timeout_height{ 0 };
	LockStatus status{ LockStatus::locked };
	std::optional<Bytes> preimage;
	std::optional<Address> paid_to;

	bool operator== (const LockboxState &) const = default;
};

using ContractState = std::variant<CarState, AuthCarState, LockboxState>;

struct ContractInstance
{
	Digest id;
	ContractClass cls{ ContractClass::car };
	ContractState state;
	Amount locked_balance;
	ContractStatus status{ ContractStatus::live };
	std::uint64_t created_height{ 0 };

	Address address () const { return contract_address (id); }
	bool live () const { return status == ContractStatus::live; }
	/// Current asset owner for car classes; nullopt for lockboxes.
	std::optional<Address> asset_owner () const;
	StateVars state_vars () const;

	template <typename S>
	const S * as () const
	{
		return std::get_if<S> (&state);
	}

	void encode (Writer & w) const;
	bool operator== (const ContractInstance &) const = default;
};

}
