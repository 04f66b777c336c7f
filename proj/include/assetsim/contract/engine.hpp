#pragma once

#include <assetsim/contract/contract.hpp>
#include <assetsim/core/message.hpp>

#include <optional>
#include <string>
#include <vector>

namespace assetsim::contract {

enum class CallError : std::uint8_t
{
	arity_mismatch,
	bad_argument,
	unknown_class,
	unknown_function,
	contract_destroyed,
	price_too_low,
	stale_owner,
	not_owner,
	bad_multisig,
	wrong_preimage,
	too_early_refund,
	too_late_claim,
	already_resolved,
	not_locked,
	asset_locked,
	not_locker,
};

std::string_view to_string (CallError e);

struct Payout
{
	Address recipient;
	Amount amount;

	bool operator== (const Payout &) const = default;
};

/// What a call did. Payouts never exceed locked_balance + msg.val.
struct ExecutionEffect
{
	StateVars state_updates;
	std::vector<Payout> payouts;
	std::optional<Address> ownership_change;
	bool destroyed{ false };

	Amount total_paid () const;
	bool operator== (const ExecutionEffect &) const = default;
};

struct ChainContext
{
	std::string chain_id;
	std::uint64_t height{ 0 }; ///< height of the block executing the message
};

/// Outcome of one message. On error the instance is bit-identical to the
/// input, and the only payout is the refund of msg.val to the sender.
struct CallResult
{
	std::optional<ContractInstance> instance;
	ExecutionEffect effect;
	std::optional<CallError> error;

	bool ok () const { return !error.has_value (); }
};

Digest derive_contract_id (const ChainContext & ctx, const ContractMessage & msg);

/// True iff msg.sender is `contract_owner` and the message witness carries
/// at least threshold distinct member signatures under its policy.
bool validate_multisig (const ContractMessage & msg, const Address & contract_owner);

CallResult deploy (const ContractMessage & msg, const ChainContext & ctx);
/// Dispatches on msg.function and decodes msg.args.
CallResult execute (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx);

CallResult car_buy (const ContractInstance & instance, const ContractMessage & msg, const Address & current_owner);
CallResult authcar_buy (const ContractInstance & instance, const ContractMessage & msg, const Address & current_owner);
CallResult update_price (const ContractInstance & instance, const ContractMessage & msg, Amount new_price);
CallResult update_contract_owner (const ContractInstance & instance, const ContractMessage & msg, const Address & new_owner);
CallResult destroy (const ContractInstance & instance, const ContractMessage & msg);

CallResult htlc_claim (const ContractInstance & instance, const ContractMessage & msg, const Bytes & preimage, const ChainContext & ctx);
CallResult htlc_refund (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx);

CallResult lock_for_swap (const ContractInstance & instance, const ContractMessage & msg, const Digest & hash, std::uint64_t timeout_height, const Address & beneficiary, const ChainContext & ctx);
CallResult claim_with_secret (const ContractInstance & instance, const ContractMessage & msg, const Bytes & preimage, const ChainContext & ctx);
CallResult refund_swap (const ContractInstance & instance, const ContractMessage & msg, const ChainContext & ctx);

/// Tax owed to the contract owner: floor(paid * tax_percent / 100).
Amount tax_due (Amount paid, std::uint64_t tax_percent);
/// Exact integer form of paid >= price * (1 + tax_percent / 100).
bool meets_taxed_price (Amount paid, Amount price, std::uint64_t tax_percent);

namespace functions {
	inline constexpr std::string_view buy = "Buy";
	inline constexpr std::string_view update_price = "UpdatePrice";
	inline constexpr std::string_view update_contract_owner = "UpdateContractOwner";
	inline constexpr std::string_view destroy = "DestroyContract";
	inline constexpr std::string_view lock_for_swap = "LockForSwap";
	inline constexpr std::string_view claim_with_secret = "ClaimWithSecret";
	inline constexpr std::string_view refund_swap = "RefundSwap";
	inline constexpr std::string_view claim = "Claim";
	inline constexpr std::string_view refund = "Refund";
}

}
