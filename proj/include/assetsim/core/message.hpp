#pragma once

#include <assetsim/core/transaction.hpp>
#include <assetsim/core/value.hpp>

#include <optional>
#include <string>
#include <vector>

namespace assetsim {

inline constexpr std::string_view constructor_function = "constructor";

/// Deployment or function-call message. `value` is msg.val and must be
/// covered exactly by `funding`, all owned by `sender`. The witness signs
/// body_bytes() on behalf of `sender`.
struct ContractMessage
{
	Address sender;
	Amount value;
	std::optional<Digest> target; ///< nullopt: deployment
	std::string contract_class; ///< deployments only
	std::string function;
	std::vector<Value> args;
	std::vector<Outpoint> funding;
	std::uint64_t nonce{ 0 };
	Witness witness;

	bool is_deploy () const { return !target.has_value (); }

	Bytes body_bytes () const;
	Digest id () const;

	void sign (const Identity & signer) { witness = sign_witness (body_bytes (), signer); }
	void sign (const std::vector<Identity> & signers) { witness = sign_witness (body_bytes (), signers); }

	void encode (Writer & w) const;
	static ContractMessage decode (Reader & r);

	bool operator== (const ContractMessage & other) const;
};

}
