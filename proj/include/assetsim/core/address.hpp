#pragma once

#include <assetsim/core/bytes.hpp>
#include <assetsim/core/identity.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace assetsim {

class Writer;
class Reader;

enum class AddressKind : std::uint8_t
{
	user = 0,
	contract = 1,
	multisig = 2,
};

std::string to_string (AddressKind kind);
AddressKind address_kind_from_string (std::string_view name);

/// m-of-n signing policy bound to a validator epoch.
struct MultisigPolicy
{
	std::uint32_t threshold{ 0 };
	std::vector<PublicKey> members;
	std::uint64_t epoch{ 0 };

	bool operator== (const MultisigPolicy &) const = default;
};

/// Identity of an output owner or contract. Equality and ordering use
/// (kind, hash) only; the policy of a multisig address is derived data
/// whose consistency is checked by well_formed().
struct Address
{
	AddressKind kind{ AddressKind::user };
	Digest hash;
	std::optional<MultisigPolicy> policy;

	bool operator== (const Address & other) const { return kind == other.kind && hash == other.hash; }
	std::strong_ordering operator<=> (const Address & other) const;

	bool well_formed () const;
	std::string to_string () const;

	void encode (Writer & w) const;
	static Address decode (Reader & r);
};

/// Throws InvalidKey if the bytes are not a valid public key.
Address derive_address (ByteView public_key);
Address derive_address (const PublicKey & key);
/// Throws InvalidKey on threshold 0, threshold > members, or duplicate members.
Address derive_multisig_address (MultisigPolicy policy);
Address contract_address (const Digest & contract_id);

}
