#pragma once

#include <assetsim/core/address.hpp>
#include <assetsim/core/identity.hpp>

#include <functional>
#include <vector>

namespace assetsim {

struct WitnessSignature
{
	PublicKey key;
	Signature sig;

	bool operator== (const WitnessSignature &) const = default;
};

/// Signatures authorizing a body on behalf of an address. A user address
/// needs one signature by the key that hashes to it; a multisig address
/// needs `threshold` distinct member signatures.
using Witness = std::vector<WitnessSignature>;

Witness sign_witness (ByteView body, const Identity & signer);
Witness sign_witness (ByteView body, const std::vector<Identity> & signers);

/// Number of distinct policy members with a valid signature over body.
std::size_t count_valid_members (const MultisigPolicy & policy, const Witness & witness, ByteView body);

/// Chain-level authorization check; contract addresses never authorize.
bool authorizes (const Address & owner, const Witness & witness, ByteView body);

void encode_witness (Writer & w, const Witness & witness);
Witness decode_witness (Reader & r);

}
