#include <assetsim/core/identity.hpp>

#include <sodium.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace assetsim {

namespace {
struct SodiumInit
{
	SodiumInit ()
	{
		if (sodium_init () < 0)
			throw std::runtime_error ("libsodium initialisation failed");
	}
};

void ensure_sodium ()
{
	static SodiumInit init;
}
}

PublicKey PublicKey::from_hex (std::string_view hex)
{
	auto raw = assetsim::from_hex (hex);
	if (raw.size () != 32)
		throw std::invalid_argument ("public key must be 32 bytes");
	PublicKey key;
	std::copy (raw.begin (), raw.end (), key.bytes.begin ());
	return key;
}

Identity Identity::from_seed (std::string_view label)
{
	ensure_sodium ();
	auto seed = sha256 ("assetsim/identity/" + std::string (label));
	Identity id;
	crypto_sign_seed_keypair (id.public_.bytes.data (), id.secret_.data (), seed.bytes.data ());
	return id;
}

Signature Identity::sign (ByteView message) const
{
	Signature sig;
	crypto_sign_detached (sig.bytes.data (), nullptr, message.data (), message.size (), secret_.data ());
	return sig;
}

bool verify (const PublicKey & key, ByteView message, const Signature & sig)
{
	ensure_sodium ();
	return crypto_sign_verify_detached (sig.bytes.data (), message.data (), message.size (), key.bytes.data ()) == 0;
}

}
