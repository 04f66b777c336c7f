#include <assetsim/core/address.hpp>
#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>

#include <sodium.h>

#include <set>

namespace assetsim {

std::string to_string (AddressKind kind)
{
	switch (kind)
	{
		case AddressKind::user:
			return "user";
		case AddressKind::contract:
			return "contract";
		case AddressKind::multisig:
			return "multisig";
	}
	return "?";
}

AddressKind address_kind_from_string (std::string_view name)
{
	if (name == "user")
		return AddressKind::user;
	if (name == "contract")
		return AddressKind::contract;
	if (name == "multisig")
		return AddressKind::multisig;
	throw std::invalid_argument ("unknown address kind: " + std::string (name));
}

std::strong_ordering Address::operator<=> (const Address & other) const
{
	if (auto c = kind <=> other.kind; c != 0)
		return c;
	return hash <=> other.hash;
}

namespace {
Digest multisig_hash (const MultisigPolicy & policy)
{
	Writer w;
	w.tag ("assetsim/addr/multisig").u32 (policy.threshold).u64 (policy.epoch).u32 (static_cast<std::uint32_t> (policy.members.size ()));
	for (auto const & key : policy.members)
		w.fixed (key.bytes);
	return w.hash ();
}
}

bool Address::well_formed () const
{
	switch (kind)
	{
		case AddressKind::user:
		case AddressKind::contract:
			return !policy.has_value ();
		case AddressKind::multisig:
			return policy.has_value () && policy->threshold >= 1 && policy->threshold <= policy->members.size ()
				&& multisig_hash (*policy) == hash;
	}
	return false;
}

std::string Address::to_string () const
{
	return assetsim::to_string (kind) + ":" + hash.hex ();
}

void Address::encode (Writer & w) const
{
	w.u8 (static_cast<std::uint8_t> (kind)).digest (hash);
	if (kind == AddressKind::multisig)
	{
		auto const & p = policy.value ();
		w.u32 (p.threshold).u64 (p.epoch).u32 (static_cast<std::uint32_t> (p.members.size ()));
		for (auto const & key : p.members)
			w.fixed (key.bytes);
	}
}

Address Address::decode (Reader & r)
{
	Address a;
	auto kind = r.u8 ();
	if (kind > static_cast<std::uint8_t> (AddressKind::multisig))
		throw DecodeError ("bad address kind");
	a.kind = static_cast<AddressKind> (kind);
	a.hash = r.digest ();
	if (a.kind == AddressKind::multisig)
	{
		MultisigPolicy p;
		p.threshold = r.u32 ();
		p.epoch = r.u64 ();
		auto n = r.count (32);
		for (std::uint32_t i = 0; i < n; ++i)
		{
			PublicKey key;
			auto raw = r.fixed (32);
			std::copy (raw.begin (), raw.end (), key.bytes.begin ());
			p.members.push_back (key);
		}
		a.policy = std::move (p);
	}
	return a;
}

Address derive_address (ByteView public_key)
{
	if (public_key.size () != crypto_sign_PUBLICKEYBYTES || crypto_core_ed25519_is_valid_point (public_key.data ()) != 1)
		throw InvalidKey ("malformed public key");
	Writer w;
	w.tag ("assetsim/addr/user").fixed (public_key);
	return Address{ AddressKind::user, w.hash (), std::nullopt };
}

Address derive_address (const PublicKey & key)
{
	return derive_address (ByteView{ key.bytes });
}

Address derive_multisig_address (MultisigPolicy policy)
{
	if (policy.members.empty () || policy.threshold == 0 || policy.threshold > policy.members.size ())
		throw InvalidKey ("multisig threshold must satisfy 1 <= m <= member count");
	std::set<PublicKey> distinct (policy.members.begin (), policy.members.end ());
	if (distinct.size () != policy.members.size ())
		throw InvalidKey ("duplicate multisig member");
	for (auto const & key : policy.members)
		derive_address (key);
	auto hash = multisig_hash (policy);
	return Address{ AddressKind::multisig, hash, std::move (policy) };
}

Address contract_address (const Digest & contract_id)
{
	return Address{ AddressKind::contract, contract_id, std::nullopt };
}

}
