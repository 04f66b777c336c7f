#include <assetsim/core/error.hpp>
#include <assetsim/core/serialize.hpp>
#include <assetsim/core/witness.hpp>

#include <algorithm>
#include <set>

namespace assetsim {

Witness sign_witness (ByteView body, const Identity & signer)
{
	return { WitnessSignature{ signer.public_key (), signer.sign (body) } };
}

Witness sign_witness (ByteView body, const std::vector<Identity> & signers)
{
	Witness w;
	w.reserve (signers.size ());
	for (auto const & s : signers)
		w.push_back ({ s.public_key (), s.sign (body) });
	return w;
}

std::size_t count_valid_members (const MultisigPolicy & policy, const Witness & witness, ByteView body)
{
	std::set<PublicKey> counted;
	for (auto const & entry : witness)
	{
		if (counted.contains (entry.key))
			continue;
		if (std::find (policy.members.begin (), policy.members.end (), entry.key) == policy.members.end ())
			continue;
		if (verify (entry.key, body, entry.sig))
			counted.insert (entry.key);
	}
	return counted.size ();
}

bool authorizes (const Address & owner, const Witness & witness, ByteView body)
{
	if (!owner.well_formed ())
		return false;
	switch (owner.kind)
	{
		case AddressKind::user:
		{
			if (witness.size () != 1)
				return false;
			try
			{
				if (derive_address (witness.front ().key) != owner)
					return false;
			}
			catch (const InvalidKey &)
			{
				return false;
			}
			return verify (witness.front ().key, body, witness.front ().sig);
		}
		case AddressKind::multisig:
			return count_valid_members (*owner.policy, witness, body) >= owner.policy->threshold;
		case AddressKind::contract:
			return false;
	}
	return false;
}

void encode_witness (Writer & w, const Witness & witness)
{
	w.u32 (static_cast<std::uint32_t> (witness.size ()));
	for (auto const & entry : witness)
		w.fixed (entry.key.bytes).fixed (entry.sig.bytes);
}

Witness decode_witness (Reader & r)
{
	Witness witness;
	auto n = r.count (96);
	for (std::uint32_t i = 0; i < n; ++i)
	{
		WitnessSignature entry;
		auto key = r.fixed (32);
		auto sig = r.fixed (64);
		std::copy (key.begin (), key.end (), entry.key.bytes.begin ());
		std::copy (sig.begin (), sig.end (), entry.sig.bytes.begin ());
		witness.push_back (entry);
	}
	return witness;
}

}
