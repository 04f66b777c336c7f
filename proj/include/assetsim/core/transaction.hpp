#pragma once

#include <assetsim/core/address.hpp>
#include <assetsim/core/amount.hpp>
#include <assetsim/core/witness.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace assetsim {

struct Outpoint
{
	Digest tx_id;
	std::uint32_t index{ 0 };

	auto operator<=> (const Outpoint &) const = default;
	std::string to_string () const;
};

struct TxOutput
{
	Amount value;
	Address recipient;

	bool operator== (const TxOutput & other) const { return value == other.value && recipient == other.recipient; }
	void encode (Writer & w) const;
	static TxOutput decode (Reader & r);
};

struct TxInput
{
	Outpoint prevout;
	Witness witness;

	bool operator== (const TxInput &) const = default;
};

/// UTXO transfer. Inputs sign body_bytes(), which excludes every witness.
struct ValueTransferTx
{
	std::vector<TxInput> inputs;
	std::vector<TxOutput> outputs;

	Bytes body_bytes () const;
	Digest id () const;

	/// Signs every input whose prevout is owned by `signer`'s user address.
	void sign_inputs (const Identity & signer, const std::vector<Address> & prevout_owners);
	void sign_input (std::size_t index, const Identity & signer);
	void sign_input (std::size_t index, const std::vector<Identity> & signers);

	void encode (Writer & w) const;
	static ValueTransferTx decode (Reader & r);

	bool operator== (const ValueTransferTx & other) const
	{
		return inputs == other.inputs && outputs == other.outputs;
	}
};

/// Value minted out of thin air: genesis allocations and mining rewards.
struct Coinbase
{
	std::string chain_id;
	std::uint64_t height{ 0 };
	std::vector<TxOutput> outputs;

	Digest id () const;
	void encode (Writer & w) const;
	static Coinbase decode (Reader & r);

	bool operator== (const Coinbase &) const = default;
};

}
