#pragma once

#include <assetsim/core/transaction.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace assetsim {

enum class ValidationCode : std::uint8_t
{
	malformed,
	unknown_outpoint,
	double_spend,
	bad_signature,
	value_mismatch,
	unknown_contract,
};

std::string_view to_string (ValidationCode code);

struct ValidationError
{
	ValidationCode code;
	std::size_t index{ 0 }; ///< first failing input (or output, for value/shape errors)
	std::string detail;

	bool operator== (const ValidationError & other) const { return code == other.code && index == other.index; }
};

/// Unspent outputs of one chain fork, plus the outpoints already consumed
/// so a re-spend is reported as a double spend rather than an unknown input.
class UtxoSet
{
public:
	const TxOutput * find (const Outpoint & op) const;
	bool contains (const Outpoint & op) const { return unspent_.contains (op); }
	bool was_spent (const Outpoint & op) const { return spent_.contains (op); }

	void insert (const Outpoint & op, const TxOutput & out);
	/// Removes an unspent output. Throws std::logic_error when absent.
	TxOutput spend (const Outpoint & op);

	Amount balance (const Address & owner) const;
	Amount total () const;
	std::vector<std::pair<Outpoint, TxOutput>> outputs_of (const Address & owner) const;
	std::size_t size () const { return unspent_.size (); }

	auto begin () const { return unspent_.begin (); }
	auto end () const { return unspent_.end (); }
	const std::set<Outpoint> & spent () const { return spent_; }

	void encode (Writer & w) const;

	bool operator== (const UtxoSet &) const = default;

private:
	std::map<Outpoint, TxOutput> unspent_;
	std::set<Outpoint> spent_;
};

/// Checks shape, input resolution, signatures and value conservation.
std::optional<ValidationError> validate_transfer (const ValueTransferTx & tx, const UtxoSet & utxo);

/// Applies a validated transfer in place.
void apply_transfer_in_place (const ValueTransferTx & tx, UtxoSet & utxo);
/// Value form: returns the successor set.
UtxoSet apply_transfer (const ValueTransferTx & tx, UtxoSet utxo);

void apply_coinbase (const Coinbase & cb, UtxoSet & utxo);

}
