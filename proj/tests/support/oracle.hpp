#pragma once

// Reference arithmetic on schoolbook decimal digits.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Digits = std::vector<int>; ///< little-endian base 10

inline Digits digits (std::uint64_t v)
{
	Digits d;
	do
	{
		d.push_back (static_cast<int> (v % 10));
		v /= 10;
	} while (v != 0);
	return d;
}

inline void trim (Digits & d)
{
	while (d.size () > 1 && d.back () == 0)
		d.pop_back ();
}

inline Digits mul (const Digits & a, std::uint64_t k)
{
	Digits kd = digits (k);
	Digits out (a.size () + kd.size () + 1, 0);
	for (std::size_t i = 0; i < a.size (); ++i)
		for (std::size_t j = 0; j < kd.size (); ++j)
			out[i + j] += a[i] * kd[j];
	for (std::size_t i = 0; i + 1 < out.size (); ++i)
	{
		out[i + 1] += out[i] / 10;
		out[i] %= 10;
	}
	trim (out);
	return out;
}

inline int compare (Digits a, Digits b)
{
	trim (a);
	trim (b);
	if (a.size () != b.size ())
		return a.size () < b.size () ? -1 : 1;
	for (std::size_t i = a.size (); i-- > 0;)
		if (a[i] != b[i])
			return a[i] < b[i] ? -1 : 1;
	return 0;
}

/// floor(a / 100): drop the two lowest digits.
inline Digits div100 (const Digits & a)
{
	if (a.size () <= 2)
		return { 0 };
	Digits out (a.begin () + 2, a.end ());
	trim (out);
	return out;
}

inline std::uint64_t value (const Digits & d)
{
	std::uint64_t v = 0;
	for (std::size_t i = d.size (); i-- > 0;)
		v = v * 10 + static_cast<std::uint64_t> (d[i]);
	return v;
}

/// Tax in base units: floor(paid * tp / 100).
inline std::uint64_t tax (std::uint64_t paid, std::uint64_t tp)
{
	return value (div100 (mul (digits (paid), tp)));
}

/// paid * 100 >= price * (100 + tp)
inline bool price_met (std::uint64_t paid, std::uint64_t price, std::uint64_t tp)
{
	return compare (mul (digits (paid), 100), mul (digits (price), 100 + tp)) >= 0;
}

/// Named-account ledger: each transfer lists (from, amount) inputs and (to, amount) outputs.
struct Ledger
{
	std::map<std::string, std::int64_t> balance;

	bool transfer (const std::vector<std::pair<std::string, std::int64_t>> & in, const std::vector<std::pair<std::string, std::int64_t>> & out)
	{
		std::int64_t a = 0;
		std::int64_t b = 0;
		for (auto const & [who, v] : in)
			a += v;
		for (auto const & [who, v] : out)
			b += v;
		if (a != b)
			return false;
		for (auto const & [who, v] : in)
			balance[who] -= v;
		for (auto const & [who, v] : out)
			balance[who] += v;
		return true;
	}
};

}
