#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace assetsim {

/// Thrown when canonical bytes cannot be decoded.
class DecodeError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class InvalidKey : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

class NotFound : public std::out_of_range
{
public:
	using std::out_of_range::out_of_range;
};

/// Minimal value-or-error holder; std::expected is not available in C++20.
template <typename T, typename E>
class Expected
{
public:
	Expected (T value) :
		storage_ (std::in_place_index<0>, std::move (value))
	{
	}
	Expected (E error) :
		storage_ (std::in_place_index<1>, std::move (error))
	{
	}

	bool has_value () const { return storage_.index () == 0; }
	explicit operator bool () const { return has_value (); }

	T & value ()
	{
		if (!has_value ())
			throw std::logic_error ("Expected: no value");
		return std::get<0> (storage_);
	}
	const T & value () const
	{
		if (!has_value ())
			throw std::logic_error ("Expected: no value");
		return std::get<0> (storage_);
	}
	const E & error () const
	{
		if (has_value ())
			throw std::logic_error ("Expected: no error");
		return std::get<1> (storage_);
	}

	T & operator* () { return value (); }
	const T & operator* () const { return value (); }
	T * operator-> () { return &value (); }
	const T * operator-> () const { return &value (); }

private:
	std::variant<T, E> storage_;
};

}
