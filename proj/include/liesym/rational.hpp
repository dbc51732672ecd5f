#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace liesym {

using Rational = mpq_class;

Rational rational_from_string(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Exact conversion of a finite double.
Rational rational_from_double(double v);
std::size_t hash_value(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }
Rational floor(const Rational& q);

// q^k for integer k (k < 0 requires q != 0).
Rational pow(const Rational& q, long k);

// Exact q-th root of a nonnegative rational if it exists.
bool exact_root(const Rational& value, unsigned long degree, Rational& out);

}  // namespace liesym
