#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace inasup {

/// Exact rational backed by GMP. gmpxx arithmetic keeps values canonical
/// (gcd(|num|, den) = 1, den > 0) as long as every construction goes through
/// the helpers below.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Accepts "p/q" or "p". Rejects decimals, empty strings and zero denominators.
Rational parse_rational(std::string_view text);

/// Always "num/den", also for integers ("3/1").
std::string to_string(const Rational& q);

bool is_reduced(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

}  // namespace inasup
