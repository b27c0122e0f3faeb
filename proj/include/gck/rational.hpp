#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gck {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `p`, `-p`, `+p` or `p/q` into a canonical rational. Throws ParseError.
Rational parse_rational(std::string_view text);

/// `p` when the denominator is one, `p/q` otherwise.
std::string to_string(const Rational& q);

}  // namespace gck
