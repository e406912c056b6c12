#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace leapgen {

using BigInt = mpz_class;
using Rational = mpq_class;
// 64 significant decimal digits
using HighFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<64>,
                                  boost::multiprecision::et_off>;

HighFloat to_high(const Rational& q);
HighFloat to_high(const BigInt& z);
double to_double(const Rational& q);
long double to_long_double(const Rational& q);
// "p/q" or "p" when q == 1
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

unsigned euler_phi(unsigned n);

}  // namespace leapgen
