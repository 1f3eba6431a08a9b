#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace hjsde {

// Exact arithmetic carriers for the combinatorial layer. All sequence and
// profile identities are integer/rational identities and must hold bit-exactly.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }
inline double to_double(const Int& n) { return n.template convert_to<double>(); }

// two-argument Rat construction with sign normalization (boost requires den > 0)
inline Rat make_rat(Int num, Int den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rat(num, den);
}

// "num/den" or plain integer; lowest terms on output.
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);

} // namespace hjsde
