#include "hjsde/resolution.hpp"

#include <numeric>
#include <sstream>

#include "hjsde/errors.hpp"

namespace hjsde {

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
          s.find('E') != std::string::npos) {
        // decimal literal: exactness is not preserved, rounds through double
        return Rat(std::stod(s));
      }
      return Rat(Int(s));
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw ZeroDenominator("rational literal with zero denominator: " + s);
    (void)0;
    return make_rat(num, den);
  } catch (const std::exception& e) {
    throw BadInput("cannot parse rational '" + s + "': " + e.what());
  }
}

QuotientData::QuotientData(long long p_, long long q_) : p(p_), q(q_) {
  if (p == 1 && q == 0) return; // trivial group
  if (p <= 0 || q <= 0 || q >= p) throw BadInput("QuotientData requires 0 < q < p");
  if (std::gcd(p, q) != 1) throw BadInput("QuotientData requires gcd(p,q) = 1");
}

IntPair AdmissibleSequence::pair(int j) const {
  if (j == size()) return {Int(0), Int(1)};
  if (j < 0 || j > size()) throw IndexOutOfRange("sequence index out of range");
  return pairs_[static_cast<size_t>(j)];
}

Int AdmissibleSequence::q_mod_p() const {
  Int r = q_tilde() % p();
  if (r < 0) r += p();
  return r;
}

SelfIntersectionList cf_expand(const QuotientData& data) {
  SelfIntersectionList e;
  Int prev = data.p, cur = data.q;
  while (cur != 0) {
    // smallest e with e*cur >= prev gives 0 <= next < cur
    Int q = prev / cur;
    if (q * cur < prev) q += 1;
    e.push_back(q);
    Int next = q * cur - prev;
    prev = cur;
    cur = next;
  }
  return e;
}

Rat cf_evaluate(const SelfIntersectionList& e) {
  Rat r = 0;
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    Rat den = Rat(*it) - r;
    if (den == 0) throw ZeroDenominator("continued fraction hit a zero denominator");
    r = Rat(1) / den;
  }
  return r;
}

long long conjugate_q(const QuotientData& data) {
  if (data.is_trivial()) return 1;
  // extended Euclid for q^{-1} mod p
  long long t = 0, new_t = 1;
  long long r = data.p, new_r = data.q;
  while (new_r != 0) {
    long long quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  if (t < 0) t += data.p;
  return t;
}

AdmissibleSequence minimal_sequence(const QuotientData& data) {
  std::vector<IntPair> pairs{{Int(0), Int(-1)}, {Int(1), Int(0)}};
  if (!data.is_trivial()) {
    // convergents of 1/(e_1-)...1/(e_j): x_{j+1} = e_j x_j - x_{j-1}
    for (const Int& e : cf_expand(data)) {
      const auto& [m1, n1] = pairs[pairs.size() - 1];
      const auto& [m0, n0] = pairs[pairs.size() - 2];
      pairs.emplace_back(e * m1 - m0, e * n1 - n0);
    }
  }
  return AdmissibleSequence(std::move(pairs));
}

namespace {

IntPair canonical_sign(const IntPair& pr) {
  const auto& [m, n] = pr;
  if (m < 0 || (m == 0 && n > 0)) return {-m, -n};
  return pr;
}

} // namespace

SequenceValidation validate_sequence(const std::vector<IntPair>& raw) {
  SequenceValidation out;
  auto fail = [&out](const std::string& msg) { out.violations.push_back(msg); };

  if (raw.size() < 2) {
    fail("sequence needs at least the two anchor pairs (0,-1), (1,0)");
    return out;
  }
  std::vector<IntPair> pairs;
  pairs.reserve(raw.size());
  for (const auto& pr : raw) pairs.push_back(canonical_sign(pr));

  const int last = static_cast<int>(pairs.size()) - 1;
  if (pairs[0] != IntPair{0, -1}) fail("(m_0,n_0) must be (0,-1)");
  if (pairs[1] != IntPair{1, 0}) fail("(m_1,n_1) must be (1,0)");
  for (int j = 1; j <= last; ++j) {
    if (pairs[j].first <= 0) {
      std::ostringstream os;
      os << "m_" << j << " must be positive";
      fail(os.str());
    }
  }
  for (int j = 0; j <= last; ++j) {
    if (gcd(pairs[j].first, pairs[j].second) > 1) {
      std::ostringstream os;
      os << "gcd(m_" << j << ", n_" << j << ") != 1";
      fail(os.str());
    }
  }
  for (int j = 0; j < last; ++j) {
    Int det = pairs[j].first * pairs[j + 1].second - pairs[j + 1].first * pairs[j].second;
    if (det != 1) {
      std::ostringstream os;
      os << "determinant violation at j=" << j << ": m_j n_{j+1} - m_{j+1} n_j = " << det;
      fail(os.str());
    }
  }
  if (pairs[last].first < 2)
    fail("endpoint violation: m_{k+1} must be >= 2 to match a nontrivial p");

  if (out.violations.empty()) out.sequence = AdmissibleSequence(std::move(pairs));
  return out;
}

AdmissibleSequence blow_up(const AdmissibleSequence& seq, int j) {
  if (j < 0 || j > seq.k()) throw IndexOutOfRange("blow_up index must satisfy 0 <= j <= k");
  std::vector<IntPair> pairs = seq.pairs();
  IntPair inserted{pairs[j].first + pairs[j + 1].first, pairs[j].second + pairs[j + 1].second};
  pairs.insert(pairs.begin() + j + 1, inserted);
  if (j == 0) {
    // restore (m_1,n_1) = (1,0): shear fixes (0,-1), shifts n_{k+1} by p
    for (auto& [m, n] : pairs) n += m;
  }
  return AdmissibleSequence(std::move(pairs));
}

SelfIntersectionList self_intersections(const AdmissibleSequence& seq) {
  SelfIntersectionList e;
  for (int j = 1; j <= seq.k(); ++j)
    e.push_back(seq.m(j - 1) * seq.n(j + 1) - seq.m(j + 1) * seq.n(j - 1));
  return e;
}

IntersectionMatrix intersection_matrix(const SelfIntersectionList& e) {
  const int k = static_cast<int>(e.size());
  IntersectionMatrix out;
  out.entries.assign(k, std::vector<Int>(k, Int(0)));
  for (int i = 0; i < k; ++i) {
    out.entries[i][i] = -e[i];
    if (i + 1 < k) {
      out.entries[i][i + 1] = 1;
      out.entries[i + 1][i] = 1;
    }
  }
  // tridiagonal continuant: D_j = -e_j D_{j-1} - D_{j-2}
  Int d_prev2 = 1, d_prev1 = 1;
  out.negative_definite = k > 0;
  for (int i = 0; i < k; ++i) {
    Int d = -e[i] * d_prev1 - (i > 0 ? d_prev2 : Int(0));
    out.leading_minors.push_back(d);
    bool sign_ok = (i % 2 == 0) ? (d < 0) : (d > 0);
    if (!sign_ok) out.negative_definite = false;
    d_prev2 = std::exchange(d_prev1, d);
  }
  return out;
}

IntersectionMatrix intersection_matrix(const AdmissibleSequence& seq) {
  return intersection_matrix(self_intersections(seq));
}

C1Class c1_class(const SelfIntersectionList& e) {
  bool all_ge3 = true, all_eq2 = true;
  for (const Int& ej : e) {
    if (ej < 3) all_ge3 = false;
    if (ej != 2) all_eq2 = false;
  }
  if (!e.empty() && all_ge3) return C1Class::Negative;
  if (!e.empty() && all_eq2) return C1Class::Zero;
  return C1Class::SemiNegative;
}

C1Class c1_class(const AdmissibleSequence& seq) { return c1_class(self_intersections(seq)); }

const char* to_string(C1Class c) {
  switch (c) {
    case C1Class::Negative: return "Negative";
    case C1Class::Zero: return "Zero";
    case C1Class::SemiNegative: return "SemiNegative";
  }
  return "?";
}

} // namespace hjsde
