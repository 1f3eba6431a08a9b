#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjsde/rational.hpp"

namespace hjsde {

// The pair (p,q) defining the cyclic group action diag(e^{2pi i/p}, e^{2pi iq/p})
// on C^2. Requires 0 < q < p, gcd(p,q) = 1. The trivial group is admitted as
// the special value (1,0).
struct QuotientData {
  long long p = 0;
  long long q = 0;

  QuotientData(long long p_, long long q_);
  static QuotientData trivial() { return QuotientData(); }
  bool is_trivial() const { return p == 1; }

 private:
  QuotientData() : p(1), q(0) {}
};

using IntPair = std::pair<Int, Int>;

// Chain (m_j, n_j), j = 0..k+1, encoding a toric resolution:
//   (m_0,n_0) = (0,-1), (m_1,n_1) = (1,0), m_j > 0 for j >= 1,
//   m_j n_{j+1} - m_{j+1} n_j = 1,  m_{k+1} = p, n_{k+1} = q~ with q~ = q (mod p).
// The closing pair (m_{k+2}, n_{k+2}) = (0,1) is derived, not stored.
class AdmissibleSequence {
 public:
  int k() const { return static_cast<int>(pairs_.size()) - 2; }
  int size() const { return static_cast<int>(pairs_.size()); }

  // j in [0, k+2]; j = k+2 yields the closing pair (0,1).
  IntPair pair(int j) const;
  const Int& m(int j) const { return pairs_.at(j).first; }
  const Int& n(int j) const { return pairs_.at(j).second; }
  const std::vector<IntPair>& pairs() const { return pairs_; }

  Int p() const { return pairs_.back().first; }
  // n_{k+1} as stored; end blow-ups shift it by multiples of p.
  Int q_tilde() const { return pairs_.back().second; }
  Int q_mod_p() const;

 private:
  friend AdmissibleSequence minimal_sequence(const QuotientData&);
  friend struct SequenceValidation validate_sequence(const std::vector<IntPair>& raw);
  friend AdmissibleSequence blow_up(const AdmissibleSequence&, int);
  explicit AdmissibleSequence(std::vector<IntPair> pairs) : pairs_(std::move(pairs)) {}
  std::vector<IntPair> pairs_;
};

// Self-intersection chain e_1..e_k (the resolution spheres have S_j.S_j = -e_j).
using SelfIntersectionList = std::vector<Int>;

// Tridiagonal intersection matrix with diagonal -e_j, off-diagonal 1, plus the
// exact leading principal minors and the definiteness flag they certify.
struct IntersectionMatrix {
  std::vector<std::vector<Int>> entries;
  std::vector<Int> leading_minors;
  bool negative_definite = false;
};

enum class C1Class { Negative, Zero, SemiNegative };

// Modified Euclidean algorithm r_{j-1} = r_j e_{j+1} - r_{j+1}, 0 <= r_{j+1} < r_j,
// starting from (p, q). Every quotient satisfies e_j >= 2.
SelfIntersectionList cf_expand(const QuotientData& data);

// Evaluates 1/(e_1-) 1/(e_2-) ... 1/(e_k) as an exact rational in lowest terms.
// Throws ZeroDenominator if a partial denominator vanishes.
Rat cf_evaluate(const SelfIntersectionList& e);

// The unique q~ in (0,p) with q q~ = 1 (mod p).
long long conjugate_q(const QuotientData& data);

AdmissibleSequence minimal_sequence(const QuotientData& data);

struct SequenceValidation {
  std::optional<AdmissibleSequence> sequence;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every admissibility clause and reports all failures as data.
// Signs of each (m,n) are canonicalized before checking.
SequenceValidation validate_sequence(const std::vector<IntPair>& raw);

// Inserts (m_j + m_{j+1}, n_j + n_{j+1}) between positions j and j+1 (0 <= j <= k).
// A blow-up at j = 0 is renormalized by the shear (m,n) -> (m, n + m) so the
// stored sequence keeps (m_1,n_1) = (1,0); this shifts n_{k+1} by p.
AdmissibleSequence blow_up(const AdmissibleSequence& seq, int j);

// e_j = m_{j-1} n_{j+1} - m_{j+1} n_{j-1}, j = 1..k.
SelfIntersectionList self_intersections(const AdmissibleSequence& seq);

IntersectionMatrix intersection_matrix(const AdmissibleSequence& seq);
IntersectionMatrix intersection_matrix(const SelfIntersectionList& e);

// Negative iff all e_j >= 3, Zero iff all e_j = 2, SemiNegative otherwise.
C1Class c1_class(const AdmissibleSequence& seq);
C1Class c1_class(const SelfIntersectionList& e);

const char* to_string(C1Class c);

} // namespace hjsde
