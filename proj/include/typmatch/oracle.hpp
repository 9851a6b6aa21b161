#pragma once

#include <cstdint>

#include "typmatch/counting.hpp"
#include "typmatch/distribution.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch {

// Exact probability, under n i.i.d. draws of a correlated pair, that
// the first sequence is jointly typical with the pi-permuted second
// sequence. Enumerates all |X|^n |Y|^n outcomes; guarded because the
// scan is (|X||Y|)^n.
double typicality_prob_exact(const JointDistribution& dist,
                             const Permutation& pi, double eps, int n,
                             std::uint64_t guard = (1ull << 26));

// Same probability with both sequences permuted:
// P((pi_x(X^n), pi_y(Y^n)) typical).
double typicality_prob_exact2(const JointDistribution& dist,
                              const Permutation& pi_x, const Permutation& pi_y,
                              double eps, int n,
                              std::uint64_t guard = (1ull << 26));

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte-Carlo estimate of the same probability.
McEstimate typicality_prob_mc(const JointDistribution& dist,
                              const Permutation& pi, double eps, int n,
                              std::uint64_t trials, std::uint64_t seed);

// Check that the probability of observing a given empirical type under
// the model is at most 2^(-n D(type || model)). With every occupied
// cell supported the comparison reduces to the exact integer
// inequality multinomial(n; c) * prod c_i^c_i <= n^n, which is what is
// verified; the log-domain values are reported alongside.
struct TypeProbCheck {
  bool holds = false;
  double log2_prob = 0.0;   // log2 P^n(type class)
  double log2_bound = 0.0;  // -n D(type || model)
};

TypeProbCheck type_prob_bound_check(const TypeCounts& type,
                                    const JointDistribution& dist);

}  // namespace typmatch
