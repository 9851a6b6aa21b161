#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "typmatch/permutation.hpp"

namespace typmatch {

// Counts here grow past 2^64 well before n = 20, so everything is
// exact arbitrary-precision integers.
using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(int n);
BigInt binomial(int n, int k);
// Multinomial coefficient n! / prod(counts[i]!); counts must sum to n.
BigInt multinomial(int n, const std::vector<int>& counts);
// Number of derangements, via the recurrence
// !n = (n-1)(!(n-1) + !(n-2)), !0 = 1, !1 = 0.
BigInt derangement_count(int n);
BigInt bell_number(int k);

// log2 of a positive big integer (for reporting; counts stay exact).
double log2_big(const BigInt& v);

struct CountBounds {
  BigInt lower;
  BigInt upper;
};

// Permutations of n elements with exactly m fixed points. The exact
// count is C(n, m) * !(n-m). The bracketing bounds n!/(m! (n-m)) and
// n!/m! are only both meaningful for m <= n-2: with m = n-1 the true
// count is 0, and with m = n the lower bound's denominator vanishes.
struct FixedPointCount {
  BigInt exact;
  BigInt lower;
  BigInt upper;
  bool lower_valid = false;  // m <= n-2
};

FixedPointCount count_fixed_point_perms(int n, int m);

// Tuples (pi_1, ..., pi_k) of permutations of n elements that disagree
// pairwise everywhere, with pi_1 = identity. For k = 1 the count is 1
// and for k = 2 it is !n. Bounds: ((n-k+1)!)^(k-1) from greedy
// completion and (!n)^(k-1) from dropping all but consecutive
// constraints.
CountBounds k_fold_derangement_bounds(int n, int k);

// Exact value by exhaustive search over (k-1)-tuples; guarded because
// the search space is (n!)^(k-1).
BigInt k_fold_derangement_exact(int n, int k,
                                unsigned long long guard = 100000000ull);

// Set partition of {0, ..., k-1}: blocks sorted internally and ordered
// by smallest element; rgs is the restricted-growth string.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
  std::string rgs;
};

// All partitions of a k-set in canonical order: block count descending
// (all singletons first, the single set last), ties broken by
// restricted-growth string ascending.
std::vector<SetPartition> set_partitions(int k);

// Histogram over canonical partitions induced by a tuple of k
// permutations: index i contributes to the partition that groups l ~ l'
// whenever pi_l^-1(i) = pi_l'^-1(i).
struct BellSignature {
  int k = 0;
  int n = 0;
  std::vector<long long> counts;  // length = Bell(k), sums to n
};

BellSignature bell_signature(const std::vector<Permutation>& perms);

// Bounds on how many tuples (id, pi_2, ..., pi_k) realize a given
// signature (i_1, ..., i_B): the multinomial times a product of
// per-partition derangement factors below, times n^(sum |P_j| i_j - n)
// above.
CountBounds bell_count_bounds(int n, const BellSignature& sig);

}  // namespace typmatch
