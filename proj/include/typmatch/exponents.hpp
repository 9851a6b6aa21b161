#pragma once

#include <functional>
#include <vector>

#include "typmatch/distribution.hpp"

namespace typmatch {

struct ExponentOptions {
  // Grid refinement stops once a round improves the objective by less
  // than this.
  double tol = 1e-4;
  // Initial grid step per free coordinate (fraction of the coordinate's
  // feasible range when that range is smaller than the step).
  double coarse_step = 0.02;
  // Use log2((n+1)/n) instead of log2(n+1)/n in the second finite-n
  // correction. Off by default; the smaller variant is not an upper
  // bound on the counting slack the term stands in for.
  bool zeta_prime_literal = false;
  // Extra slack added to delta_eps, in units of eps.
  double delta_eps_slack = 0.0;
};

// Value of a constrained minimization together with where it was
// attained and how finely the feasible set was resolved. resolution is
// a conservative accuracy estimate to use as slack when the value
// feeds an inequality check.
struct ExponentResult {
  double value = 0.0;
  std::vector<double> minimizer;
  double resolution = 0.0;
};

// Minimize a convex function over the box-constrained probability
// simplex {t : lo <= t <= hi, sum t = 1}. Coarse grid plus recursive
// refinement when at most 4 coordinates are free, pairwise
// mass-transfer descent otherwise; both finish with a pairwise polish.
ExponentResult minimize_box_simplex(
    const std::vector<double>& lo, const std::vector<double>& hi,
    const std::function<double(const std::vector<double>&)>& f,
    const ExponentOptions& opts = {});

// Exponent of the probability that an independently drawn partner
// sequence aligns typically with a fraction alpha of positions kept:
//   min over row types t' in the marginal box of
//   (1/2) [ (1-alpha) D(t'||P_X) + alpha D(t''||P_X)
//           + D(P || (1-alpha) P_X x P_Y'' + alpha P) ]
// where t'' = (P_X - (1-alpha) t') / alpha and P_Y'' is the channel
// output under t'. At alpha = 0 this is half the mutual information;
// at alpha = 1 it is 0.
ExponentResult exponent_E_alpha(const JointDistribution& dist, double alpha,
                                const ExponentOptions& opts = {});

// Looser exponent minimizing over joint types in the box directly:
//   min ((1-alpha)/3) D(t'||P_X x P_Y) + alpha D(t''||P).
ExponentResult exponent_Eprime_alpha(const JointDistribution& dist,
                                     double alpha,
                                     const ExponentOptions& opts = {});

// Closed-form lower estimate (1/3) D(P || (1-alpha) P_X x P_Y + alpha P).
double exponent_Ehat(const JointDistribution& dist, double alpha);

// Exponent for collections of graphs: given the arity-k attribute
// distribution and a weight per canonical partition of the k
// coordinates (singletons first, single set last, summing to 1),
//   D(P || sum_j w_j prod-of-block-marginals_j)
//   / ((k(k-1) + 1)(B_k - 1)).
double collection_exponent(const JointDistribution& dist,
                           const std::vector<double>& weights);

// Finite-length correction terms for bounds at sequence length n over
// an |X| x |Y| attribute pair alphabet.
struct CorrectionTerms {
  double zeta = 0.0;        // (3/2)|X|^2|Y| log2(n+1)/n + 6|X||Y| log2(n+1)/n
  double zeta_prime = 0.0;  // 4|X||Y| log2(n+1)/n (or the literal variant)
  double delta_eps = 0.0;   // eps |X||Y| max |log2 P/((1-a)PxPy + aP)| + slack
};

CorrectionTerms correction_terms(long long n, const JointDistribution& dist,
                                 double alpha, double eps,
                                 const ExponentOptions& opts = {});

}  // namespace typmatch
