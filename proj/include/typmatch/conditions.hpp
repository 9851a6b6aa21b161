#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "typmatch/distribution.hpp"
#include "typmatch/exponents.hpp"

namespace typmatch {

// Outcome of a finite-n achievability or converse predicate. The
// margin is the worst (smallest) slack of the underlying inequality in
// bits over the scanned grid; satisfied means it clears the grid
// resolution. Side conditions that only constrain sequences, not a
// single instance, are reported under details instead of gating.
struct ConditionReport {
  bool satisfied = false;
  double margin_bits = 0.0;
  double worst_alpha = 0.0;
  std::vector<double> worst_point;  // inner minimizer / weight vector
  double resolution = 0.0;
  std::vector<std::pair<std::string, double>> details;
};

struct ConditionOptions {
  double alpha_step = 0.01;
  double alpha_max = 0.95;
  double inner_step = 0.02;   // community fixing-fraction grid
  double weight_step = 0.05;  // collection signature simplex grid
  double delta = 0.05;        // community scan stops at alpha = 1 - delta
  std::optional<double> eps;  // typicality band for the eps correction
  ExponentOptions exp;
};

// Whole-graph matching of an i.i.d. pair succeeds when, for every
// fixed-point fraction alpha of a wrong labeling,
//   2 (1 - alpha) log2(n) / (n - 1)
//     <= max(E_{alpha^2}, E'_{alpha^2}) - corrections.
// Scans alpha over [0, alpha_max].
ConditionReport cer_achievable(const JointDistribution& dist, long long n,
                               const ConditionOptions& opts = {});

// Same inequality restricted to alpha in [0, beta]: only labelings
// fixing less than a beta fraction count as errors. beta = 0 leaves
// nothing to dominate and is vacuously satisfied (the alpha = 0 point
// margin is still reported).
ConditionReport partial_matching_achievable(const JointDistribution& dist,
                                            long long n, double beta,
                                            const ConditionOptions& opts = {});

// Community-structured sufficiency: for every total fixing fraction
// alpha, the minimum over per-community fractions alpha_i (alpha_i <=
// n_i/n, summing to alpha) of the weighted block divergences must beat
// 3 (1 - alpha) log2(n) / n. joints is the full c x c block table.
ConditionReport sbm_achievable(const std::vector<JointDistribution>& joints,
                               const std::vector<int>& sizes, long long n,
                               const ConditionOptions& opts = {});

// Collection sufficiency: for every gridded signature fraction vector
// (alpha_1..alpha_B) over the canonical partitions with the all-truth
// coordinate bounded away from 1,
//   (sum_k |P_k| alpha_k - 1) log2(n)/n
//     <= D(P || sum_k w_k Q_k) / (2 (B-1) (m(m-1)+1))
// with w_k = alpha_k^2 + 2 sum over unordered pairs whose blockwise
// meet is P_k, and Q_k the partition marginal product.
ConditionReport collection_achievable(const JointDistribution& dist,
                                      long long n,
                                      const ConditionOptions& opts = {});

// Necessary condition: log2(n)/n at most the size-weighted sum of
// block mutual informations; with a single community the pair form
// 2 log2(n)/n <= I(X;X') is used.
ConditionReport converse_necessary(const std::vector<JointDistribution>& joints,
                                   const std::vector<int>& sizes, long long n);

// Seed budget for seeded matching. side_ratio reports the growth
// condition I * sqrt(lambda) (meaningful only as a sequence property).
struct SeededRegion {
  bool matchable = false;
  long long lambda_min = -1;
  double mutual_info = 0.0;
  double side_ratio = 0.0;
};

SeededRegion seeded_region(const JointDistribution& dist, long long n);

// Sparse erasure-pair scan: with edge probability p = theta ln(n)/n at
// a reference size, the exponent-to-rate ratio E_{alpha^2}/(2(1-alpha)p)
// (in nats) is scanned on [0, alpha0] and with E' on [alpha0,
// alpha_max]; matching at erasure rate s needs the minimum to exceed
// s/2.
struct ErasureScanRow {
  double alpha = 0.0;
  double exponent_bits = 0.0;
  double ratio = 0.0;
  int branch = 0;  // 0: E, 1: E'
};

struct ErasureScan {
  double s = 0.0;
  double p = 0.0;
  double threshold = 0.0;  // s/2
  bool in_supported_range = true;  // s in (1/4, 1/2)
  double min_ratio_e = 0.0;
  double argmin_e = 0.0;
  double min_ratio_eprime = 0.0;
  double argmin_eprime = 0.0;
  double min_ratio = 0.0;
  bool exceeds = false;
  std::vector<ErasureScanRow> rows;
};

ErasureScan erasure_ratio_scan(double s, double alpha0 = 0.8,
                               double alpha_step = 0.01, double theta = 1.0,
                               double n_ref = 1e6, double alpha_max = 0.95);

}  // namespace typmatch
