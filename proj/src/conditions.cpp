#include "typmatch/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "typmatch/counting.hpp"
#include "typmatch/matchers.hpp"

namespace typmatch {

namespace {

std::vector<double> alpha_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double a = lo; a < hi - 1e-12; a += step) g.push_back(a);
  g.push_back(hi);
  return g;
}

// Shared pair-matching scan over fixed-point fractions.
ConditionReport pair_margin_scan(const JointDistribution& dist, long long n,
                                 double alpha_hi,
                                 const ConditionOptions& opts) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  const long long N = n * (n - 1) / 2;
  const double eps =
      opts.eps ? *opts.eps : tm_default_eps(static_cast<int>(std::min<long long>(n, 1000000)));

  ConditionReport r;
  r.margin_bits = kInf;
  double max_log_ratio = 0.0;
  for (double a : alpha_grid(0.0, alpha_hi, opts.alpha_step)) {
    double a2 = a * a;
    ExponentResult e = exponent_E_alpha(dist, a2, opts.exp);
    ExponentResult ep = exponent_Eprime_alpha(dist, a2, opts.exp);
    CorrectionTerms ct = correction_terms(N, dist, a2, eps, opts.exp);
    double zeta2 = std::max(ct.zeta, ct.zeta_prime);
    double lhs = 2.0 * (1.0 - a) * std::log2(static_cast<double>(n)) / (n - 1);
    double margin = std::max(e.value, ep.value) - zeta2 - ct.delta_eps - lhs;
    max_log_ratio =
        std::max(max_log_ratio, ct.delta_eps / std::max(eps * dist.table_size(), 1e-300));
    if (margin < r.margin_bits) {
      r.margin_bits = margin;
      r.worst_alpha = a;
      r.worst_point = e.value >= ep.value ? e.minimizer : ep.minimizer;
      r.resolution = std::max(e.resolution, ep.resolution);
    }
  }
  r.satisfied = r.margin_bits > r.resolution;
  r.details.emplace_back("eps", eps);
  r.details.emplace_back("sequence_length", static_cast<double>(N));
  r.details.emplace_back("alpha_hi", alpha_hi);
  // Growth-rate side condition reported as a ratio, not gated on.
  r.details.emplace_back("max_log_ratio_over_log_n",
                         max_log_ratio / std::log2(static_cast<double>(n)));
  return r;
}

}  // namespace

ConditionReport cer_achievable(const JointDistribution& dist, long long n,
                               const ConditionOptions& opts) {
  if (!(opts.alpha_max > 0.0 && opts.alpha_max < 1.0))
    throw std::invalid_argument("alpha_max must lie in (0, 1)");
  return pair_margin_scan(dist, n, opts.alpha_max, opts);
}

ConditionReport partial_matching_achievable(const JointDistribution& dist,
                                            long long n, double beta,
                                            const ConditionOptions& opts) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in [0, 1]");
  if (beta == 0.0) {
    // No wrong labeling falls below a zero overlap requirement, so
    // there is nothing to dominate. The alpha = 0 point is evaluated
    // for reference only.
    ConditionReport point = pair_margin_scan(dist, n, 0.0, opts);
    ConditionReport r;
    r.satisfied = true;
    r.margin_bits = kInf;
    r.resolution = point.resolution;
    r.details = point.details;
    r.details.emplace_back("alpha0_margin", point.margin_bits);
    return r;
  }
  return pair_margin_scan(dist, n, std::min(beta, opts.alpha_max), opts);
}

ConditionReport sbm_achievable(const std::vector<JointDistribution>& joints,
                               const std::vector<int>& sizes, long long n,
                               const ConditionOptions& opts) {
  const int c = static_cast<int>(sizes.size());
  if (c < 1) throw std::invalid_argument("need at least one community");
  long long total = 0;
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("community sizes must be positive");
    total += s;
  }
  if (total != n) throw std::invalid_argument("community sizes must sum to n");
  if (joints.size() != static_cast<std::size_t>(c) * c)
    throw std::invalid_argument("need a c x c table of block joints");
  if (c > 4)
    throw std::invalid_argument("inner grid supported for c <= 4");

  const double nn = static_cast<double>(n);
  // Block weights and divergence evaluators; products precomputed.
  std::vector<std::vector<double>> prods(joints.size());
  for (std::size_t b = 0; b < joints.size(); ++b)
    prods[b] = joints[b].product_of_marginals().pmf();

  auto block_div = [&](int i, int j, double beta) {
    const auto& P = joints[static_cast<std::size_t>(i) * c + j];
    const auto& Q = prods[static_cast<std::size_t>(i) * c + j];
    beta = std::clamp(beta, 0.0, 1.0);
    double d = 0.0;
    for (std::size_t cell = 0; cell < Q.size(); ++cell) {
      double p = P.cell(cell);
      if (p <= 0.0) continue;
      double mix = (1.0 - beta) * Q[cell] + beta * p;
      d += p * std::log2(p / mix);
    }
    return std::max(d, 0.0);
  };

  // Objective at a per-community fixing vector (fractions of n).
  auto phi = [&](const std::vector<double>& af) {
    double v = 0.0;
    for (int i = 0; i < c; ++i) {
      for (int j = i; j < c; ++j) {
        double ni = sizes[i], nj = sizes[j];
        if (i == j) {
          if (sizes[i] < 2) continue;
          double beta = nn * af[i] * (nn * af[i] - 1.0) / (ni * (ni - 1.0));
          v += ni * (ni - 1.0) / (2.0 * nn * nn) * block_div(i, i, beta);
        } else {
          double beta = nn * nn * af[i] * af[j] / (ni * nj);
          v += ni * nj / (nn * nn) * block_div(i, j, beta);
        }
      }
    }
    return v;
  };

  ConditionReport r;
  r.margin_bits = kInf;
  for (double a : alpha_grid(0.0, 1.0 - opts.delta, opts.alpha_step)) {
    double phi_min;
    std::vector<double> argmin(c, 0.0);
    double res = 0.0;
    if (a <= 1e-15) {
      phi_min = phi(argmin);
    } else {
      // Minimize over alpha_i in [0, n_i/n] summing to a; rescaled to
      // the unit simplex for the generic minimizer.
      std::vector<double> lo(c, 0.0), hi(c);
      for (int i = 0; i < c; ++i)
        hi[i] = std::min(1.0, sizes[i] / (nn * a));
      ExponentOptions eo = opts.exp;
      eo.coarse_step = opts.inner_step;
      std::vector<double> af(c);
      ExponentResult inner = minimize_box_simplex(
          lo, hi,
          [&](const std::vector<double>& t) {
            for (int i = 0; i < c; ++i) af[i] = a * t[i];
            return phi(af);
          },
          eo);
      phi_min = inner.value;
      for (int i = 0; i < c; ++i) argmin[i] = a * inner.minimizer[i];
      res = inner.resolution;
    }
    double lhs = 3.0 * (1.0 - a) * std::log2(nn) / nn;
    double margin = phi_min - lhs;
    if (margin < r.margin_bits) {
      r.margin_bits = margin;
      r.worst_alpha = a;
      r.worst_point = argmin;
      r.resolution = res;
    }
  }
  r.satisfied = r.margin_bits > r.resolution;
  r.details.emplace_back("alpha_hi", 1.0 - opts.delta);
  return r;
}

ConditionReport collection_achievable(const JointDistribution& dist,
                                      long long n,
                                      const ConditionOptions& opts) {
  const int m = dist.arity();
  if (m < 2) throw std::invalid_argument("need arity >= 2");
  auto parts = set_partitions(m);
  const int B = static_cast<int>(parts.size());
  if (B > 15) throw std::invalid_argument("signature grid supported for Bell(m) <= 15");
  const double nn = static_cast<double>(n);

  // Meet of two partitions: blocks are the pairwise intersections.
  auto meet_index = [&](int a, int b) {
    std::vector<int> cell_of(m);
    std::vector<std::pair<int, int>> seen;
    std::string rgs(m, '0');
    int next = 0;
    std::vector<int> ga(m), gb(m);
    for (std::size_t bl = 0; bl < parts[a].blocks.size(); ++bl)
      for (int e : parts[a].blocks[bl]) ga[e] = static_cast<int>(bl);
    for (std::size_t bl = 0; bl < parts[b].blocks.size(); ++bl)
      for (int e : parts[b].blocks[bl]) gb[e] = static_cast<int>(bl);
    for (int e = 0; e < m; ++e) {
      std::pair<int, int> key = {ga[e], gb[e]};
      int slot = -1;
      for (std::size_t s = 0; s < seen.size(); ++s)
        if (seen[s] == key) slot = static_cast<int>(s);
      if (slot < 0) {
        seen.push_back(key);
        slot = next++;
      }
      rgs[e] = static_cast<char>('0' + slot);
    }
    for (int k = 0; k < B; ++k)
      if (parts[k].rgs == rgs) return k;
    throw std::logic_error("meet not found among partitions");
  };
  std::vector<std::vector<int>> meet(B, std::vector<int>(B));
  for (int a = 0; a < B; ++a)
    for (int b = 0; b < B; ++b) meet[a][b] = meet_index(a, b);

  std::vector<std::vector<double>> q(B);
  for (int k = 0; k < B; ++k)
    q[k] = dist.partition_marginal_product(parts[k].blocks).pmf();
  std::vector<double> block_counts(B);
  for (int k = 0; k < B; ++k)
    block_counts[k] = static_cast<double>(parts[k].blocks.size());

  const double denom =
      2.0 * (B - 1) * (static_cast<double>(m) * (m - 1) + 1.0);
  const double logn_n = std::log2(nn) / nn;

  // Enumerate signature fraction vectors on the step grid, skipping
  // the all-truth corner (last coordinate equal to 1).
  int steps = static_cast<int>(std::lround(1.0 / opts.weight_step));
  std::vector<int> comp(B, 0);
  std::vector<double> alpha(B), w(B), mix(dist.table_size());
  ConditionReport r;
  r.margin_bits = kInf;

  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == B - 1) {
      comp[k] = left;
      if (comp[B - 1] == steps) return;  // all mass on the truth partition
      for (int t = 0; t < B; ++t)
        alpha[t] = static_cast<double>(comp[t]) / steps;
      std::fill(w.begin(), w.end(), 0.0);
      for (int a = 0; a < B; ++a) {
        if (alpha[a] == 0.0) continue;
        for (int b = 0; b < B; ++b) {
          if (alpha[b] == 0.0) continue;
          w[meet[a][b]] += alpha[a] * alpha[b];
        }
      }
      std::fill(mix.begin(), mix.end(), 0.0);
      for (int t = 0; t < B; ++t) {
        if (w[t] == 0.0) continue;
        for (std::size_t cell = 0; cell < mix.size(); ++cell)
          mix[cell] += w[t] * q[t][cell];
      }
      double rhs = kl_divergence(std::span<const double>(dist.pmf()),
                                 std::span<const double>(mix)) /
                   denom;
      double slots = 0.0;
      for (int t = 0; t < B; ++t) slots += block_counts[t] * alpha[t];
      double lhs = (slots - 1.0) * logn_n;
      double margin = rhs - lhs;
      if (margin < r.margin_bits) {
        r.margin_bits = margin;
        r.worst_alpha = alpha[B - 1];
        r.worst_point = alpha;
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      comp[k] = v;
      rec(k + 1, left - v);
    }
  };
  rec(0, steps);

  r.resolution = opts.weight_step;
  r.satisfied = r.margin_bits > -1e-12;
  r.details.emplace_back("bell", static_cast<double>(B));
  r.details.emplace_back("alpha_last_max", 1.0 - opts.weight_step);
  for (int a = 0; a < B; ++a)
    for (int b = a + 1; b < B; ++b)
      r.details.emplace_back(
          "meet_" + std::to_string(a) + "_" + std::to_string(b),
          static_cast<double>(meet[a][b]));
  return r;
}

ConditionReport converse_necessary(const std::vector<JointDistribution>& joints,
                                   const std::vector<int>& sizes,
                                   long long n) {
  const int c = static_cast<int>(sizes.size());
  if (c < 1) throw std::invalid_argument("need at least one community");
  long long total = 0;
  for (int s : sizes) total += s;
  if (total != n) throw std::invalid_argument("community sizes must sum to n");
  if (joints.size() != static_cast<std::size_t>(c) * c)
    throw std::invalid_argument("need a c x c table of block joints");

  const double nn = static_cast<double>(n);
  ConditionReport r;
  double lhs, rhs;
  if (c == 1) {
    lhs = 2.0 * std::log2(nn) / nn;
    rhs = mutual_information(joints[0]);
  } else {
    lhs = std::log2(nn) / nn;
    rhs = 0.0;
    for (int i = 0; i < c; ++i) {
      for (int j = i; j < c; ++j) {
        double ni = sizes[i], nj = sizes[j];
        double mi =
            mutual_information(joints[static_cast<std::size_t>(i) * c + j]);
        if (i == j)
          rhs += ni * (ni - 1.0) / (2.0 * nn * nn) * mi;
        else
          rhs += ni * nj / (nn * nn) * mi;
      }
    }
  }
  r.margin_bits = rhs - lhs;
  r.satisfied = r.margin_bits >= -1e-12;
  r.resolution = 0.0;
  r.details.emplace_back("lhs", lhs);
  r.details.emplace_back("rhs", rhs);
  return r;
}

SeededRegion seeded_region(const JointDistribution& dist, long long n) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  SeededRegion r;
  r.mutual_info = mutual_information(dist);
  if (r.mutual_info <= 1e-12) return r;  // unmatchable
  r.matchable = true;
  double need = 2.0 * std::log2(static_cast<double>(n)) / r.mutual_info;
  r.lambda_min = static_cast<long long>(std::ceil(need - 1e-9));
  r.side_ratio = r.mutual_info * std::sqrt(static_cast<double>(r.lambda_min));
  return r;
}

ErasureScan erasure_ratio_scan(double s, double alpha0, double alpha_step,
                               double theta, double n_ref, double alpha_max) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("s must lie in (0, 1)");
  if (!(alpha0 > 0.0 && alpha0 < alpha_max && alpha_max < 1.0))
    throw std::invalid_argument("need 0 < alpha0 < alpha_max < 1");

  ErasureScan scan;
  scan.s = s;
  scan.threshold = s / 2.0;
  scan.in_supported_range = (s > 0.25 && s < 0.5);
  scan.p = theta * std::log(n_ref) / n_ref;
  JointDistribution dist = erasure_joint(scan.p, s);

  const double ln2 = std::log(2.0);
  scan.min_ratio_e = kInf;
  scan.min_ratio_eprime = kInf;
  for (double a = 0.0; a <= alpha_max + 1e-12; a += alpha_step) {
    double alpha = std::min(a, alpha_max);
    ErasureScanRow row;
    row.alpha = alpha;
    if (alpha <= alpha0 + 1e-12) {
      row.branch = 0;
      row.exponent_bits = exponent_E_alpha(dist, alpha * alpha).value;
    } else {
      row.branch = 1;
      row.exponent_bits = exponent_Eprime_alpha(dist, alpha * alpha).value;
    }
    row.ratio =
        row.exponent_bits * ln2 / (2.0 * (1.0 - alpha) * scan.p);
    scan.rows.push_back(row);
    if (row.branch == 0 && row.ratio < scan.min_ratio_e) {
      scan.min_ratio_e = row.ratio;
      scan.argmin_e = alpha;
    }
    if (row.branch == 1 && row.ratio < scan.min_ratio_eprime) {
      scan.min_ratio_eprime = row.ratio;
      scan.argmin_eprime = alpha;
    }
  }
  scan.min_ratio = std::min(scan.min_ratio_e, scan.min_ratio_eprime);
  scan.exceeds = scan.min_ratio > scan.threshold;
  return scan;
}

}  // namespace typmatch
