#include "typmatch/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "typmatch/counting.hpp"

namespace typmatch {

namespace {

constexpr double kFeas = 1e-12;

double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

// Golden-section minimization of a convex 1-D function on [a, b].
template <typename F>
double golden_min(F&& g, double a, double b, double& best_x) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    }
  }
  best_x = f1 <= f2 ? x1 : x2;
  return std::min(f1, f2);
}

}  // namespace

ExponentResult minimize_box_simplex(
    const std::vector<double>& lo, const std::vector<double>& hi,
    const std::function<double(const std::vector<double>&)>& f,
    const ExponentOptions& opts) {
  const int K = static_cast<int>(lo.size());
  if (K < 1 || hi.size() != lo.size())
    throw std::invalid_argument("box bounds of equal positive size required");
  double lo_sum = 0.0, hi_sum = 0.0;
  for (int i = 0; i < K; ++i) {
    if (lo[i] > hi[i] + kFeas)
      throw std::invalid_argument("box has lo > hi");
    lo_sum += lo[i];
    hi_sum += hi[i];
  }
  if (lo_sum > 1.0 + 1e-9 || hi_sum < 1.0 - 1e-9)
    throw std::invalid_argument("box does not meet the simplex");

  if (K == 1) {
    std::vector<double> t = {1.0};
    return {f(t), t, 0.0};
  }

  std::vector<double> t(K);
  // Evaluate with the last coordinate implied by the others.
  auto eval_free = [&](const std::vector<double>& free_vals) {
    double s = 0.0;
    for (int i = 0; i < K - 1; ++i) {
      t[i] = free_vals[i];
      s += free_vals[i];
    }
    double last = 1.0 - s;
    if (last < lo[K - 1] - 1e-9 || last > hi[K - 1] + 1e-9) return kInf;
    t[K - 1] = std::clamp(last, lo[K - 1], hi[K - 1]);
    return f(t);
  };

  double best_v = kInf;
  std::vector<double> best_free(K - 1);
  double resolution = 0.0;

  const int free_dims = K - 1;
  if (free_dims <= 4) {
    // Product grid over the free coordinates, recursively refined
    // around the incumbent.
    std::vector<double> center(free_dims), halfw(free_dims);
    for (int i = 0; i < free_dims; ++i) {
      center[i] = 0.5 * (lo[i] + hi[i]);
      halfw[i] = 0.5 * (hi[i] - lo[i]);
    }
    long long budget = 600000;
    int pts = std::max(
        2, static_cast<int>(std::pow(double(budget), 1.0 / free_dims)));
    auto coarse_pts = [&](double range) {
      int want = static_cast<int>(std::ceil(range / opts.coarse_step)) + 1;
      return std::clamp(want, 2, std::min(pts, 51));
    };

    std::vector<double> spacing(free_dims, 0.0);
    std::vector<std::vector<double>> axes(free_dims);
    std::vector<double> cur(free_dims);
    auto scan = [&](bool coarse) {
      for (int i = 0; i < free_dims; ++i) {
        double a = std::max(lo[i], center[i] - halfw[i]);
        double b = std::min(hi[i], center[i] + halfw[i]);
        int np = coarse ? coarse_pts(b - a) : 7;
        axes[i].clear();
        if (b - a < 1e-15) {
          axes[i].push_back(a);
          spacing[i] = 0.0;
        } else {
          for (int p = 0; p < np; ++p)
            axes[i].push_back(a + (b - a) * p / (np - 1));
          spacing[i] = (b - a) / (np - 1);
        }
      }
      std::vector<std::size_t> idx(free_dims, 0);
      for (;;) {
        for (int i = 0; i < free_dims; ++i) cur[i] = axes[i][idx[i]];
        double v = eval_free(cur);
        if (v < best_v) {
          best_v = v;
          best_free = cur;
        }
        int d = free_dims - 1;
        while (d >= 0 && ++idx[d] == axes[d].size()) idx[d--] = 0;
        if (d < 0) break;
      }
    };

    scan(true);
    for (int round = 0; round < 40; ++round) {
      double prev = best_v;
      center = best_free;
      for (int i = 0; i < free_dims; ++i) halfw[i] = std::max(spacing[i], 1e-14);
      scan(false);
      if (prev - best_v < opts.tol && round >= 2) break;
    }
    resolution = *std::max_element(spacing.begin(), spacing.end());
  } else {
    // Too many coordinates for a grid: start from the box point that
    // meets the simplex by linear interpolation and let the pairwise
    // polish below do the descent (the objectives are convex, and
    // pairwise transfers span the tangent space of the constraint).
    double theta = (hi_sum - lo_sum) > 0 ? (1.0 - lo_sum) / (hi_sum - lo_sum) : 0.0;
    for (int i = 0; i < free_dims; ++i)
      best_free[i] = lo[i] + theta * (hi[i] - lo[i]);
    best_v = eval_free(best_free);
    resolution = opts.tol;
  }

  // Pairwise mass-transfer polish over all K coordinates.
  std::vector<double> full(K);
  {
    double s = 0.0;
    for (int i = 0; i < free_dims; ++i) {
      full[i] = best_free[i];
      s += full[i];
    }
    full[K - 1] = std::clamp(1.0 - s, lo[K - 1], hi[K - 1]);
  }
  if (best_v < kInf) {
    double cur_v = f(full);
    for (int sweep = 0; sweep < 200; ++sweep) {
      double before = cur_v;
      for (int i = 0; i < K; ++i) {
        for (int j = i + 1; j < K; ++j) {
          double dmin = std::max(lo[i] - full[i], full[j] - hi[j]);
          double dmax = std::min(hi[i] - full[i], full[j] - lo[j]);
          if (dmax - dmin < 1e-14) continue;
          auto g = [&](double d) {
            std::vector<double> u = full;
            u[i] += d;
            u[j] -= d;
            return f(u);
          };
          double xbest = 0.0;
          double v = golden_min(g, dmin, dmax, xbest);
          if (v < cur_v - 1e-15) {
            full[i] += xbest;
            full[j] -= xbest;
            cur_v = v;
          }
        }
      }
      if (before - cur_v < 1e-12 && sweep >= 1) break;
    }
    best_v = cur_v;
  }

  ExponentResult r;
  r.value = best_v;
  r.minimizer = full;
  r.resolution = std::max(resolution * resolution, 1e-9);
  return r;
}

namespace {
void require_pair(const JointDistribution& dist) {
  if (dist.arity() != 2)
    throw std::invalid_argument("bivariate distribution required");
}
void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
}
}  // namespace

ExponentResult exponent_E_alpha(const JointDistribution& dist, double alpha,
                                const ExponentOptions& opts) {
  require_pair(dist);
  require_alpha(alpha);
  const int lx = dist.alphabets()[0], ly = dist.alphabets()[1];
  std::vector<double> px = dist.marginal({0}).pmf();

  if (alpha == 0.0) return {0.5 * mutual_information(dist), px, 0.0};
  if (alpha == 1.0) return {0.0, px, 0.0};

  std::vector<double> lo(lx), hi(lx);
  for (int x = 0; x < lx; ++x) {
    lo[x] = std::max(0.0, (px[x] - alpha) / (1.0 - alpha));
    hi[x] = std::min(1.0, px[x] / (1.0 - alpha));
  }
  // Channel rows P(y|x); rows with zero marginal never carry mass.
  std::vector<double> cond(static_cast<std::size_t>(lx) * ly, 0.0);
  for (int x = 0; x < lx; ++x)
    if (px[x] > 0.0)
      for (int y = 0; y < ly; ++y)
        cond[static_cast<std::size_t>(x) * ly + y] =
            dist.cell(static_cast<std::size_t>(x) * ly + y) / px[x];

  std::vector<double> t2(lx), py2(ly);
  auto f = [&, alpha](const std::vector<double>& t1) {
    double v1 = 0.0;
    for (int x = 0; x < lx; ++x) {
      if (t1[x] <= 0.0) continue;
      if (px[x] <= 0.0) return kInf;
      v1 += t1[x] * std::log2(t1[x] / px[x]);
    }
    double v2 = 0.0;
    for (int x = 0; x < lx; ++x) {
      double u = (px[x] - (1.0 - alpha) * t1[x]) / alpha;
      t2[x] = std::max(u, 0.0);
      if (t2[x] <= 0.0) continue;
      if (px[x] <= 0.0) return kInf;
      v2 += t2[x] * std::log2(t2[x] / px[x]);
    }
    std::fill(py2.begin(), py2.end(), 0.0);
    for (int x = 0; x < lx; ++x) {
      if (t1[x] <= 0.0) continue;
      const double* row = &cond[static_cast<std::size_t>(x) * ly];
      for (int y = 0; y < ly; ++y) py2[y] += t1[x] * row[y];
    }
    double v3 = 0.0;
    for (int x = 0; x < lx; ++x) {
      for (int y = 0; y < ly; ++y) {
        double p = dist.cell(static_cast<std::size_t>(x) * ly + y);
        if (p <= 0.0) continue;
        double mix = (1.0 - alpha) * px[x] * py2[y] + alpha * p;
        v3 += p * std::log2(p / mix);
      }
    }
    return 0.5 * ((1.0 - alpha) * std::max(v1, 0.0) +
                  alpha * std::max(v2, 0.0) + std::max(v3, 0.0));
  };
  return minimize_box_simplex(lo, hi, f, opts);
}

ExponentResult exponent_Eprime_alpha(const JointDistribution& dist,
                                     double alpha,
                                     const ExponentOptions& opts) {
  require_pair(dist);
  require_alpha(alpha);
  const std::vector<double>& p = dist.pmf();
  std::vector<double> q = dist.product_of_marginals().pmf();

  if (alpha == 0.0) return {mutual_information(dist) / 3.0, p, 0.0};
  if (alpha == 1.0) return {0.0, p, 0.0};

  const std::size_t K = p.size();
  std::vector<double> lo(K), hi(K);
  for (std::size_t c = 0; c < K; ++c) {
    lo[c] = std::max(0.0, (p[c] - alpha) / (1.0 - alpha));
    hi[c] = std::min(1.0, p[c] / (1.0 - alpha));
  }
  std::vector<double> t2(K);
  auto f = [&, alpha](const std::vector<double>& t1) {
    double v1 = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
      if (t1[c] <= 0.0) continue;
      if (q[c] <= 0.0) return kInf;
      v1 += t1[c] * std::log2(t1[c] / q[c]);
    }
    double v2 = 0.0;
    for (std::size_t c = 0; c < K; ++c) {
      double u = (p[c] - (1.0 - alpha) * t1[c]) / alpha;
      t2[c] = std::max(u, 0.0);
      if (t2[c] <= 0.0) continue;
      if (p[c] <= 0.0) return kInf;
      v2 += t2[c] * std::log2(t2[c] / p[c]);
    }
    return ((1.0 - alpha) / 3.0) * std::max(v1, 0.0) +
           alpha * std::max(v2, 0.0);
  };
  return minimize_box_simplex(lo, hi, f, opts);
}

double exponent_Ehat(const JointDistribution& dist, double alpha) {
  require_pair(dist);
  require_alpha(alpha);
  std::vector<double> q = dist.product_of_marginals().pmf();
  const std::vector<double>& p = dist.pmf();
  std::vector<double> mix(p.size());
  for (std::size_t c = 0; c < p.size(); ++c)
    mix[c] = (1.0 - alpha) * q[c] + alpha * p[c];
  return kl_bits(p, mix) / 3.0;
}

double collection_exponent(const JointDistribution& dist,
                           const std::vector<double>& weights) {
  const int k = dist.arity();
  if (k < 2) throw std::invalid_argument("collection exponent needs arity >= 2");
  auto parts = set_partitions(k);
  if (weights.size() != parts.size())
    throw std::invalid_argument("one weight per partition required");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");

  std::vector<double> mix(dist.table_size(), 0.0);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (weights[j] == 0.0) continue;
    std::vector<double> qj =
        dist.partition_marginal_product(parts[j].blocks).pmf();
    for (std::size_t c = 0; c < mix.size(); ++c) mix[c] += weights[j] * qj[c];
  }
  double denom = (static_cast<double>(k) * (k - 1) + 1.0) *
                 (static_cast<double>(parts.size()) - 1.0);
  return kl_bits(dist.pmf(), mix) / denom;
}

CorrectionTerms correction_terms(long long n, const JointDistribution& dist,
                                 double alpha, double eps,
                                 const ExponentOptions& opts) {
  require_pair(dist);
  require_alpha(alpha);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double lx = dist.alphabets()[0], ly = dist.alphabets()[1];
  const double nn = static_cast<double>(n);
  CorrectionTerms ct;
  ct.zeta = (1.5 * lx * lx * ly + 6.0 * lx * ly) * std::log2(nn + 1.0) / nn;
  ct.zeta_prime = opts.zeta_prime_literal
                      ? 4.0 * lx * ly * std::log2((nn + 1.0) / nn)
                      : 4.0 * lx * ly * std::log2(nn + 1.0) / nn;

  std::vector<double> q = dist.product_of_marginals().pmf();
  double maxlog = 0.0;
  for (std::size_t c = 0; c < q.size(); ++c) {
    double p = dist.cell(c);
    if (p <= 0.0) continue;
    double mix = (1.0 - alpha) * q[c] + alpha * p;
    maxlog = std::max(maxlog, std::abs(std::log2(p / mix)));
  }
  ct.delta_eps = eps * lx * ly * maxlog + opts.delta_eps_slack * eps;
  return ct;
}

}  // namespace typmatch
