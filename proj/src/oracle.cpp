#include "typmatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "typmatch/rng.hpp"

namespace typmatch {

double typicality_prob_exact2(const JointDistribution& dist,
                              const Permutation& pi_x, const Permutation& pi_y,
                              double eps, int n, std::uint64_t guard) {
  if (dist.arity() != 2) throw std::invalid_argument("bivariate model required");
  if (static_cast<int>(pi_x.size()) != n || !is_permutation(pi_x) ||
      static_cast<int>(pi_y.size()) != n || !is_permutation(pi_y))
    throw std::invalid_argument("permutations must act on the n positions");
  const int lx = dist.alphabets()[0], ly = dist.alphabets()[1];
  double states = std::pow(static_cast<double>(lx) * ly, n);
  if (states > static_cast<double>(guard))
    throw std::invalid_argument("state space exceeds guard");

  TypicalityTest test(dist, eps);
  std::vector<int> xs(n, 0), ys(n, 0);
  TypeCounts type;
  type.alphabets = dist.alphabets();
  type.n = n;
  std::vector<int> dense(static_cast<std::size_t>(lx) * ly);

  double total = 0.0;
  for (;;) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i)
      prob *= dist.cell(static_cast<std::size_t>(xs[i]) * ly + ys[i]);
    if (prob > 0.0) {
      std::fill(dense.begin(), dense.end(), 0);
      for (int i = 0; i < n; ++i)
        ++dense[static_cast<std::size_t>(xs[pi_x[i]]) * ly + ys[pi_y[i]]];
      type.cells.clear();
      for (std::size_t c = 0; c < dense.size(); ++c)
        if (dense[c] > 0) type.cells.emplace_back(c, dense[c]);
      if (test(type)) total += prob;
    }
    // Odometer over (x^n, y^n), y fastest.
    int d = n - 1;
    while (d >= 0 && ++ys[d] == ly) ys[d--] = 0;
    if (d < 0) {
      d = n - 1;
      while (d >= 0 && ++xs[d] == lx) xs[d--] = 0;
      if (d < 0) break;
    }
  }
  return total;
}

double typicality_prob_exact(const JointDistribution& dist,
                             const Permutation& pi, double eps, int n,
                             std::uint64_t guard) {
  return typicality_prob_exact2(dist, identity_permutation(n), pi, eps, n,
                                guard);
}

McEstimate typicality_prob_mc(const JointDistribution& dist,
                              const Permutation& pi, double eps, int n,
                              std::uint64_t trials, std::uint64_t seed) {
  if (dist.arity() != 2) throw std::invalid_argument("bivariate model required");
  if (static_cast<int>(pi.size()) != n || !is_permutation(pi))
    throw std::invalid_argument("pi must permute the n positions");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const int ly = dist.alphabets()[1];

  std::vector<double> cum(dist.table_size());
  double acc = 0.0;
  for (std::size_t c = 0; c < cum.size(); ++c) {
    acc += dist.cell(c);
    cum[c] = acc;
  }
  cum.back() = 1.0;

  TypicalityTest test(dist, eps);
  std::vector<int> xs(n), ys(n), zs(n);
  std::vector<int> dense(dist.table_size());
  TypeCounts type;
  type.alphabets = dist.alphabets();
  type.n = n;

  std::uint64_t hits = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    RandomStream rs(stream_key(seed, "mc-typicality", tr));
    for (int i = 0; i < n; ++i) {
      double u = rs.next_u01();
      std::size_t cell =
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      xs[i] = static_cast<int>(cell / ly);
      ys[i] = static_cast<int>(cell % ly);
    }
    for (int i = 0; i < n; ++i) zs[i] = ys[pi[i]];
    std::fill(dense.begin(), dense.end(), 0);
    for (int i = 0; i < n; ++i)
      ++dense[static_cast<std::size_t>(xs[i]) * ly + zs[i]];
    type.cells.clear();
    for (std::size_t c = 0; c < dense.size(); ++c)
      if (dense[c] > 0) type.cells.emplace_back(c, dense[c]);
    if (test(type)) ++hits;
  }

  McEstimate e;
  e.trials = trials;
  e.estimate = static_cast<double>(hits) / trials;
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / trials);
  return e;
}

TypeProbCheck type_prob_bound_check(const TypeCounts& type,
                                    const JointDistribution& dist) {
  if (type.alphabets != dist.alphabets())
    throw std::invalid_argument("type and model alphabets differ");
  const int n = type.n;
  if (n <= 0) throw std::invalid_argument("empty type");

  TypeProbCheck r;
  bool off_support = false;
  for (const auto& [flat, c] : type.cells)
    if (c > 0 && dist.cell(flat) == 0.0) off_support = true;
  if (off_support) {
    // The type class has probability zero and the divergence is
    // infinite, so the bound holds degenerately.
    r.holds = true;
    r.log2_prob = -kInf;
    r.log2_bound = -kInf;
    return r;
  }

  BigInt lhs = factorial(n);
  for (const auto& [flat, c] : type.cells) {
    lhs /= factorial(c);
    lhs *= boost::multiprecision::pow(BigInt(c), unsigned(c));
  }
  BigInt rhs = boost::multiprecision::pow(BigInt(n), unsigned(n));
  r.holds = lhs <= rhs;

  double log2_multi = log2_big(factorial(n));
  r.log2_prob = 0.0;
  double div = 0.0;
  for (const auto& [flat, c] : type.cells) {
    log2_multi -= log2_big(factorial(c));
    r.log2_prob += c * std::log2(dist.cell(flat));
    double fr = static_cast<double>(c) / n;
    div += fr * std::log2(fr / dist.cell(flat));
  }
  r.log2_prob += log2_multi;
  r.log2_bound = -n * std::max(div, 0.0);
  return r;
}

}  // namespace typmatch
