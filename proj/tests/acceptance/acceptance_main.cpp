// Acceptance suite: ten end-to-end checks of the library against
// independent enumeration, closed forms and simulation, printed one
// pass/fail line each. Exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support/brute.hpp"
#include "typmatch/conditions.hpp"
#include "typmatch/counting.hpp"
#include "typmatch/distribution.hpp"
#include "typmatch/experiment.hpp"
#include "typmatch/exponents.hpp"
#include "typmatch/generators.hpp"
#include "typmatch/graph.hpp"
#include "typmatch/matchers.hpp"
#include "typmatch/oracle.hpp"
#include "typmatch/permutation.hpp"
#include "typmatch/rng.hpp"

using namespace typmatch;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %2d %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

JointDistribution random_joint2x2(RandomStream& rs, double floor = 0.02) {
  std::vector<double> pmf(4);
  double total = 0.0;
  for (double& p : pmf) total += (p = rs.next_u01() + floor);
  for (double& p : pmf) p /= total;
  return JointDistribution({2, 2}, pmf);
}

JointDistribution diagonal_uniform(int l) {
  std::vector<double> pmf(static_cast<std::size_t>(l) * l, 0.0);
  for (int a = 0; a < l; ++a)
    pmf[static_cast<std::size_t>(a) * l + a] = 1.0 / l;
  return JointDistribution({l, l}, pmf);
}

// 1. Relabeling equivalences of the exact typicality probability.
void criterion_1() {
  const int n = 6;
  const double eps = 0.15;
  std::vector<JointDistribution> dists{
      JointDistribution({2, 2}, {0.4, 0.1, 0.2, 0.3}),
      JointDistribution({2, 2}, {0.5, 0.0, 0.25, 0.25}),
      JointDistribution({2, 2}, {0.7, 0.1, 0.1, 0.1})};
  double worst = 0.0;
  RandomStream rs(1001);
  for (const auto& d : dists) {
    Permutation id = identity_permutation(n);
    double base = typicality_prob_exact2(d, id, id, eps, n);

    // (i) One permutation applied to both sides changes nothing.
    for (int t = 0; t < 3; ++t) {
      Permutation pi = id;
      rs.shuffle(pi);
      double moved = typicality_prob_exact2(d, pi, pi, eps, n);
      worst = std::max(worst, std::abs(moved - base));
    }

    // (ii) Any permutation matches the standard one of its signature.
    for (int t = 0; t < 3; ++t) {
      Permutation pi = id;
      rs.shuffle(pi);
      Permutation std_pi = standard_permutation(cycle_decompose(pi).signature);
      worst = std::max(worst,
                       std::abs(typicality_prob_exact(d, pi, eps, n) -
                                typicality_prob_exact(d, std_pi, eps, n)));
    }

    // (iii) A two-sided pair reduces to its relative permutation.
    for (int t = 0; t < 3; ++t) {
      Permutation px = id, py = id;
      rs.shuffle(px);
      rs.shuffle(py);
      Permutation rel = compose(inverse_permutation(px), py);
      Permutation std_pi = standard_permutation(cycle_decompose(rel).signature);
      worst = std::max(worst,
                       std::abs(typicality_prob_exact2(d, px, py, eps, n) -
                                typicality_prob_exact(d, std_pi, eps, n)));
    }

    // (iv) A permutation and its inverse are equiprobable.
    for (int t = 0; t < 3; ++t) {
      Permutation pi = id;
      rs.shuffle(pi);
      worst = std::max(
          worst,
          std::abs(typicality_prob_exact(d, pi, eps, n) -
                   typicality_prob_exact(d, inverse_permutation(pi), eps, n)));
    }
  }
  report(1, "relabeling equivalences of exact probabilities", worst <= 1e-12,
         "max |delta| = " + fmt(worst));
}

// 2. Exact probabilities dominated by all three exponent bounds.
void criterion_2() {
  const int n = 8;
  JointDistribution d({2, 2}, {0.4, 0.1, 0.2, 0.3});
  ExponentOptions eo;
  int violations = 0, rows = 0;
  for (const auto& sig : all_cycle_signatures(n)) {
    Permutation pi = standard_permutation(sig);
    double alpha = static_cast<double>(sig.m) / n;
    ExponentResult e = exponent_E_alpha(d, alpha, eo);
    ExponentResult ep = exponent_Eprime_alpha(d, alpha, eo);
    double eh = exponent_Ehat(d, alpha);
    for (double eps : {0.05, 0.1}) {
      double exact = typicality_prob_exact(d, pi, eps, n);
      CorrectionTerms ct = correction_terms(n, d, alpha, eps, eo);
      double b_e =
          std::exp2(-n * (e.value - e.resolution - ct.zeta - ct.delta_eps));
      double b_ep = std::exp2(
          -n * (ep.value - ep.resolution - ct.zeta_prime - ct.delta_eps));
      double b_eh = std::exp2(-n * (eh - ct.zeta_prime - ct.delta_eps / 3.0));
      ++rows;
      if (exact > b_e || exact > b_ep || exact > b_eh) ++violations;
    }
  }
  report(2, "exponent bounds dominate exact probabilities",
         violations == 0 && rows > 0,
         std::to_string(rows) + " rows, " + std::to_string(violations) +
             " violations");
}

// 3. Counting formulas and bounds against exhaustive enumeration.
void criterion_3() {
  CountingReport rep = verify_counting(7);
  report(3, "counting formulas vs enumeration", rep.ok,
         std::to_string(rep.checks) + " checks, " +
             std::to_string(rep.failures.size()) + " failures");
}

// 4. Exponent identities: alpha=0 closed forms, the chain inequality,
// and vanishing at alpha=1.
void criterion_4() {
  RandomStream rs(4004);
  double worst_identity = 0.0;
  for (int t = 0; t < 50; ++t) {
    JointDistribution d = random_joint2x2(rs);
    double e0 = exponent_E_alpha(d, 0.0).value;
    worst_identity =
        std::max(worst_identity,
                 std::abs(e0 - 0.5 * mutual_information(d)));
  }

  bool chain_ok = true;
  double worst_chain = 0.0;
  for (int t = 0; t < 20; ++t) {
    JointDistribution d = random_joint2x2(rs);
    for (int a = 0; a < 20; ++a) {
      double alpha = a / 20.0;
      ExponentResult e = exponent_E_alpha(d, alpha);
      ExponentResult ep = exponent_Eprime_alpha(d, alpha);
      double eh = exponent_Ehat(d, alpha);
      double slack = 1e-3;
      double g1 = (2.0 / 3.0) * (e.value - e.resolution) - eh - slack;
      double g2 = eh - ep.value - slack;
      worst_chain = std::max({worst_chain, g1, g2});
      if (g1 > 0 || g2 > 0) chain_ok = false;
    }
  }

  double worst_one = 0.0;
  for (int t = 0; t < 10; ++t) {
    JointDistribution d = random_joint2x2(rs);
    worst_one = std::max({worst_one, exponent_E_alpha(d, 1.0).value,
                          exponent_Eprime_alpha(d, 1.0).value,
                          std::abs(exponent_Ehat(d, 1.0))});
  }

  bool pass = worst_identity <= 1e-6 && chain_ok && worst_one == 0.0;
  report(4, "exponent identities and chain", pass,
         "|E_0 - I/2| max " + fmt(worst_identity) + ", chain slack " +
             fmt(worst_chain) + ", alpha=1 max " + fmt(worst_one));
}

// 5. Erasure-model scan: the exponent-to-rate ratio on the first
// branch clears s/2 for every erasure rate in the supported range.
void criterion_5() {
  bool pass = true;
  double min_margin = kInf;
  for (double s = 0.26; s <= 0.4801; s += 0.04) {
    ErasureScan scan = erasure_ratio_scan(s);
    double margin = scan.min_ratio_e - scan.threshold;
    min_margin = std::min(min_margin, margin);
    if (!(margin > 0.0)) pass = false;
  }
  report(5, "erasure scan clears the rate threshold", pass,
         "worst margin " + fmt(min_margin) + " nats");
}

// 6. Seeded matching end to end at n=1000.
void criterion_6() {
  JointDistribution e = erasure_joint(0.5, 0.5);
  double info = mutual_information(e);
  const int n = 1000;
  int lambda = static_cast<int>(std::ceil(2.0 * std::log2(n) / info));
  int good = 0;
  std::vector<double> walls;
  for (int t = 0; t < 20; ++t) {
    SeededPair sp = gen_seeded(n, e, lambda, 600 + t);
    MatchOptions mo;
    mo.seed = 600 + t;
    auto t0 = std::chrono::steady_clock::now();
    MatchReport rep = stm_match(sp, mo);
    walls.push_back(std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count());
    if (rep.accuracy_vs_truth >= 0.95) ++good;
  }
  std::sort(walls.begin(), walls.end());
  double median = walls[walls.size() / 2];

  double control = 0.0;
  for (int t = 0; t < 10; ++t) {
    SeededPair sp = gen_seeded(n, e, 5, 700 + t);
    MatchOptions mo;
    mo.seed = 700 + t;
    control += stm_match(sp, mo).accuracy_vs_truth;
  }
  control /= 10.0;

  bool pass = good >= 18 && median < 10.0 && control < 0.5;
  report(6, "seeded matching at n=1000", pass,
         std::to_string(good) + "/20 trials >= 0.95, median " + fmt(median) +
             " s, control accuracy " + fmt(control));
}

// 7. Whole-graph typicality matching at desk scale.
void criterion_7() {
  JointDistribution strong = diagonal_uniform(256);  // I = 8 bits
  int in_sigma = 0;
  double acc = 0.0;
  for (int t = 0; t < 50; ++t) {
    CorrelatedPair cp = gen_cper(7, strong, 800 + t);
    MatchOptions mo;
    mo.eps = 0.1;
    mo.seed = 800 + t;
    MatchReport rep = tm_match_exhaustive(cp, mo);
    in_sigma += rep.truth_in_sigma;
    acc += rep.accuracy_vs_truth;
  }
  acc /= 50.0;

  JointDistribution prod = strong.product_of_marginals();
  double control = 0.0;
  for (int t = 0; t < 50; ++t) {
    CorrelatedPair cp = gen_cper(7, prod, 900 + t);
    MatchOptions mo;
    mo.eps = 0.1;
    mo.seed = 900 + t;
    control += tm_match_exhaustive(cp, mo).accuracy_vs_truth;
  }
  control /= 50.0;

  bool pass = in_sigma >= 45 && acc >= 0.8 && control <= 0.35;
  report(7, "typicality matching finds strongly correlated truth", pass,
         std::to_string(in_sigma) + "/50 truth hits, accuracy " + fmt(acc) +
             ", product control " + fmt(control));
}

// 8. Converse consistency: below the information threshold the matcher
// does no better than random labeling.
void criterion_8() {
  const int n = 7;
  JointDistribution weak({2, 2}, {0.35, 0.15, 0.15, 0.35});
  double info = mutual_information(weak);
  double rate = 2.0 * std::log2(double(n)) / n;
  const int trials = 50;
  std::vector<double> accs;
  for (int t = 0; t < trials; ++t) {
    CorrelatedPair cp = gen_cper(n, weak, 1000 + t);
    MatchOptions mo;
    mo.seed = 1000 + t;
    accs.push_back(tm_match_exhaustive(cp, mo).accuracy_vs_truth);
  }
  double mean = 0.0;
  for (double a : accs) mean += a;
  mean /= trials;
  double var = 0.0;
  for (double a : accs) var += (a - mean) * (a - mean);
  double sigma_mean = std::sqrt(var / (trials - 1)) / std::sqrt(double(trials));
  double baseline = 1.0 / n;
  bool pass = rate > info && std::abs(mean - baseline) <= 2.0 * sigma_mean;
  report(8, "weak correlation matches only at the random baseline", pass,
         "mean " + fmt(mean) + " vs 1/n " + fmt(baseline) + " within 2*" +
             fmt(sigma_mean));
}

// 9. Multinomial type probabilities never exceed 2^(-n D(t||P)).
void criterion_9() {
  JointDistribution tern({3}, {0.5, 0.3, 0.2});
  JointDistribution uni({3}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  long long checked = 0, violations = 0;
  for (const auto& model : {tern, uni}) {
    for (int n = 1; n <= 20; ++n)
      for (int c0 = 0; c0 <= n; ++c0)
        for (int c1 = 0; c0 + c1 <= n; ++c1) {
          TypeCounts t;
          t.alphabets = {3};
          t.n = n;
          if (c0) t.cells.emplace_back(0, c0);
          if (c1) t.cells.emplace_back(1, c1);
          if (n - c0 - c1) t.cells.emplace_back(2, n - c0 - c1);
          ++checked;
          if (!type_prob_bound_check(t, model).holds) ++violations;
        }
  }
  report(9, "type probability bound over all ternary types", violations == 0,
         std::to_string(checked) + " types, " + std::to_string(violations) +
             " violations");
}

// 10. Byte-identical experiment reruns.
void criterion_10() {
  namespace fs = std::filesystem;
  auto base = fs::temp_directory_path() / "typmatch_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  auto read = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool pass = true;
  std::string detail;
  const char* configs[] = {
      R"({"kind": "match-sweep", "name": "det_sweep", "n": 5, "trials": 4,
          "seed": 11, "dist": {"alphabets": [2,2], "pmf": [0.4,0.1,0.2,0.3]}})",
      R"({"kind": "seeded-sweep", "name": "det_stm", "n": 60, "trials": 2,
          "seed": 12, "lambda_list": [10, 20],
          "dist": {"erasure": {"p": 0.5, "s": 0.5}}})"};
  for (const char* text : configs) {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
    ExperimentOutcome a = run_experiment(cfg, (base / "a").string());
    ExperimentOutcome b = run_experiment(cfg, (base / "b").string());
    if (read(a.csv_path) != read(b.csv_path)) {
      pass = false;
      detail += cfg.name + " differs; ";
    }
  }
  if (pass) detail = "reruns byte-identical";
  fs::remove_all(base);
  report(10, "experiment reruns are byte-identical", pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
