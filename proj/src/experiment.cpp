#include "typmatch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "typmatch/conditions.hpp"
#include "typmatch/counting.hpp"
#include "typmatch/exponents.hpp"
#include "typmatch/generators.hpp"
#include "typmatch/matchers.hpp"
#include "typmatch/oracle.hpp"
#include "typmatch/rng.hpp"

namespace typmatch {

using nlohmann::json;

JointDistribution dist_from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (j.contains("erasure")) {
    const auto& e = j.at("erasure");
    return erasure_joint(e.at("p").get<double>(), e.at("s").get<double>());
  }
  if (!j.contains("alphabets") || !j.contains("pmf"))
    throw std::invalid_argument(
        "distribution JSON needs \"alphabets\" and \"pmf\" (or \"erasure\")");
  return JointDistribution(j.at("alphabets").get<std::vector<int>>(),
                           j.at("pmf").get<std::vector<double>>());
}

std::string dist_to_json_text(const JointDistribution& dist) {
  json j{{"alphabets", dist.alphabets()}, {"pmf", dist.pmf()}};
  return j.dump();
}

int worker_count() {
  if (const char* env = std::getenv("TYPMATCH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t workers =
      std::min(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Long-format result table; values stringified once so reruns byte-match.
class RowSink {
 public:
  explicit RowSink(std::string experiment) : experiment_(std::move(experiment)) {}

  void add(long long n, long long trial, std::uint64_t seed,
           const std::string& metric, double value) {
    std::ostringstream os;
    os << experiment_ << ',' << n << ',' << trial << ',' << seed << ','
       << metric << ',' << fmt(value);
    lines_.push_back(os.str());
  }

  std::size_t size() const { return lines_.size(); }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << "experiment,n,trial,seed,metric,value\n";
    for (const auto& l : lines_) out << l << '\n';
  }

 private:
  std::string experiment_;
  std::vector<std::string> lines_;
};

std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string sig_label(const CycleSignature& sig) {
  std::ostringstream os;
  os << "m" << sig.m << "c" << sig.c;
  if (!sig.lengths.empty()) {
    os << "len";
    for (std::size_t i = 0; i < sig.lengths.size(); ++i) {
      if (i) os << '+';
      os << sig.lengths[i];
    }
  }
  return os.str();
}

struct KindResult {
  bool verification_failed = false;
};

KindResult run_bound_verify(const json& j, RowSink& sink) {
  int n = j.value("n", 6);
  JointDistribution dist = dist_from_json_text(j.at("dist").dump());
  std::vector<double> eps_list =
      j.value("eps_list", std::vector<double>{0.05, 0.1});
  ExponentOptions eo;

  KindResult res;
  long long row = 0;
  for (const auto& sig : all_cycle_signatures(n)) {
    Permutation pi = standard_permutation(sig);
    double alpha = static_cast<double>(sig.m) / n;
    ExponentResult e = exponent_E_alpha(dist, alpha, eo);
    ExponentResult ep = exponent_Eprime_alpha(dist, alpha, eo);
    double ehat = exponent_Ehat(dist, alpha);
    std::string label = sig_label(sig);
    for (double eps : eps_list) {
      double exact = typicality_prob_exact(dist, pi, eps, n);
      CorrectionTerms ct = correction_terms(n, dist, alpha, eps, eo);
      double b_e =
          std::exp2(-n * (e.value - e.resolution - ct.zeta - ct.delta_eps));
      double b_ep = std::exp2(
          -n * (ep.value - ep.resolution - ct.zeta_prime - ct.delta_eps));
      double b_eh =
          std::exp2(-n * (ehat - ct.zeta_prime - ct.delta_eps / 3.0));
      std::string tag = label + "/eps" + fmt(eps);
      sink.add(n, row, 0, "exact/" + tag, exact);
      sink.add(n, row, 0, "bound_e/" + tag, b_e);
      sink.add(n, row, 0, "bound_eprime/" + tag, b_ep);
      sink.add(n, row, 0, "bound_ehat/" + tag, b_eh);
      bool ok = exact <= b_e && exact <= b_ep && exact <= b_eh;
      sink.add(n, row, 0, "ok/" + tag, ok ? 1.0 : 0.0);
      if (!ok) res.verification_failed = true;
      ++row;
    }
  }
  return res;
}

KindResult run_match_sweep(const json& j, const std::string& name,
                           RowSink& sink) {
  int n = j.at("n").get<int>();
  long long trials = j.at("trials").get<long long>();
  std::uint64_t master = j.value("seed", 1ull);
  JointDistribution dist = dist_from_json_text(j.at("dist").dump());
  std::optional<double> eps;
  if (j.contains("eps")) eps = j.at("eps").get<double>();

  struct Out {
    std::uint64_t seed = 0;
    MatchReport rep;
  };
  std::vector<Out> outs(trials);
  parallel_for(trials, [&](std::size_t t) {
    std::uint64_t seed = derive_seed(master, name, t);
    CorrelatedPair cp = gen_cper(n, dist, seed);
    MatchOptions mo;
    mo.eps = eps;
    mo.seed = seed;
    outs[t] = {seed, tm_match_exhaustive(cp, mo)};
  });
  for (long long t = 0; t < trials; ++t) {
    const auto& o = outs[t];
    sink.add(n, t, o.seed, "truth_in_sigma", o.rep.truth_in_sigma ? 1.0 : 0.0);
    sink.add(n, t, o.seed, "sigma_size",
             static_cast<double>(o.rep.sigma_size));
    sink.add(n, t, o.seed, "accuracy", o.rep.accuracy_vs_truth);
    sink.add(n, t, o.seed, "failed", o.rep.failed ? 1.0 : 0.0);
  }
  return {};
}

KindResult run_seeded_sweep(const json& j, const std::string& name,
                            RowSink& sink) {
  int n = j.at("n").get<int>();
  long long trials = j.at("trials").get<long long>();
  std::uint64_t master = j.value("seed", 1ull);
  JointDistribution dist = dist_from_json_text(j.at("dist").dump());
  std::vector<int> lambdas = j.at("lambda_list").get<std::vector<int>>();
  int passes = j.value("passes", 2);
  std::optional<double> eps;
  if (j.contains("eps")) eps = j.at("eps").get<double>();

  for (int lambda : lambdas) {
    std::string sub = name + "/lambda=" + std::to_string(lambda);
    struct Out {
      std::uint64_t seed = 0;
      MatchReport rep;
    };
    std::vector<Out> outs(trials);
    parallel_for(trials, [&](std::size_t t) {
      std::uint64_t seed = derive_seed(master, sub, t);
      SeededPair sp = gen_seeded(n, dist, lambda, seed);
      MatchOptions mo;
      mo.eps = eps;
      mo.seed = seed;
      mo.passes = passes;
      outs[t] = {seed, stm_match(sp, mo)};
    });
    std::string tag = "[lambda=" + std::to_string(lambda) + "]";
    for (long long t = 0; t < trials; ++t) {
      const auto& o = outs[t];
      sink.add(n, t, o.seed, "accuracy" + tag, o.rep.accuracy_vs_truth);
      sink.add(n, t, o.seed, "non_seed_accuracy" + tag,
               o.rep.non_seed_accuracy);
      sink.add(n, t, o.seed, "strict" + tag, o.rep.strict ? 1.0 : 0.0);
      for (const auto& p : o.rep.passes)
        sink.add(n, t, o.seed,
                 "pass" + std::to_string(p.pass) + "_matched" + tag,
                 p.newly_matched);
    }
  }
  return {};
}

KindResult run_erasure_scan(const json& j, RowSink& sink) {
  std::vector<double> s_list = j.at("s_list").get<std::vector<double>>();
  double alpha0 = j.value("alpha0", 0.8);
  double alpha_step = j.value("alpha_step", 0.01);
  double theta = j.value("theta", 1.0);
  double n_ref = j.value("n_ref", 1e6);
  double alpha_max = j.value("alpha_max", 0.95);

  for (double s : s_list) {
    ErasureScan scan =
        erasure_ratio_scan(s, alpha0, alpha_step, theta, n_ref, alpha_max);
    std::string tag = "[s=" + fmt(s) + "]";
    long long row = 0;
    for (const auto& r : scan.rows) {
      sink.add(static_cast<long long>(n_ref), row, 0,
               "ratio" + tag + "[alpha=" + fmt(r.alpha) + "]", r.ratio);
      ++row;
    }
    sink.add(static_cast<long long>(n_ref), row, 0, "min_ratio_e" + tag,
             scan.min_ratio_e);
    sink.add(static_cast<long long>(n_ref), row, 0, "min_ratio" + tag,
             scan.min_ratio);
    sink.add(static_cast<long long>(n_ref), row, 0, "threshold" + tag,
             scan.threshold);
    sink.add(static_cast<long long>(n_ref), row, 0, "exceeds" + tag,
             scan.exceeds ? 1.0 : 0.0);
  }
  return {};
}

KindResult run_counting_verify(const json& j, RowSink& sink) {
  int n_max = j.value("n_max", 5);
  CountingReport rep = verify_counting(n_max);
  long long row = 0;
  for (const auto& line : rep.rows) {
    // rows are "name,value" pairs already
    auto comma = line.rfind(',');
    sink.add(n_max, row++, 0, line.substr(0, comma),
             std::atof(line.c_str() + comma + 1));
  }
  KindResult r;
  r.verification_failed = !rep.ok;
  return r;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  if (!j.contains("kind"))
    throw std::invalid_argument("experiment config needs \"kind\"");
  cfg.kind = j.at("kind").get<std::string>();
  cfg.name = j.value("name", cfg.kind);
  cfg.json_text = j.dump();
  const char* kinds[] = {"bound-verify", "match-sweep", "seeded-sweep",
                         "erasure-scan", "counting-verify"};
  bool known = false;
  for (const char* k : kinds) known = known || cfg.kind == k;
  if (!known)
    throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::string& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  json j = json::parse(cfg.json_text);
  RowSink sink(cfg.name);

  KindResult kr;
  if (cfg.kind == "bound-verify") kr = run_bound_verify(j, sink);
  else if (cfg.kind == "match-sweep") kr = run_match_sweep(j, cfg.name, sink);
  else if (cfg.kind == "seeded-sweep") kr = run_seeded_sweep(j, cfg.name, sink);
  else if (cfg.kind == "erasure-scan") kr = run_erasure_scan(j, sink);
  else if (cfg.kind == "counting-verify") kr = run_counting_verify(j, sink);
  else throw std::invalid_argument("unknown experiment kind: " + cfg.kind);

  std::filesystem::create_directories(out_dir);
  ExperimentOutcome out;
  out.csv_path = out_dir + "/" + cfg.name + ".csv";
  out.manifest_path = out_dir + "/" + cfg.name + ".manifest.json";
  out.rows = sink.size();
  out.verification_failed = kr.verification_failed;
  sink.write(out.csv_path);

  double wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  json manifest{{"schema", "typmatch-manifest-v1"},
                {"kind", cfg.kind},
                {"name", cfg.name},
                {"config", j},
                {"config_hash", hex64(fnv64(cfg.json_text))},
                {"library_version", kLibraryVersion},
                {"rows", out.rows},
                {"csv", cfg.name + ".csv"},
                {"wall_ms", wall_ms},
                {"verification_failed", out.verification_failed}};
  std::ofstream mf(out.manifest_path, std::ios::binary);
  mf << manifest.dump(2) << '\n';
  return out;
}

CountingReport verify_counting(int n_max) {
  CountingReport rep;
  auto check = [&rep](bool ok, const std::string& name) {
    ++rep.checks;
    rep.rows.push_back(name + "," + (ok ? "1" : "0"));
    if (!ok) {
      rep.ok = false;
      rep.failures.push_back(name);
    }
  };

  // Fixed-point histogram of S_n against the closed form and bounds.
  for (int n = 1; n <= std::min(n_max, 7); ++n) {
    std::vector<long long> hist(n + 1, 0);
    for_each_permutation(n, [&](const Permutation& p) {
      int fixed = 0;
      for (int i = 0; i < n; ++i)
        if (p[i] == i) ++fixed;
      ++hist[fixed];
    });
    for (int m = 0; m <= n; ++m) {
      FixedPointCount fc = count_fixed_point_perms(n, m);
      std::string base =
          "fixed_points/n=" + std::to_string(n) + "/m=" + std::to_string(m);
      check(fc.exact == hist[m], base + "/exact");
      check(fc.exact <= fc.upper, base + "/upper");
      if (fc.lower_valid) check(fc.lower <= fc.exact, base + "/lower");
    }
    check(derangement_count(n) == hist[0],
          "derangement/n=" + std::to_string(n));
  }

  // Pairwise-disagreement tuples (id, pi2, pi3): exact counts inside
  // the bracketing bounds, both per coincidence signature and in total.
  for (int n = 2; n <= std::min(n_max, 5); ++n) {
    std::map<std::vector<long long>, long long> hist;
    Permutation id = identity_permutation(n);
    for_each_permutation(n, [&](const Permutation& p2) {
      for_each_permutation(n, [&](const Permutation& p3) {
        BellSignature sig = bell_signature({id, p2, p3});
        ++hist[sig.counts];
      });
    });
    for (const auto& [counts, realized] : hist) {
      BellSignature sig;
      sig.k = 3;
      sig.n = n;
      sig.counts = counts;
      CountBounds b = bell_count_bounds(n, sig);
      std::string base = "bell_bounds/n=" + std::to_string(n) + "/sig=";
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) base += '.';
        base += std::to_string(counts[i]);
      }
      check(b.lower <= realized && realized <= b.upper, base);
    }
  }

  // k-fold derangement exact counts inside their bounds.
  for (int n = 2; n <= std::min(n_max, 5); ++n) {
    for (int k = 2; k <= 3; ++k) {
      BigInt d = k_fold_derangement_exact(n, k);
      CountBounds b = k_fold_derangement_bounds(n, k);
      check(b.lower <= d && d <= b.upper,
            "kfold/n=" + std::to_string(n) + "/k=" + std::to_string(k));
    }
  }
  return rep;
}

}  // namespace typmatch
