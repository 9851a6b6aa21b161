// Command-line front end: generate correlated instances, run matchers,
// tabulate exponent bounds, drive experiments, and verify the counting
// formulas. Exit codes: 0 ok, 2 config error, 3 verification failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "typmatch/conditions.hpp"
#include "typmatch/counting.hpp"
#include "typmatch/distribution.hpp"
#include "typmatch/experiment.hpp"
#include "typmatch/exponents.hpp"
#include "typmatch/generators.hpp"
#include "typmatch/graph.hpp"
#include "typmatch/matchers.hpp"

namespace {

using nlohmann::json;
using namespace typmatch;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerification = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Option values that start with '{' or '[' are inline JSON; anything
// else is a file path.
std::string text_or_file(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
  return slurp(arg);
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct GenerateArgs {
  std::string model;
  int n = 0;
  std::string dist;
  std::uint64_t seed = 1;
  std::string out_prefix;
  int lambda = 0;
  int m = 3;
  std::vector<int> membership;
  std::string block_joints;
};

int run_generate(const GenerateArgs& a) {
  json truth;
  truth["model"] = a.model;
  if (a.model == "cer" || a.model == "seeded") {
    JointDistribution dist = dist_from_json_text(text_or_file(a.dist));
    CorrelatedPair cp;
    if (a.model == "seeded") {
      SeededPair sp = gen_seeded(a.n, dist, a.lambda, a.seed);
      truth["lambda"] = sp.lambda;
      truth["seeds"] = sp.seed_vertices;
      truth["revealed"] = sp.revealed_labels;
      cp = sp.pair;
    } else {
      cp = gen_cper(a.n, dist, a.seed);
    }
    truth["sigma2"] = cp.sigma2;
    truth["dist"] = json::parse(dist_to_json_text(dist));
    spit(a.out_prefix + "_g1.json", graph_to_json_text(cp.g1));
    spit(a.out_prefix + "_g2.json", graph_to_json_text(cp.g2));
  } else if (a.model == "sbm") {
    if (a.membership.empty())
      throw std::invalid_argument("sbm generation needs --membership");
    CommunityStructure comm = CommunityStructure::from_membership(a.membership);
    json joints = json::parse(text_or_file(a.block_joints));
    if (!joints.is_array() ||
        joints.size() != static_cast<std::size_t>(comm.c) * comm.c)
      throw std::invalid_argument("--block-joints must be a c*c JSON array");
    std::vector<JointDistribution> blocks;
    for (const auto& bj : joints) blocks.push_back(dist_from_json_text(bj.dump()));
    CorrelatedPair cp = gen_cpcs(a.n, comm, blocks, a.seed);
    truth["sigma2"] = cp.sigma2;
    truth["membership"] = comm.membership;
    truth["block_joints"] = joints;
    spit(a.out_prefix + "_g1.json", graph_to_json_text(cp.g1));
    spit(a.out_prefix + "_g2.json", graph_to_json_text(cp.g2));
  } else if (a.model == "collection") {
    JointDistribution dist = dist_from_json_text(text_or_file(a.dist));
    GraphCollection gc = gen_collection(a.n, a.m, dist, a.seed);
    truth["m"] = gc.m;
    truth["labelings"] = gc.labelings;
    truth["dist"] = json::parse(dist_to_json_text(dist));
    for (int g = 0; g < gc.m; ++g)
      spit(a.out_prefix + "_g" + std::to_string(g + 1) + ".json",
           graph_to_json_text(gc.graphs[g]));
  } else {
    throw std::invalid_argument("unknown generate model: " + a.model);
  }
  spit(a.out_prefix + "_truth.json", truth.dump(2) + "\n");
  return kExitOk;
}

struct MatchArgs {
  std::string model;
  std::vector<std::string> graphs;
  std::string truth;
  std::optional<double> eps;
  std::uint64_t seed = 1;
  int passes = 2;
  bool force = false;
  std::string out;
};

json report_to_json(const MatchReport& rep) {
  json j;
  j["failed"] = rep.failed;
  j["sigma2_hat"] = rep.sigma2_hat;
  if (!rep.collection_hats.empty()) j["collection_hats"] = rep.collection_hats;
  j["sigma_size"] = rep.sigma_size;
  j["truth_in_sigma"] = rep.truth_in_sigma;
  j["accuracy"] = rep.accuracy_vs_truth;
  j["non_seed_accuracy"] = rep.non_seed_accuracy;
  j["strict"] = rep.strict;
  j["eps"] = rep.eps_used;
  j["wall_ms"] = rep.wall_ms;
  json passes = json::array();
  for (const auto& p : rep.passes)
    passes.push_back(json{{"pass", p.pass},
                          {"eps", p.eps},
                          {"newly_matched", p.newly_matched},
                          {"ambiguous", p.ambiguous},
                          {"seeds_after", p.seeds_after}});
  j["passes"] = passes;
  return j;
}

int run_match(const MatchArgs& a) {
  json truth = json::parse(slurp(a.truth));
  if (a.graphs.size() < 2)
    throw std::invalid_argument("need at least two --graphs files");
  std::vector<AttributedGraph> gs;
  for (const auto& path : a.graphs)
    gs.push_back(graph_from_json_text(slurp(path)));

  MatchOptions mo;
  mo.eps = a.eps;
  mo.seed = a.seed;
  mo.passes = a.passes;
  mo.force = a.force;

  MatchReport rep;
  if (a.model == "collection") {
    GraphCollection gc;
    gc.m = static_cast<int>(gs.size());
    gc.graphs = gs;
    gc.joint = dist_from_json_text(truth.at("dist").dump());
    gc.labelings = truth.at("labelings").get<std::vector<Labeling>>();
    if (gc.labelings.size() != gs.size())
      throw std::invalid_argument("truth labelings do not match graph count");
    rep = tm_match_collection(gc, mo);
  } else {
    CorrelatedPair cp;
    cp.g1 = gs[0];
    cp.g2 = gs[1];
    cp.sigma1 = identity_permutation(cp.g1.n);
    cp.sigma2 = truth.at("sigma2").get<Labeling>();
    if (a.model == "sbm" || a.model == "sbm-blind") {
      cp.model = PairModel::kCommunity;
      cp.comm = CommunityStructure::from_membership(
          truth.at("membership").get<std::vector<int>>());
      for (const auto& bj : truth.at("block_joints"))
        cp.block_joints.push_back(dist_from_json_text(bj.dump()));
      cp.comm_of_g2_vertex.resize(cp.g2.n);
      for (int v = 0; v < cp.g2.n; ++v)
        cp.comm_of_g2_vertex[v] = cp.comm->membership[cp.sigma2[v]];
      rep = a.model == "sbm" ? tm_match_sbm(cp, mo) : tm_match_sbm_blind(cp, mo);
    } else {
      cp.model = PairModel::kIid;
      cp.joint = dist_from_json_text(truth.at("dist").dump());
      if (a.model == "seeded") {
        SeededPair sp;
        sp.pair = cp;
        sp.seed_vertices = truth.at("seeds").get<std::vector<int>>();
        sp.lambda = static_cast<int>(sp.seed_vertices.size());
        for (int v : sp.seed_vertices)
          sp.revealed_labels.push_back(cp.sigma2[v]);
        rep = stm_match(sp, mo);
      } else if (a.model == "cer") {
        rep = tm_match_exhaustive(cp, mo);
      } else {
        throw std::invalid_argument("unknown match model: " + a.model);
      }
    }
  }

  std::string out_text = report_to_json(rep).dump(2) + "\n";
  if (a.out.empty())
    std::cout << out_text;
  else
    spit(a.out, out_text);
  return kExitOk;
}

struct BoundsArgs {
  std::string dist;
  long long n = 1000;
  double alpha_step = 0.01;
  double alpha_max = 0.95;
  std::optional<double> eps;
  std::string out;
};

int run_bounds(const BoundsArgs& a) {
  JointDistribution dist = dist_from_json_text(text_or_file(a.dist));
  if (a.n < 2) throw std::invalid_argument("need n >= 2");
  const long long N = a.n * (a.n - 1) / 2;
  const double eps =
      a.eps ? *a.eps
            : tm_default_eps(static_cast<int>(std::min<long long>(a.n, 1000000)));
  ExponentOptions eo;

  std::ostringstream csv;
  csv << "alpha,E_alpha,Eprime_alpha,Ehat,lhs,margin\n";
  for (double alpha = 0.0; alpha <= a.alpha_max + 1e-12;
       alpha += a.alpha_step) {
    double a2 = alpha * alpha;
    ExponentResult e = exponent_E_alpha(dist, a2, eo);
    ExponentResult ep = exponent_Eprime_alpha(dist, a2, eo);
    double eh = exponent_Ehat(dist, a2);
    CorrectionTerms ct = correction_terms(N, dist, a2, eps, eo);
    double lhs = 2.0 * (1.0 - alpha) *
                     std::log2(static_cast<double>(a.n)) / (a.n - 1) +
                 std::max(ct.zeta, ct.zeta_prime) + ct.delta_eps;
    double margin = std::max(e.value, ep.value) - lhs;
    csv << fmt(alpha) << ',' << fmt(e.value) << ',' << fmt(ep.value) << ','
        << fmt(eh) << ',' << fmt(lhs) << ',' << fmt(margin) << '\n';
  }
  if (a.out.empty())
    std::cout << csv.str();
  else
    spit(a.out, csv.str());
  return kExitOk;
}

int run_experiment_cmd(const std::string& config, const std::string& out_dir) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config);
  ExperimentOutcome out = run_experiment(cfg, out_dir);
  std::cout << "wrote " << out.csv_path << " (" << out.rows << " rows), "
            << out.manifest_path << "\n";
  if (out.verification_failed) {
    std::cerr << "verification failed: see " << out.csv_path << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

int run_verify_counting(int n_max) {
  CountingReport rep = verify_counting(n_max);
  std::cout << rep.checks << " checks, " << rep.failures.size()
            << " failures\n";
  for (const auto& f : rep.failures) std::cout << "FAIL " << f << "\n";
  return rep.ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"typicality matching of correlated random graphs"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "sample a correlated instance");
  gen->add_option("--model", ga.model, "cer|sbm|collection|seeded")
      ->required();
  gen->add_option("--n", ga.n, "vertex count")->required();
  gen->add_option("--dist", ga.dist, "joint distribution (JSON or file)");
  gen->add_option("--seed", ga.seed, "master seed");
  gen->add_option("--out-prefix", ga.out_prefix, "output path prefix")
      ->required();
  gen->add_option("--lambda", ga.lambda, "seed-set size (seeded)");
  gen->add_option("--m", ga.m, "collection size (collection)");
  gen->add_option("--membership", ga.membership,
                  "community of each label (sbm)");
  gen->add_option("--block-joints", ga.block_joints,
                  "c*c JSON array of block joints (sbm)");

  MatchArgs ma;
  auto* match = app.add_subcommand("match", "match a generated instance");
  match->add_option("--model", ma.model, "cer|sbm|sbm-blind|collection|seeded")
      ->required();
  match->add_option("--graphs", ma.graphs, "graph JSON files, g1 first")
      ->required()
      ->expected(-2);
  match->add_option("--truth", ma.truth, "truth JSON file")->required();
  double eps_val = 0.0;
  auto* eps_opt = match->add_option("--eps", eps_val, "typicality band");
  match->add_option("--seed", ma.seed, "tie-break seed");
  match->add_option("--passes", ma.passes, "seeded matching passes");
  match->add_flag("--force", ma.force, "override enumeration guards");
  match->add_option("--out", ma.out, "report path (stdout when omitted)");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand(
      "bounds", "tabulate mismatch exponents against the rate term");
  bounds->add_option("--dist", ba.dist, "joint distribution (JSON or file)")
      ->required();
  bounds->add_option("--n", ba.n, "vertex count");
  bounds->add_option("--alpha-step", ba.alpha_step, "grid step");
  bounds->add_option("--alpha-max", ba.alpha_max, "grid end");
  double beps_val = 0.0;
  auto* beps_opt = bounds->add_option("--eps", beps_val, "typicality band");
  bounds->add_option("--out", ba.out, "CSV path (stdout when omitted)");

  std::string config, out_dir = ".";
  auto* exp = app.add_subcommand("experiment", "run a configured experiment");
  exp->add_option("--config", config, "experiment config JSON")->required();
  exp->add_option("--out", out_dir, "output directory");

  int n_max = 5;
  auto* vc = app.add_subcommand("verify-counting",
                                "check counting formulas by enumeration");
  vc->add_option("--n-max", n_max, "largest n to enumerate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*eps_opt) ma.eps = eps_val;
    if (*beps_opt) ba.eps = beps_val;
    if (gen->parsed()) return run_generate(ga);
    if (match->parsed()) return run_match(ma);
    if (bounds->parsed()) return run_bounds(ba);
    if (exp->parsed()) return run_experiment_cmd(config, out_dir);
    if (vc->parsed()) return run_verify_counting(n_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
