#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "typmatch/distribution.hpp"
#include "typmatch/generators.hpp"
#include "typmatch/graph.hpp"
#include "typmatch/matchers.hpp"
#include "typmatch/permutation.hpp"

using namespace typmatch;

namespace {
const JointDistribution kDist({2, 2}, {0.4, 0.1, 0.2, 0.3});

JointDistribution diagonal_uniform(int l) {
  std::vector<double> pmf(static_cast<std::size_t>(l) * l, 0.0);
  for (int a = 0; a < l; ++a) pmf[static_cast<std::size_t>(a) * l + a] = 1.0 / l;
  return JointDistribution({l, l}, pmf);
}
}  // namespace

TEST_CASE("default bands shrink slower than one over the length") {
  CHECK(tm_default_eps(10) == doctest::Approx(std::pow(10.0, -0.9)));
  CHECK(stm_default_eps(16) == doctest::Approx(std::pow(16.0, -0.4)));
  CHECK(tm_default_eps(100) * 100 > 1.0);
  CHECK(stm_default_eps(100) * std::sqrt(100.0) > 1.0);
}

TEST_CASE("two-vertex matching tests both labelings") {
  CorrelatedPair cp = gen_cper(2, diagonal_uniform(2), 5);
  MatchReport rep = tm_match_exhaustive(cp);
  // One pair attribute: both labelings yield the same aligned sequence,
  // so both are typical and the ambiguity set has size 2.
  CHECK_FALSE(rep.failed);
  CHECK(rep.sigma_size == 2);
  CHECK(rep.truth_in_sigma);
  CHECK(is_permutation(rep.sigma2_hat));
}

TEST_CASE("returned labelings always pass the typicality test post-hoc") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CorrelatedPair cp = gen_cper(6, kDist, seed);
    MatchReport rep = tm_match_exhaustive(cp);
    if (rep.failed) continue;
    std::vector<int> u1 = upper_triangle(cp.g1, cp.sigma1);
    std::vector<int> u2 = upper_triangle(cp.g2, rep.sigma2_hat);
    CHECK(is_strongly_typical(joint_type(u1, u2, 2, 2), kDist, rep.eps_used));
  }
}

TEST_CASE("strongly correlated instances recover the truth") {
  int hits = 0, trials = 20;
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    CorrelatedPair cp = gen_cper(7, diagonal_uniform(256), 100 + t);
    MatchOptions mo;
    mo.eps = 0.1;
    mo.seed = 100 + t;
    MatchReport rep = tm_match_exhaustive(cp, mo);
    hits += rep.truth_in_sigma;
    acc += rep.accuracy_vs_truth;
  }
  CHECK(hits >= 18);
  CHECK(acc / trials >= 0.8);
}

TEST_CASE("a product joint leaves matching ambiguous") {
  JointDistribution prod({2, 2}, {0.25, 0.25, 0.25, 0.25});
  double acc = 0.0;
  int trials = 10;
  for (int t = 0; t < trials; ++t) {
    CorrelatedPair cp = gen_cper(6, prod, 200 + t);
    MatchReport rep = tm_match_exhaustive(cp, {.seed = 200ull + t});
    CHECK(rep.sigma_size > 1);
    acc += rep.accuracy_vs_truth;
  }
  CHECK(acc / trials < 0.7);
}

TEST_CASE("an impossible instance is a typed failure") {
  CorrelatedPair cp;
  cp.g1 = AttributedGraph(4, 2, 1);  // complete graph
  cp.g2 = AttributedGraph(4, 2, 0);  // empty graph
  cp.sigma1 = identity_permutation(4);
  cp.sigma2 = identity_permutation(4);
  cp.joint = diagonal_uniform(2);
  MatchReport rep = tm_match_exhaustive(cp);
  CHECK(rep.failed);
  CHECK(rep.sigma_size == 0);
  CHECK(rep.sigma2_hat.empty());
}

TEST_CASE("exhaustive matching rejects oversized instances") {
  CorrelatedPair cp = gen_cper(10, kDist, 1);
  CHECK_THROWS(tm_match_exhaustive(cp));
}

TEST_CASE("matching is deterministic given the seed") {
  CorrelatedPair cp = gen_cper(6, kDist, 77);
  MatchOptions mo;
  mo.seed = 9;
  MatchReport a = tm_match_exhaustive(cp, mo);
  MatchReport b = tm_match_exhaustive(cp, mo);
  CHECK(a.sigma2_hat == b.sigma2_hat);
  CHECK(a.sigma_size == b.sigma_size);
}

TEST_CASE("single-community matching degenerates to exhaustive") {
  CommunityStructure cs = CommunityStructure::from_membership(
      std::vector<int>(6, 0));
  CorrelatedPair cp = gen_cpcs(6, cs, {kDist}, 15);
  MatchOptions mo;
  mo.seed = 4;
  MatchReport via_sbm = tm_match_sbm(cp, mo);

  CorrelatedPair iid = cp;
  iid.model = PairModel::kIid;
  iid.joint = kDist;
  MatchReport via_tm = tm_match_exhaustive(iid, mo);
  CHECK(via_sbm.sigma_size == via_tm.sigma_size);
  CHECK(via_sbm.truth_in_sigma == via_tm.truth_in_sigma);
}

TEST_CASE("community matching respects memberships and finds the truth") {
  std::vector<int> mem{0, 0, 0, 0, 1, 1, 1, 1};
  CommunityStructure cs = CommunityStructure::from_membership(mem);
  JointDistribution diag = diagonal_uniform(64);
  std::vector<JointDistribution> blocks{diag, diag, diag, diag};
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CorrelatedPair cp = gen_cpcs(8, cs, blocks, seed);
    // Wide band: a 6-pair within-block type over 64 cells collides
    // often, and rejection rides on the zero cells anyway.
    MatchReport rep = tm_match_sbm(cp, {.eps = 0.4, .seed = seed});
    hits += rep.truth_in_sigma;
    if (!rep.failed)
      for (int v = 0; v < 8; ++v)
        CHECK(cs.membership[rep.sigma2_hat[v]] == cp.comm_of_g2_vertex[v]);
  }
  CHECK(hits >= 9);
}

TEST_CASE("a community-swapping labeling fails the block test") {
  std::vector<int> mem{0, 0, 1, 1};
  CommunityStructure cs = CommunityStructure::from_membership(mem);
  JointDistribution d00({2, 2}, {0.5, 0.0, 0.0, 0.5});
  JointDistribution d11({2, 2}, {0.05, 0.0, 0.0, 0.95});
  JointDistribution cross({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CorrelatedPair cp = gen_cpcs(4, cs, {d00, cross, cross, d11}, 8);

  // Swap the two communities on top of the true labeling.
  Labeling swapped(4);
  for (int v = 0; v < 4; ++v) swapped[v] = (cp.sigma2[v] + 2) % 4;
  BlockViews bv1 = block_views(cp.g1, cp.sigma1, cs);
  BlockViews bv2 = block_views(cp.g2, swapped, cs);
  bool all_blocks_typical = true;
  std::vector<const JointDistribution*> joints{&d00, &cross, &d11};
  int idx = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j, ++idx) {
      if (bv1.block(i, j).empty()) continue;
      all_blocks_typical =
          all_blocks_typical &&
          is_strongly_typical(
              joint_type(bv1.block(i, j), bv2.block(i, j), 2, 2),
              *joints[idx], 0.2);
    }
  CHECK_FALSE(all_blocks_typical);
}

TEST_CASE("blind community matching pools at least the informed set") {
  std::vector<int> mem{0, 0, 0, 1, 1, 1};
  CommunityStructure cs = CommunityStructure::from_membership(mem);
  JointDistribution diag = diagonal_uniform(16);
  std::vector<JointDistribution> blocks{diag, diag, diag, diag};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CorrelatedPair cp = gen_cpcs(6, cs, blocks, seed);
    MatchOptions mo;
    mo.seed = seed;
    MatchReport informed = tm_match_sbm(cp, mo);
    MatchReport blind = tm_match_sbm_blind(cp, mo);
    CHECK(blind.sigma_size >= informed.sigma_size);
    if (informed.truth_in_sigma) CHECK(blind.truth_in_sigma);
  }
}

TEST_CASE("two-graph collections agree with pair matching") {
  GraphCollection gc = gen_collection(5, 2, kDist, 33);
  MatchOptions mo;
  mo.seed = 2;
  MatchReport via_coll = tm_match_collection(gc, mo);

  CorrelatedPair cp;
  cp.g1 = gc.graphs[0];
  cp.g2 = gc.graphs[1];
  cp.sigma1 = gc.labelings[0];
  cp.sigma2 = gc.labelings[1];
  cp.joint = kDist;
  MatchReport via_pair = tm_match_exhaustive(cp, mo);
  CHECK(via_coll.sigma_size == via_pair.sigma_size);
  CHECK(via_coll.truth_in_sigma == via_pair.truth_in_sigma);
}

TEST_CASE("identical graphs admit the identity-consistent tuple") {
  JointDistribution tri({4, 4, 4}, [] {
    std::vector<double> pmf(64, 0.0);
    for (int a = 0; a < 4; ++a) pmf[a * 16 + a * 4 + a] = 0.25;
    return pmf;
  }());
  GraphCollection gc = gen_collection(5, 3, tri, 44);
  MatchReport rep = tm_match_collection(gc, {.seed = 3});
  CHECK(rep.truth_in_sigma);
  CHECK_FALSE(rep.failed);
  CHECK(rep.collection_hats.size() == 2);
  for (const auto& lab : rep.collection_hats) CHECK(is_permutation(lab));
}

TEST_CASE("fingerprints read the anchor columns") {
  AttributedGraph g(5, 3);
  g.set_attr(0, 1, 2);
  g.set_attr(0, 3, 1);
  g.set_attr(2, 3, 2);
  std::vector<int> anchors{1, 3};
  CHECK(fingerprint(g, 0, anchors) == std::vector<int>{2, 1});
  CHECK(fingerprint(g, 2, anchors) == std::vector<int>{0, 2});
  CHECK(fingerprint(g, 4, {}).empty());
  CHECK_THROWS(fingerprint(g, 1, anchors));
}

TEST_CASE("a fully seeded pair is matched perfectly") {
  SeededPair sp = gen_seeded(10, diagonal_uniform(4), 10, 6);
  MatchReport rep = stm_match(sp);
  CHECK(rep.accuracy_vs_truth == doctest::Approx(1.0));
  CHECK(rep.strict);

  // One gap: the only leftover label lands on the only leftover vertex
  // whether or not the fingerprint test commits it.
  SeededPair gap = gen_seeded(10, diagonal_uniform(4), 9, 6);
  CHECK(stm_match(gap).accuracy_vs_truth == doctest::Approx(1.0));
}

TEST_CASE("seeded matching recovers erasure-correlated graphs") {
  JointDistribution e = erasure_joint(0.5, 0.5);
  int good = 0;
  const int trials = 5;
  for (int t = 0; t < trials; ++t) {
    SeededPair sp = gen_seeded(150, e, 47, 500 + t);
    MatchReport rep = stm_match(sp, {.seed = 500ull + t});
    if (rep.accuracy_vs_truth >= 0.9) ++good;
    CHECK(is_permutation(rep.sigma2_hat));
    CHECK(rep.passes.size() >= 1);
  }
  CHECK(good >= 4);
}

TEST_CASE("one weak seed leaves the matching ambiguous") {
  SeededPair sp = gen_seeded(40, kDist, 1, 12);
  MatchReport rep = stm_match(sp);
  CHECK(rep.non_seed_accuracy < 0.5);
  CHECK_FALSE(rep.strict);
}

TEST_CASE("pass trace reports monotone seed growth") {
  JointDistribution e = erasure_joint(0.5, 0.5);
  SeededPair sp = gen_seeded(120, e, 40, 91);
  MatchOptions mo;
  mo.passes = 3;
  MatchReport rep = stm_match(sp, mo);
  REQUIRE(rep.passes.size() >= 1);
  int prev = 40;
  for (const auto& p : rep.passes) {
    CHECK(p.seeds_after >= prev);
    prev = p.seeds_after;
  }
}

TEST_CASE("seeded matching is deterministic") {
  SeededPair sp = gen_seeded(80, erasure_joint(0.4, 0.5), 25, 3);
  MatchOptions mo;
  mo.seed = 5;
  MatchReport a = stm_match(sp, mo);
  MatchReport b = stm_match(sp, mo);
  CHECK(a.sigma2_hat == b.sigma2_hat);
  CHECK(a.accuracy_vs_truth == b.accuracy_vs_truth);
}
