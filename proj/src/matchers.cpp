#include "typmatch/matchers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "typmatch/permutation.hpp"
#include "typmatch/rng.hpp"

namespace typmatch {

double tm_default_eps(int n) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  return std::pow(static_cast<double>(n), -0.9);
}

double stm_default_eps(int lambda) {
  if (lambda < 1) throw std::invalid_argument("need lambda >= 1");
  return std::pow(static_cast<double>(lambda), -0.4);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Uniform pick from a stream of candidates seen one at a time.
class Reservoir {
 public:
  explicit Reservoir(std::uint64_t key) : rs_(key) {}
  void offer(const Labeling& cand) {
    ++count_;
    if (rs_.next_below(count_) == 0) pick_ = cand;
  }
  std::uint64_t count() const { return count_; }
  const Labeling& pick() const { return pick_; }

 private:
  RandomStream rs_;
  std::uint64_t count_ = 0;
  Labeling pick_;
};

// Sorted sparse type from a list of flat cell indices.
TypeCounts type_from_cells(std::vector<std::size_t> cells,
                           const std::vector<int>& alphabets) {
  std::sort(cells.begin(), cells.end());
  TypeCounts t;
  t.alphabets = alphabets;
  t.n = static_cast<int>(cells.size());
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    t.cells.emplace_back(cells[i], static_cast<int>(j - i));
    i = j;
  }
  return t;
}

TypeCounts pair_type(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& alphabets) {
  std::vector<std::size_t> cells(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    cells[i] = static_cast<std::size_t>(a[i]) * alphabets[1] + b[i];
  return type_from_cells(std::move(cells), alphabets);
}

void finish_common(MatchReport& r, const Reservoir& res,
                   const Labeling& truth) {
  r.sigma_size = res.count();
  r.failed = res.count() == 0;
  r.strict = res.count() == 1;
  if (!r.failed) {
    r.sigma2_hat = res.pick();
    r.accuracy_vs_truth = accuracy(truth, r.sigma2_hat);
  }
}

}  // namespace

MatchReport tm_match_exhaustive(const CorrelatedPair& cp,
                                const MatchOptions& opts) {
  auto t0 = Clock::now();
  const int n = cp.g1.n;
  if (cp.model != PairModel::kIid)
    throw std::invalid_argument("exhaustive matcher expects an i.i.d. pair");
  if (n > 9 && !opts.force)
    throw std::invalid_argument("n > 9 needs force (n! enumeration)");

  const JointDistribution& dist = cp.joint;
  const int ly = dist.alphabets()[1];
  const double eps = opts.eps ? *opts.eps : tm_default_eps(n);
  TypicalityTest test(dist, eps);

  std::vector<int> u1 = upper_triangle(cp.g1, cp.sigma1);
  std::vector<char> zero(dist.table_size());
  for (std::size_t c = 0; c < zero.size(); ++c)
    zero[c] = dist.cell(c) == 0.0;

  Labeling assign(n, -1);
  std::vector<char> used(n, 0);
  std::vector<std::size_t> cells;
  cells.reserve(ut_length(n));
  Reservoir res(stream_key(opts.seed, "tm-pick"));

  std::function<void(int)> dfs = [&](int v) {
    if (v == n) {
      if (test(type_from_cells(cells, dist.alphabets()))) res.offer(assign);
      return;
    }
    for (int label = 0; label < n; ++label) {
      if (used[label]) continue;
      bool ok = true;
      std::size_t pushed = 0;
      for (int u = 0; u < v; ++u) {
        int a = assign[u], b = label;
        if (a > b) std::swap(a, b);
        std::size_t cell =
            static_cast<std::size_t>(u1[ut_index(a, b, n)]) * ly +
            cp.g2.attr(u, v);
        if (zero[cell]) {
          ok = false;
          break;
        }
        cells.push_back(cell);
        ++pushed;
      }
      if (ok) {
        assign[v] = label;
        used[label] = 1;
        dfs(v + 1);
        used[label] = 0;
        assign[v] = -1;
      }
      cells.resize(cells.size() - pushed);
    }
  };
  dfs(0);

  MatchReport r;
  r.eps_used = eps;
  finish_common(r, res, cp.sigma2);
  r.truth_in_sigma =
      test(pair_type(u1, upper_triangle(cp.g2, cp.sigma2), dist.alphabets()));
  r.wall_ms = elapsed_ms(t0);
  return r;
}

namespace {

// Shared core of the community matchers: enumerate labelings that send
// each vertex pool onto the matching label pool and test every block
// sequence against its joint.
struct CommunityEnum {
  const AttributedGraph* g1 = nullptr;
  const AttributedGraph* g2 = nullptr;
  int n = 0, c = 0;
  CommunityStructure cs;                       // membership by label
  const std::vector<JointDistribution>* joints = nullptr;
  std::vector<TypicalityTest> tests;           // row-major i <= j

  std::vector<std::vector<int>> labels_of, verts_of;
  BlockViews bv1;

  CommunityEnum(const CorrelatedPair& cp, const CommunityStructure& comm,
                const std::vector<int>& mem2, double eps)
      : g1(&cp.g1), g2(&cp.g2), n(cp.g1.n), c(comm.c), cs(comm),
        joints(&cp.block_joints) {
    labels_of.assign(c, {});
    verts_of.assign(c, {});
    for (int label = 0; label < n; ++label)
      labels_of[cs.membership[label]].push_back(label);
    for (int v = 0; v < n; ++v) verts_of[mem2[v]].push_back(v);
    for (int i = 0; i < c; ++i)
      if (labels_of[i].size() != verts_of[i].size())
        throw std::invalid_argument("community sizes disagree across graphs");
    bv1 = block_views(*g1, identity_permutation(n), cs);
    for (int i = 0; i < c; ++i)
      for (int j = i; j < c; ++j)
        tests.emplace_back((*joints)[static_cast<std::size_t>(i) * c + j],
                           eps);
  }

  const TypicalityTest& test(int i, int j) const {
    // tests stored for i <= j in row-major order of the triangle
    int idx = i * c - i * (i - 1) / 2 + (j - i);
    return tests[idx];
  }

  bool typical(const Labeling& sigma_hat) const {
    BlockViews bv2 = block_views(*g2, sigma_hat, cs);
    const auto& alph = (*joints)[0].alphabets();
    for (int i = 0; i < c; ++i)
      for (int j = i; j < c; ++j) {
        if (bv1.block(i, j).empty()) continue;
        if (!test(i, j)(pair_type(bv1.block(i, j), bv2.block(i, j), alph)))
          return false;
      }
    return true;
  }

  // Visit every labeling consistent with the pools.
  void enumerate(const std::function<void(const Labeling&)>& fn) const {
    Labeling sigma(n, -1);
    std::function<void(int)> rec = [&](int ci) {
      if (ci == c) {
        fn(sigma);
        return;
      }
      std::vector<int> pos(verts_of[ci].size());
      std::iota(pos.begin(), pos.end(), 0);
      do {
        for (std::size_t t = 0; t < pos.size(); ++t)
          sigma[verts_of[ci][pos[t]]] = labels_of[ci][t];
        rec(ci + 1);
      } while (std::next_permutation(pos.begin(), pos.end()));
    };
    rec(0);
  }

  double candidate_count() const {
    double total = 1.0;
    for (int i = 0; i < c; ++i) {
      for (std::size_t t = 2; t <= verts_of[i].size(); ++t)
        total *= static_cast<double>(t);
    }
    return total;
  }
};

}  // namespace

MatchReport tm_match_sbm(const CorrelatedPair& cp, const MatchOptions& opts) {
  auto t0 = Clock::now();
  if (cp.model != PairModel::kCommunity || !cp.comm)
    throw std::invalid_argument("community matcher expects a community pair");
  const double eps = opts.eps ? *opts.eps : tm_default_eps(cp.g1.n);

  CommunityEnum en(cp, *cp.comm, cp.comm_of_g2_vertex, eps);
  if (en.candidate_count() > 2e6 && !opts.force)
    throw std::invalid_argument("candidate space too large without force");

  Reservoir res(stream_key(opts.seed, "tm-pick"));
  en.enumerate([&](const Labeling& sigma) {
    if (en.typical(sigma)) res.offer(sigma);
  });

  MatchReport r;
  r.eps_used = eps;
  finish_common(r, res, cp.sigma2);
  r.truth_in_sigma = en.typical(cp.sigma2);
  r.wall_ms = elapsed_ms(t0);
  return r;
}

MatchReport tm_match_sbm_blind(const CorrelatedPair& cp,
                               const MatchOptions& opts) {
  auto t0 = Clock::now();
  if (cp.model != PairModel::kCommunity || !cp.comm)
    throw std::invalid_argument("community matcher expects a community pair");
  const int n = cp.g1.n;
  const int c = cp.comm->c;
  if ((n > 8 || c != 2) && !opts.force)
    throw std::invalid_argument(
        "blind sweep is guarded to n <= 8 with two communities");
  const double eps = opts.eps ? *opts.eps : tm_default_eps(n);

  // Base multiset of memberships with the true sizes.
  std::vector<int> base;
  for (int i = 0; i < c; ++i)
    base.insert(base.end(), cp.comm->sizes[i], i);
  std::sort(base.begin(), base.end());

  std::set<Labeling> pool;
  std::vector<int> mem1 = base;
  do {
    CommunityStructure cs1 = CommunityStructure::from_membership(mem1);
    std::vector<int> mem2 = base;
    do {
      CommunityEnum en(cp, cs1, mem2, eps);
      en.enumerate([&](const Labeling& sigma) {
        if (en.typical(sigma)) pool.insert(sigma);
      });
    } while (std::next_permutation(mem2.begin(), mem2.end()));
  } while (std::next_permutation(mem1.begin(), mem1.end()));

  MatchReport r;
  r.eps_used = eps;
  r.sigma_size = pool.size();
  r.failed = pool.empty();
  r.strict = pool.size() == 1;
  r.truth_in_sigma = pool.count(cp.sigma2) > 0;
  if (!r.failed) {
    RandomStream rs(stream_key(opts.seed, "tm-pick"));
    auto it = pool.begin();
    std::advance(it, static_cast<long>(rs.next_below(pool.size())));
    r.sigma2_hat = *it;
    r.accuracy_vs_truth = accuracy(cp.sigma2, r.sigma2_hat);
  }
  r.wall_ms = elapsed_ms(t0);
  return r;
}

MatchReport tm_match_collection(const GraphCollection& gc,
                                const MatchOptions& opts) {
  auto t0 = Clock::now();
  const int m = gc.m;
  const int n = gc.graphs[0].n;
  double space = 1.0;
  for (int t = 2; t <= n; ++t) space *= t;
  space = std::pow(space, m - 1);
  if (space > 2e6 && !opts.force)
    throw std::invalid_argument("tuple space too large without force");
  const double eps = opts.eps ? *opts.eps : tm_default_eps(n);
  TypicalityTest test(gc.joint, eps);
  const auto& alph = gc.joint.alphabets();
  const std::size_t pairs = ut_length(n);

  std::vector<std::vector<int>> seqs(m);
  seqs[0] = upper_triangle(gc.graphs[0], gc.labelings[0]);
  std::vector<Labeling> hats(m - 1);

  auto tuple_type = [&]() {
    std::vector<std::size_t> cells(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
      std::size_t idx = 0;
      for (int g = 0; g < m; ++g)
        idx = idx * alph[g] + seqs[g][p];
      cells[p] = idx;
    }
    return type_from_cells(std::move(cells), alph);
  };

  std::uint64_t count = 0;
  RandomStream pick_rs(stream_key(opts.seed, "tm-pick"));
  std::vector<Labeling> picked;
  std::function<void(int)> rec = [&](int g) {
    if (g == m) {
      if (test(tuple_type())) {
        ++count;
        if (pick_rs.next_below(count) == 0) picked = hats;
      }
      return;
    }
    for_each_permutation(n, [&](const Permutation& sigma) {
      seqs[g] = upper_triangle(gc.graphs[g], sigma);
      hats[g - 1] = sigma;
      rec(g + 1);
    });
  };
  rec(1);

  MatchReport r;
  r.eps_used = eps;
  r.sigma_size = count;
  r.failed = count == 0;
  r.strict = count == 1;
  {
    // Truth tuple checked directly.
    for (int g = 1; g < m; ++g)
      seqs[g] = upper_triangle(gc.graphs[g], gc.labelings[g]);
    r.truth_in_sigma = test(tuple_type());
  }
  if (!r.failed) {
    r.collection_hats = picked;
    r.sigma2_hat = picked[0];
    double acc = 0.0;
    for (int g = 1; g < m; ++g)
      acc += accuracy(gc.labelings[g], picked[g - 1]);
    r.accuracy_vs_truth = acc / (m - 1);
  }
  r.wall_ms = elapsed_ms(t0);
  return r;
}

std::vector<int> fingerprint(const AttributedGraph& g, int vertex,
                             const std::vector<int>& anchors) {
  std::vector<int> f;
  f.reserve(anchors.size());
  for (int a : anchors) {
    if (a == vertex)
      throw std::invalid_argument("vertex may not be its own anchor");
    f.push_back(g.attr(vertex, a));
  }
  return f;
}

MatchReport stm_match(const SeededPair& sp, const MatchOptions& opts) {
  auto t0 = Clock::now();
  const CorrelatedPair& cp = sp.pair;
  const int n = cp.g1.n;
  const JointDistribution& dist = cp.joint;
  const auto& alph = dist.alphabets();

  std::vector<int> matched(n, -1);  // g2 vertex -> label
  std::vector<char> label_used(n, 0);
  std::vector<char> is_seed(n, 0);
  // Anchor lists stay aligned: anchors2[k] in g2 corresponds to the g1
  // vertex anchors1[k] (labels equal g1 vertices since sigma1 = id).
  std::vector<int> anchors2 = sp.seed_vertices;
  std::vector<int> anchors1 = sp.revealed_labels;
  for (std::size_t k = 0; k < anchors2.size(); ++k) {
    matched[anchors2[k]] = anchors1[k];
    label_used[anchors1[k]] = 1;
    is_seed[anchors2[k]] = 1;
  }

  MatchReport r;
  for (int pass = 1; pass <= opts.passes; ++pass) {
    int lambda = static_cast<int>(anchors2.size());
    if (lambda == 0) break;
    double eps = opts.eps ? *opts.eps : stm_default_eps(lambda);
    r.eps_used = eps;
    TypicalityTest test(dist, eps);

    std::vector<int> todo, pool;
    for (int v = 0; v < n; ++v)
      if (matched[v] < 0) todo.push_back(v);
    for (int i = 0; i < n; ++i)
      if (!label_used[i]) pool.push_back(i);
    if (todo.empty()) break;

    std::vector<std::vector<int>> f1(pool.size());
    for (std::size_t q = 0; q < pool.size(); ++q)
      f1[q] = fingerprint(cp.g1, pool[q], anchors1);

    // Proposals first, commits after: a vertex is matched only when it
    // is typical with exactly one candidate, and two vertices claiming
    // the same candidate cancel each other.
    std::vector<std::pair<int, int>> proposals;  // (g2 vertex, label)
    for (int j : todo) {
      std::vector<int> f2 = fingerprint(cp.g2, j, anchors2);
      int hit = -1;
      int hits = 0;
      for (std::size_t q = 0; q < pool.size(); ++q) {
        if (test(pair_type(f1[q], f2, alph))) {
          ++hits;
          hit = pool[q];
          if (hits > 1) break;
        }
      }
      if (hits == 1) proposals.emplace_back(j, hit);
    }
    std::vector<int> claims(n, 0);
    for (const auto& [j, i] : proposals) ++claims[i];
    int committed = 0;
    for (const auto& [j, i] : proposals) {
      if (claims[i] != 1) continue;
      matched[j] = i;
      label_used[i] = 1;
      anchors2.push_back(j);
      anchors1.push_back(i);
      ++committed;
    }

    int left = 0;
    for (int v = 0; v < n; ++v)
      if (matched[v] < 0) ++left;
    r.passes.push_back({pass, eps, committed, left,
                        static_cast<int>(anchors2.size())});
    if (left == 0) break;
  }

  std::vector<int> todo, pool;
  for (int v = 0; v < n; ++v)
    if (matched[v] < 0) todo.push_back(v);
  for (int i = 0; i < n; ++i)
    if (!label_used[i]) pool.push_back(i);
  r.strict = todo.empty();
  if (!todo.empty()) {
    RandomStream rs(stream_key(opts.seed, "stm-fill"));
    rs.shuffle(pool);
    for (std::size_t t = 0; t < todo.size(); ++t) matched[todo[t]] = pool[t];
  }

  r.sigma2_hat.assign(matched.begin(), matched.end());
  r.accuracy_vs_truth = accuracy(cp.sigma2, r.sigma2_hat);
  int non_seed = 0, non_seed_ok = 0;
  for (int v = 0; v < n; ++v) {
    if (is_seed[v]) continue;
    ++non_seed;
    if (r.sigma2_hat[v] == cp.sigma2[v]) ++non_seed_ok;
  }
  r.non_seed_accuracy =
      non_seed == 0 ? 1.0 : static_cast<double>(non_seed_ok) / non_seed;
  r.wall_ms = elapsed_ms(t0);
  return r;
}

}  // namespace typmatch
