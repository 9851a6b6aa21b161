#include "typmatch/generators.hpp"

#include <algorithm>
#include <stdexcept>

#include "typmatch/permutation.hpp"
#include "typmatch/rng.hpp"

namespace typmatch {

namespace {

// Draw a flat cell index from a pmf table via its cdf.
std::size_t draw_cell(const std::vector<double>& cum, double u) {
  return std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
}

std::vector<double> cdf_of(const JointDistribution& d) {
  std::vector<double> cum(d.table_size());
  double acc = 0.0;
  for (std::size_t c = 0; c < cum.size(); ++c) {
    acc += d.cell(c);
    cum[c] = acc;
  }
  cum.back() = 1.0;
  return cum;
}

Labeling random_labeling(int n, std::uint64_t key) {
  Labeling sigma = identity_permutation(n);
  RandomStream rs(key);
  rs.shuffle(sigma);
  return sigma;
}

}  // namespace

CorrelatedPair gen_cper(int n, const JointDistribution& dist,
                        std::uint64_t seed) {
  if (dist.arity() != 2)
    throw std::invalid_argument("pair generation needs a bivariate joint");
  if (n < 2) throw std::invalid_argument("need at least two vertices");

  CorrelatedPair cp;
  cp.model = PairModel::kIid;
  cp.joint = dist;
  cp.seed = seed;
  const int lx = dist.alphabets()[0], ly = dist.alphabets()[1];
  cp.g1 = AttributedGraph(n, lx);
  cp.g2 = AttributedGraph(n, ly);
  cp.sigma1 = identity_permutation(n);
  cp.sigma2 = random_labeling(n, stream_key(seed, "sigma2"));
  Labeling inv2 = inverse_permutation(cp.sigma2);

  std::vector<double> cum = cdf_of(dist);
  // One sub-stream per labeled pair: the draw for pair (i, j) does not
  // depend on traversal order.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::size_t pos = ut_index(i, j, n);
      RandomStream rs(stream_key(seed, "edges", pos));
      std::size_t cell = draw_cell(cum, rs.next_u01());
      int x1 = static_cast<int>(cell / ly);
      int x2 = static_cast<int>(cell % ly);
      cp.g1.set_attr(i, j, x1);
      cp.g2.set_attr(inv2[i], inv2[j], x2);
    }
  }
  return cp;
}

JointDistribution erasure_joint(double p, double s) {
  if (!(p >= 0.0 && p <= 1.0 && s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("p and s must lie in [0, 1]");
  // Cells in row-major (x1, x2) order over {0, 1} x {0, 1}.
  return JointDistribution({2, 2},
                           {1.0 - p, 0.0, p * s, p * (1.0 - s)});
}

CorrelatedPair gen_cpcs(int n, const CommunityStructure& comm,
                        const std::vector<JointDistribution>& block_joints,
                        std::uint64_t seed) {
  if (static_cast<int>(comm.membership.size()) != n)
    throw std::invalid_argument("membership length must equal n");
  if (block_joints.size() != static_cast<std::size_t>(comm.c) * comm.c)
    throw std::invalid_argument("need a c x c table of block joints");
  int lx = block_joints[0].alphabets()[0];
  int ly = block_joints[0].alphabets()[1];
  for (int i = 0; i < comm.c; ++i) {
    for (int j = 0; j < comm.c; ++j) {
      const auto& d = block_joints[static_cast<std::size_t>(i) * comm.c + j];
      if (d.arity() != 2 || d.alphabets()[0] != lx || d.alphabets()[1] != ly)
        throw std::invalid_argument("block joints must share one alphabet");
      const auto& dt = block_joints[static_cast<std::size_t>(j) * comm.c + i];
      if (d.pmf() != dt.pmf())
        throw std::invalid_argument("block joints must be symmetric in (i, j)");
    }
  }

  CorrelatedPair cp;
  cp.model = PairModel::kCommunity;
  cp.comm = comm;
  cp.block_joints = block_joints;
  cp.seed = seed;
  cp.joint = block_joints[0];
  cp.g1 = AttributedGraph(n, lx);
  cp.g2 = AttributedGraph(n, ly);
  cp.sigma1 = identity_permutation(n);
  cp.sigma2 = random_labeling(n, stream_key(seed, "sigma2"));
  Labeling inv2 = inverse_permutation(cp.sigma2);

  std::vector<std::vector<double>> cums;
  cums.reserve(block_joints.size());
  for (const auto& d : block_joints) cums.push_back(cdf_of(d));

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::size_t pos = ut_index(i, j, n);
      RandomStream rs(stream_key(seed, "edges", pos));
      int bi = comm.membership[i], bj = comm.membership[j];
      const auto& cum = cums[static_cast<std::size_t>(bi) * comm.c + bj];
      std::size_t cell = draw_cell(cum, rs.next_u01());
      cp.g1.set_attr(i, j, static_cast<int>(cell / ly));
      cp.g2.set_attr(inv2[i], inv2[j], static_cast<int>(cell % ly));
    }
  }
  cp.comm_of_g2_vertex.resize(n);
  for (int v = 0; v < n; ++v)
    cp.comm_of_g2_vertex[v] = comm.membership[cp.sigma2[v]];
  return cp;
}

GraphCollection gen_collection(int n, int m, const JointDistribution& dist,
                               std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("need at least two graphs");
  if (dist.arity() != m)
    throw std::invalid_argument("joint arity must equal the collection size");
  if (n < 2) throw std::invalid_argument("need at least two vertices");

  GraphCollection gc;
  gc.m = m;
  gc.joint = dist;
  gc.seed = seed;
  gc.labelings.push_back(identity_permutation(n));
  for (int g = 1; g < m; ++g)
    gc.labelings.push_back(random_labeling(n, stream_key(seed, "sigma", g)));
  std::vector<Labeling> inv;
  inv.reserve(m);
  for (const auto& s : gc.labelings) inv.push_back(inverse_permutation(s));
  for (int g = 0; g < m; ++g)
    gc.graphs.emplace_back(n, dist.alphabets()[g]);

  std::vector<double> cum = cdf_of(dist);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::size_t pos = ut_index(i, j, n);
      RandomStream rs(stream_key(seed, "edges", pos));
      std::vector<int> sym = dist.symbols(draw_cell(cum, rs.next_u01()));
      for (int g = 0; g < m; ++g)
        gc.graphs[g].set_attr(inv[g][i], inv[g][j], sym[g]);
    }
  }
  return gc;
}

SeededPair gen_seeded(int n, const JointDistribution& dist, int lambda,
                      std::uint64_t seed) {
  if (lambda < 0 || lambda > n)
    throw std::invalid_argument("lambda must lie in [0, n]");
  SeededPair sp;
  sp.pair = gen_cper(n, dist, seed);
  sp.lambda = lambda;

  std::vector<int> verts = identity_permutation(n);
  RandomStream rs(stream_key(seed, "seeds"));
  rs.shuffle(verts);
  verts.resize(lambda);
  std::sort(verts.begin(), verts.end());
  sp.seed_vertices = std::move(verts);
  sp.revealed_labels.reserve(lambda);
  for (int v : sp.seed_vertices)
    sp.revealed_labels.push_back(sp.pair.sigma2[v]);
  return sp;
}

}  // namespace typmatch
