#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "typmatch/distribution.hpp"
#include "typmatch/graph.hpp"

namespace typmatch {

enum class PairModel { kIid, kCommunity };

// Two graphs over the same vertex set whose edge attributes were drawn
// jointly pair-by-pair and then independently relabeled. sigma1 is
// always the identity; sigma2 is the hidden truth a matcher tries to
// recover.
struct CorrelatedPair {
  AttributedGraph g1, g2;
  Labeling sigma1, sigma2;
  PairModel model = PairModel::kIid;
  JointDistribution joint;  // i.i.d. model only
  // Community model only: membership by label, and the per-block
  // attribute joints in row-major (i, j) order with i <= j.
  std::optional<CommunityStructure> comm;
  std::vector<JointDistribution> block_joints;
  // Revealed side information: community of each g2 vertex.
  std::vector<int> comm_of_g2_vertex;
  std::uint64_t seed = 0;
};

// Pair with i.i.d. attribute draws from an lx x ly joint. Every
// unordered vertex pair is drawn from its own sub-stream, so the
// result depends only on (n, dist, seed).
CorrelatedPair gen_cper(int n, const JointDistribution& dist,
                        std::uint64_t seed);

// Bivariate attribute joint of an edge/non-edge pair where the second
// graph erases (deletes) each edge of the first independently:
//   P(1,1) = p(1-s), P(1,0) = p s, P(0,0) = 1-p, P(0,1) = 0.
JointDistribution erasure_joint(double p, double s);

// Community-structured pair: membership assigns labels to communities
// and block_joints[i][j] governs pairs between communities i and j.
// block_joints is a full c x c list (row-major) whose (i, j) and
// (j, i) entries must agree.
CorrelatedPair gen_cpcs(int n, const CommunityStructure& comm,
                        const std::vector<JointDistribution>& block_joints,
                        std::uint64_t seed);

// m graphs with attributes drawn per pair from an arity-m joint; the
// first labeling is the identity, the rest are uniform.
struct GraphCollection {
  int m = 0;
  std::vector<AttributedGraph> graphs;
  std::vector<Labeling> labelings;
  JointDistribution joint;
  std::uint64_t seed = 0;
};

GraphCollection gen_collection(int n, int m, const JointDistribution& dist,
                               std::uint64_t seed);

// Pair plus side information: lambda seed vertices of the second graph
// whose true labels are revealed (sorted by vertex id).
struct SeededPair {
  CorrelatedPair pair;
  std::vector<int> seed_vertices;    // vertices of g2
  std::vector<int> revealed_labels;  // aligned with seed_vertices
  int lambda = 0;
};

SeededPair gen_seeded(int n, const JointDistribution& dist, int lambda,
                      std::uint64_t seed);

}  // namespace typmatch
