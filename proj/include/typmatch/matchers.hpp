#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "typmatch/distribution.hpp"
#include "typmatch/generators.hpp"
#include "typmatch/graph.hpp"

namespace typmatch {

// Typicality band used when none is given: n^(-0.9) for whole-graph
// matching (n vertices), lambda^(-0.4) for fingerprints of length
// lambda. Both shrink slower than 1/length, so the truth stays typical
// as the instance grows.
double tm_default_eps(int n);
double stm_default_eps(int lambda);

struct MatchOptions {
  std::optional<double> eps;  // band; per-pass schedule when unset
  std::uint64_t seed = 1;     // uniform pick among candidates, residual fill
  bool force = false;         // override enumeration guards
  int passes = 2;             // seeded matching rounds
};

struct PassTrace {
  int pass = 0;
  double eps = 0.0;
  int newly_matched = 0;
  int ambiguous = 0;    // unmatched vertices left after the pass
  int seeds_after = 0;  // anchor count going into the next pass
};

struct MatchReport {
  // No candidate labeling was typical; sigma2_hat is empty.
  bool failed = false;
  Labeling sigma2_hat;
  // Collections only: one labeling per graph after the first.
  std::vector<Labeling> collection_hats;
  std::uint64_t sigma_size = 0;  // candidates that passed the test
  bool truth_in_sigma = false;
  double accuracy_vs_truth = 0.0;
  double non_seed_accuracy = 0.0;  // seeded matching only
  bool strict = false;  // every vertex pinned down without random fill
  std::vector<PassTrace> passes;
  double eps_used = 0.0;
  double wall_ms = 0.0;
};

// Exhaustive matcher for i.i.d. pairs: collects every labeling of g2
// whose edge sequence is jointly typical with g1's, then picks one
// uniformly. Assignments are grown vertex by vertex and a branch is
// cut as soon as a determined pair lands on a zero-probability cell.
// Guarded to n <= 9 unless forced.
MatchReport tm_match_exhaustive(const CorrelatedPair& cp,
                                const MatchOptions& opts = {});

// Community-structured matcher with known memberships: candidates
// respect communities and every block sequence must be typical for its
// block joint.
MatchReport tm_match_sbm(const CorrelatedPair& cp,
                         const MatchOptions& opts = {});

// Blind variant: memberships are unknown, so candidate community
// assignments with the true sizes are swept on both sides and the
// candidate sets are pooled. Guarded to n <= 8 with two communities
// unless forced.
MatchReport tm_match_sbm_blind(const CorrelatedPair& cp,
                               const MatchOptions& opts = {});

// Joint matcher for a collection: the first graph's labeling is known;
// tuples of labelings for the rest must make all m sequences jointly
// typical. Guarded to (n!)^(m-1) <= 2e6 unless forced.
MatchReport tm_match_collection(const GraphCollection& gc,
                                const MatchOptions& opts = {});

// Attribute profile of a vertex toward a list of anchor vertices.
std::vector<int> fingerprint(const AttributedGraph& g, int vertex,
                             const std::vector<int>& anchors);

// Seeded matcher: in each pass, an unmatched g2 vertex is matched to
// the unique unused g1 vertex whose fingerprint toward the anchors is
// jointly typical with its own; ambiguous vertices wait, collisions
// are rolled back, and confirmed matches become anchors for the next
// pass. Vertices still unmatched after the last pass get the leftover
// labels in random order (strict is false in that case).
MatchReport stm_match(const SeededPair& sp, const MatchOptions& opts = {});

}  // namespace typmatch
