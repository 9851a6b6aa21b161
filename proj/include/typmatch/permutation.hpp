#pragma once

#include <functional>
#include <vector>

namespace typmatch {

// A permutation of {0, ..., n-1} stored as its image: perm[i] = pi(i).
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& p);
Permutation identity_permutation(int n);
Permutation inverse_permutation(const Permutation& p);
// Composition (a after b): result[i] = a[b[i]].
Permutation compose(const Permutation& a, const Permutation& b);

// Reindexing action on sequences: out[i] = seq[pi(i)].
template <typename T>
std::vector<T> apply_permutation(const Permutation& pi,
                                 const std::vector<T>& seq) {
  std::vector<T> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[pi[i]];
  return out;
}

// Cycle census of a permutation: m fixed points and c non-trivial
// cycles with the given lengths. cycle_decompose emits lengths in
// ascending order; signatures built by hand may list them in any order
// (standard_permutation lays blocks out in the order given), so
// equality of signatures is up to reordering of lengths.
struct CycleSignature {
  int n = 0;
  int m = 0;                 // fixed points
  int c = 0;                 // non-trivial cycles
  std::vector<int> lengths;  // each >= 2, summing to n - m

  bool valid() const;
  CycleSignature canonical() const;  // lengths sorted ascending
  bool operator==(const CycleSignature& o) const;
};

struct CycleDecomposition {
  CycleSignature signature;
  std::vector<std::vector<int>> cycles;  // non-trivial, each rotated to
                                         // start at its smallest element
  std::vector<int> fixed_points;
};

CycleDecomposition cycle_decompose(const Permutation& p);

// Canonical representative of a signature: non-trivial cycles occupy
// consecutive index blocks starting at 0, in the order the lengths are
// listed, fixed points at the tail. Within a block [a, b] the map is
// a -> b and j -> j-1 otherwise, so the block is one cycle.
Permutation standard_permutation(const CycleSignature& sig);

// Every distinct signature with the given n (lengths ascending),
// ordered by (m, lengths).
std::vector<CycleSignature> all_cycle_signatures(int n);

// Action of a vertex permutation on unordered pairs: position p of the
// result holds the upper-triangle index of {pi(i), pi(j)} where (i, j)
// is the p-th pair. Length n(n-1)/2.
Permutation induced_edge_permutation(const Permutation& pi, int n);

// Visit all n! permutations in lexicographic order.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn);

}  // namespace typmatch
