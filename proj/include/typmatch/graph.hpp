#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace typmatch {

// Flat index of the unordered pair (i, j), i < j, into the row-major
// upper triangle of an n x n matrix (diagonal excluded).
inline std::size_t ut_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

inline std::size_t ut_length(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

// Inverse of ut_index.
std::pair<int, int> ut_pair(std::size_t pos, int n);

// Undirected complete graph on n vertices whose edges carry attributes
// in [0, l). Attribute 0 is an ordinary value (it typically plays the
// role of a non-edge, but nothing here treats it specially).
struct AttributedGraph {
  int n = 0;
  int l = 2;
  std::vector<int> ut;  // attribute of pair (i, j) at ut_index(i, j, n)

  AttributedGraph() = default;
  AttributedGraph(int n_, int l_, int fill = 0);

  int attr(int u, int v) const;
  void set_attr(int u, int v, int a);
  std::size_t pair_count() const { return ut_length(n); }
};

// Vertex labeling: label[v] is the label of vertex v, a bijection on
// {0, ..., n-1}.
using Labeling = std::vector<int>;

// Fraction of vertices whose labels agree.
double accuracy(const Labeling& truth, const Labeling& estimate);

// Edge attributes of g read off in label order: position p holds the
// attribute between the vertices labeled i and j, where (i, j) is the
// p-th upper-triangle pair. Two graphs labeled consistently produce
// aligned sequences.
std::vector<int> upper_triangle(const AttributedGraph& g,
                                const Labeling& sigma);

// Assignment of the n labels to c communities. membership is indexed
// by label; sizes are the community sizes implied by it.
struct CommunityStructure {
  int c = 0;
  std::vector<int> membership;
  std::vector<int> sizes;

  static CommunityStructure from_membership(std::vector<int> membership);
};

// Per-community-pair attribute sequences of a labeled graph. Block
// (i, j) with i < j concatenates attributes between labels of community
// i and labels of community j (both ascending, community-i label major);
// block (i, i) is the upper triangle over community i's labels. Indexed
// via block(i, j).
struct BlockViews {
  int c = 0;
  std::vector<std::vector<int>> seqs;  // row-major over i <= j

  const std::vector<int>& block(int i, int j) const;
};

BlockViews block_views(const AttributedGraph& g, const Labeling& sigma,
                       const CommunityStructure& comm);

// JSON round-trips. Graphs serialize as {"n", "l", "edges"} where
// edges lists [u, v, attr] with attr != 0; absent pairs are attribute
// 0. Labelings serialize as a plain array.
AttributedGraph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const AttributedGraph& g);
Labeling labeling_from_json_text(const std::string& text);
std::string labeling_to_json_text(const Labeling& sigma);

}  // namespace typmatch
