#include "typmatch/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "typmatch/permutation.hpp"

namespace typmatch {

std::pair<int, int> ut_pair(std::size_t pos, int n) {
  for (int i = 0; i < n - 1; ++i) {
    std::size_t row = static_cast<std::size_t>(n - 1 - i);
    if (pos < row) return {i, i + 1 + static_cast<int>(pos)};
    pos -= row;
  }
  throw std::out_of_range("upper-triangle position out of range");
}

AttributedGraph::AttributedGraph(int n_, int l_, int fill) : n(n_), l(l_) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  if (l < 1) throw std::invalid_argument("attribute alphabet must be >= 1");
  if (fill < 0 || fill >= l) throw std::invalid_argument("fill outside alphabet");
  ut.assign(ut_length(n), fill);
}

int AttributedGraph::attr(int u, int v) const {
  if (u == v) throw std::invalid_argument("no self pairs");
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::invalid_argument("vertex outside graph");
  if (u > v) std::swap(u, v);
  return ut[ut_index(u, v, n)];
}

void AttributedGraph::set_attr(int u, int v, int a) {
  if (u == v) throw std::invalid_argument("no self pairs");
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::invalid_argument("vertex outside graph");
  if (a < 0 || a >= l) throw std::invalid_argument("attribute outside alphabet");
  if (u > v) std::swap(u, v);
  ut[ut_index(u, v, n)] = a;
}

double accuracy(const Labeling& truth, const Labeling& estimate) {
  if (truth.size() != estimate.size() || truth.empty())
    throw std::invalid_argument("labelings must have equal positive size");
  std::size_t hits = 0;
  for (std::size_t v = 0; v < truth.size(); ++v)
    if (truth[v] == estimate[v]) ++hits;
  return static_cast<double>(hits) / truth.size();
}

std::vector<int> upper_triangle(const AttributedGraph& g,
                                const Labeling& sigma) {
  if (static_cast<int>(sigma.size()) != g.n || !is_permutation(sigma))
    throw std::invalid_argument("labeling must be a bijection on the vertices");
  Labeling inv = inverse_permutation(sigma);
  std::vector<int> out(ut_length(g.n));
  std::size_t pos = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) out[pos++] = g.attr(inv[i], inv[j]);
  return out;
}

CommunityStructure CommunityStructure::from_membership(
    std::vector<int> membership) {
  CommunityStructure cs;
  cs.membership = std::move(membership);
  if (cs.membership.empty())
    throw std::invalid_argument("empty community membership");
  cs.c = *std::max_element(cs.membership.begin(), cs.membership.end()) + 1;
  cs.sizes.assign(cs.c, 0);
  for (int m : cs.membership) {
    if (m < 0) throw std::invalid_argument("negative community id");
    ++cs.sizes[m];
  }
  for (int s : cs.sizes)
    if (s == 0) throw std::invalid_argument("empty community");
  return cs;
}

const std::vector<int>& BlockViews::block(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= c) throw std::out_of_range("community index out of range");
  return seqs[static_cast<std::size_t>(i) * c + j];
}

BlockViews block_views(const AttributedGraph& g, const Labeling& sigma,
                       const CommunityStructure& comm) {
  if (static_cast<int>(comm.membership.size()) != g.n)
    throw std::invalid_argument("membership length must equal n");
  Labeling inv = inverse_permutation(sigma);

  std::vector<std::vector<int>> labels_of(comm.c);
  for (int label = 0; label < g.n; ++label)
    labels_of[comm.membership[label]].push_back(label);

  BlockViews bv;
  bv.c = comm.c;
  bv.seqs.assign(static_cast<std::size_t>(comm.c) * comm.c, {});
  for (int i = 0; i < comm.c; ++i) {
    for (int j = i; j < comm.c; ++j) {
      auto& seq = bv.seqs[static_cast<std::size_t>(i) * comm.c + j];
      if (i == j) {
        const auto& ls = labels_of[i];
        for (std::size_t a = 0; a < ls.size(); ++a)
          for (std::size_t b = a + 1; b < ls.size(); ++b)
            seq.push_back(g.attr(inv[ls[a]], inv[ls[b]]));
      } else {
        for (int s : labels_of[i])
          for (int t : labels_of[j]) seq.push_back(g.attr(inv[s], inv[t]));
      }
    }
  }
  return bv;
}

AttributedGraph graph_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("n") || !j.contains("l"))
    throw std::invalid_argument("graph JSON needs \"n\" and \"l\"");
  AttributedGraph g(j.at("n").get<int>(), j.at("l").get<int>());
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument("edge entries must be [u, v, attr]");
      g.set_attr(e[0].get<int>(), e[1].get<int>(), e[2].get<int>());
    }
  }
  return g;
}

std::string graph_to_json_text(const AttributedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (int a = g.attr(i, j); a != 0)
        edges.push_back({i, j, a});
  nlohmann::json j{{"n", g.n}, {"l", g.l}, {"edges", std::move(edges)}};
  return j.dump();
}

Labeling labeling_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("labeling JSON must be an array");
  Labeling sigma = j.get<Labeling>();
  if (!is_permutation(sigma))
    throw std::invalid_argument("labeling must be a bijection");
  return sigma;
}

std::string labeling_to_json_text(const Labeling& sigma) {
  return nlohmann::json(sigma).dump();
}

}  // namespace typmatch
