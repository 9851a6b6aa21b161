#include "typmatch/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace typmatch {

namespace {
std::size_t table_size_of(const std::vector<int>& alphabets) {
  std::size_t s = 1;
  for (int a : alphabets) {
    if (a <= 0) throw std::invalid_argument("alphabet size must be positive");
    s *= static_cast<std::size_t>(a);
  }
  return s;
}
}  // namespace

JointDistribution::JointDistribution(std::vector<int> alphabets,
                                     std::vector<double> pmf)
    : alphabets_(std::move(alphabets)), pmf_(std::move(pmf)) {
  if (alphabets_.empty()) throw std::invalid_argument("arity must be >= 1");
  if (pmf_.size() != table_size_of(alphabets_))
    throw std::invalid_argument("pmf size does not match alphabet product");
  double total = 0.0;
  for (double v : pmf_) {
    if (!(v >= 0.0)) throw std::invalid_argument("pmf entries must be >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("pmf must sum to 1");
}

std::size_t JointDistribution::index(std::span<const int> symbols) const {
  if (symbols.size() != alphabets_.size())
    throw std::invalid_argument("symbol tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] < 0 || symbols[i] >= alphabets_[i])
      throw std::out_of_range("symbol outside alphabet");
    idx = idx * static_cast<std::size_t>(alphabets_[i]) +
          static_cast<std::size_t>(symbols[i]);
  }
  return idx;
}

std::vector<int> JointDistribution::symbols(std::size_t flat) const {
  std::vector<int> out(alphabets_.size());
  for (std::size_t i = alphabets_.size(); i-- > 0;) {
    out[i] = static_cast<int>(flat % static_cast<std::size_t>(alphabets_[i]));
    flat /= static_cast<std::size_t>(alphabets_[i]);
  }
  return out;
}

JointDistribution JointDistribution::marginal(
    const std::vector<int>& coords) const {
  std::vector<int> alph(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= arity())
      throw std::out_of_range("marginal coordinate out of range");
    alph[i] = alphabets_[coords[i]];
  }
  std::vector<double> out(table_size_of(alph), 0.0);
  std::vector<int> sym;
  std::vector<int> sub(coords.size());
  for (std::size_t flat = 0; flat < pmf_.size(); ++flat) {
    if (pmf_[flat] == 0.0) continue;
    sym = symbols(flat);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      sub[i] = sym[coords[i]];
      idx = idx * static_cast<std::size_t>(alph[i]) +
            static_cast<std::size_t>(sub[i]);
    }
    out[idx] += pmf_[flat];
  }
  return JointDistribution(std::move(alph), std::move(out));
}

JointDistribution JointDistribution::product_of_marginals() const {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < arity(); ++i) blocks.push_back({i});
  return partition_marginal_product(blocks);
}

JointDistribution JointDistribution::partition_marginal_product(
    const std::vector<std::vector<int>>& blocks) const {
  std::vector<bool> seen(alphabets_.size(), false);
  for (const auto& b : blocks)
    for (int c : b) {
      if (c < 0 || c >= arity() || seen[c])
        throw std::invalid_argument("blocks must partition the coordinates");
      seen[c] = true;
    }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("blocks must cover all coordinates");

  std::vector<JointDistribution> margs;
  margs.reserve(blocks.size());
  for (const auto& b : blocks) margs.push_back(marginal(b));

  std::vector<double> out(pmf_.size(), 1.0);
  std::vector<int> sym;
  std::vector<int> sub;
  for (std::size_t flat = 0; flat < pmf_.size(); ++flat) {
    sym = symbols(flat);
    double v = 1.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      sub.assign(blocks[j].size(), 0);
      for (std::size_t i = 0; i < blocks[j].size(); ++i)
        sub[i] = sym[blocks[j][i]];
      v *= margs[j].at(sub);
    }
    out[flat] = v;
  }
  return JointDistribution(alphabets_, std::move(out));
}

JointDistribution JointDistribution::uniform(std::vector<int> alphabets) {
  std::size_t s = table_size_of(alphabets);
  return JointDistribution(std::move(alphabets),
                           std::vector<double>(s, 1.0 / double(s)));
}

double TypeCounts::freq(std::size_t flat) const {
  return n == 0 ? 0.0 : static_cast<double>(count(flat)) / n;
}

int TypeCounts::count(std::size_t flat) const {
  auto it = std::lower_bound(
      cells.begin(), cells.end(), flat,
      [](const std::pair<std::size_t, int>& c, std::size_t key) {
        return c.first < key;
      });
  if (it == cells.end() || it->first != flat) return 0;
  return it->second;
}

std::vector<double> TypeCounts::dense(std::size_t table_size) const {
  std::vector<double> out(table_size, 0.0);
  for (const auto& [flat, c] : cells)
    out[flat] = static_cast<double>(c) / n;
  return out;
}

TypeCounts joint_type(std::span<const std::vector<int>> sequences,
                      const std::vector<int>& alphabets) {
  if (sequences.empty())
    throw std::invalid_argument("need at least one sequence");
  if (sequences.size() != alphabets.size())
    throw std::invalid_argument("one alphabet per sequence required");
  std::size_t n = sequences[0].size();
  for (const auto& s : sequences)
    if (s.size() != n) throw std::invalid_argument("sequence length mismatch");

  std::vector<std::size_t> flats(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < sequences.size(); ++k) {
      int v = sequences[k][pos];
      if (v < 0 || v >= alphabets[k])
        throw std::out_of_range("symbol outside alphabet");
      idx = idx * static_cast<std::size_t>(alphabets[k]) +
            static_cast<std::size_t>(v);
    }
    flats[pos] = idx;
  }
  std::sort(flats.begin(), flats.end());

  TypeCounts t;
  t.alphabets = alphabets;
  t.n = static_cast<int>(n);
  for (std::size_t i = 0; i < flats.size();) {
    std::size_t j = i;
    while (j < flats.size() && flats[j] == flats[i]) ++j;
    t.cells.emplace_back(flats[i], static_cast<int>(j - i));
    i = j;
  }
  return t;
}

TypeCounts joint_type(const std::vector<int>& a, const std::vector<int>& b,
                      int la, int lb) {
  std::vector<std::vector<int>> seqs = {a, b};
  return joint_type(seqs, {la, lb});
}

TypicalityTest::TypicalityTest(const JointDistribution& dist, double eps)
    : dist_(&dist), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  for (std::size_t flat = 0; flat < dist.table_size(); ++flat)
    if (dist.cell(flat) > eps) heavy_.emplace_back(flat, dist.cell(flat));
}

bool TypicalityTest::operator()(const TypeCounts& type) const {
  if (type.n == 0) throw std::invalid_argument("empty type");
  double inv_n = 1.0 / type.n;
  for (const auto& [flat, c] : type.cells) {
    double p = dist_->cell(flat);
    if (p == 0.0) return false;
    if (std::abs(c * inv_n - p) > eps_) return false;
  }
  // Cells heavier than eps cannot be absent: frequency 0 would already
  // sit outside the band.
  for (const auto& [flat, p] : heavy_) {
    if (std::abs(type.freq(flat) - p) > eps_) return false;
  }
  return true;
}

bool is_strongly_typical(std::span<const std::vector<int>> sequences,
                         const JointDistribution& dist, double eps) {
  return is_strongly_typical(joint_type(sequences, dist.alphabets()), dist,
                             eps);
}

bool is_strongly_typical(const TypeCounts& type, const JointDistribution& dist,
                         double eps) {
  return TypicalityTest(dist, eps)(type);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("pmf size mismatch in divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
  return kl_divergence(std::span<const double>(p.pmf()),
                       std::span<const double>(q.pmf()));
}

double kl_divergence(const TypeCounts& type, const JointDistribution& dist) {
  double d = 0.0;
  double inv_n = 1.0 / type.n;
  for (const auto& [flat, c] : type.cells) {
    double f = c * inv_n;
    double p = dist.cell(flat);
    if (p == 0.0) return kInf;
    d += f * std::log2(f / p);
  }
  return std::max(d, 0.0);
}

double mutual_information(const JointDistribution& dist) {
  if (dist.arity() != 2)
    throw std::invalid_argument("mutual information needs arity 2");
  return kl_divergence(dist, dist.product_of_marginals());
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

}  // namespace typmatch
