#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace typmatch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Probability mass function over a product of finite alphabets, stored
// dense in row-major order (last coordinate fastest). Coordinate i
// takes values in [0, alphabets[i]).
class JointDistribution {
 public:
  JointDistribution() = default;
  // Validates shape, non-negativity and total mass 1 (within 1e-9).
  JointDistribution(std::vector<int> alphabets, std::vector<double> pmf);

  int arity() const { return static_cast<int>(alphabets_.size()); }
  const std::vector<int>& alphabets() const { return alphabets_; }
  std::size_t table_size() const { return pmf_.size(); }
  const std::vector<double>& pmf() const { return pmf_; }
  double cell(std::size_t flat) const { return pmf_[flat]; }
  double at(std::span<const int> symbols) const { return pmf_[index(symbols)]; }

  std::size_t index(std::span<const int> symbols) const;
  std::vector<int> symbols(std::size_t flat) const;

  // Marginal over a subset of coordinates, kept in the order given.
  JointDistribution marginal(const std::vector<int>& coords) const;
  // Product of the single-coordinate marginals.
  JointDistribution product_of_marginals() const;
  // Product over blocks of a set partition of the coordinates: the
  // blocks' marginals multiplied back into a distribution on the full
  // product space.
  JointDistribution partition_marginal_product(
      const std::vector<std::vector<int>>& blocks) const;

  static JointDistribution uniform(std::vector<int> alphabets);

 private:
  std::vector<int> alphabets_;
  std::vector<double> pmf_;
};

// Empirical joint type of k aligned sequences. Counts are kept sparse
// (only occupied cells) so large alphabets stay cheap; n is the common
// sequence length.
struct TypeCounts {
  std::vector<int> alphabets;
  int n = 0;
  // (flat cell index, count), sorted by cell index, counts > 0.
  std::vector<std::pair<std::size_t, int>> cells;

  double freq(std::size_t flat) const;
  int count(std::size_t flat) const;
  // Dense frequency table; only sensible for small alphabets.
  std::vector<double> dense(std::size_t table_size) const;
};

// Joint type of k sequences of equal length (arity = k).
TypeCounts joint_type(std::span<const std::vector<int>> sequences,
                      const std::vector<int>& alphabets);
TypeCounts joint_type(const std::vector<int>& a, const std::vector<int>& b,
                      int la, int lb);

// Reusable strong-typicality test against a fixed distribution and
// epsilon: every cell frequency within eps of its probability, and no
// mass at all on zero-probability cells. Precomputes the list of cells
// with probability above eps so the per-call work is proportional to
// the number of occupied cells, not the table size.
class TypicalityTest {
 public:
  TypicalityTest(const JointDistribution& dist, double eps);

  bool operator()(const TypeCounts& type) const;
  double eps() const { return eps_; }

 private:
  const JointDistribution* dist_;
  double eps_;
  // Cells whose probability exceeds eps; absence from the observed type
  // already violates the band, so they must be checked explicitly.
  std::vector<std::pair<std::size_t, double>> heavy_;
};

// One-shot convenience wrapper over TypicalityTest.
bool is_strongly_typical(std::span<const std::vector<int>> sequences,
                         const JointDistribution& dist, double eps);
bool is_strongly_typical(const TypeCounts& type, const JointDistribution& dist,
                         double eps);

// Kullback-Leibler divergence in bits between two pmf tables of equal
// size. Returns +infinity when p puts mass where q has none.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointDistribution& p, const JointDistribution& q);
// Divergence of an empirical type from a model distribution.
double kl_divergence(const TypeCounts& type, const JointDistribution& dist);

// Mutual information in bits of a bivariate distribution:
// D(P_XY || P_X P_Y).
double mutual_information(const JointDistribution& dist);

// Shannon entropy in bits of a pmf table.
double entropy(std::span<const double> p);

}  // namespace typmatch
