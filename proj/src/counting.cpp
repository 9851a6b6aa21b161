#include "typmatch/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace typmatch {

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt v = 1;
  for (int i = 1; i <= k; ++i) {
    v *= (n - k + i);
    v /= i;
  }
  return v;
}

BigInt multinomial(int n, const std::vector<int>& counts) {
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative multinomial count");
    total += c;
  }
  if (total != n) throw std::invalid_argument("multinomial counts must sum to n");
  BigInt v = factorial(n);
  for (int c : counts) v /= factorial(c);
  return v;
}

BigInt derangement_count(int n) {
  if (n < 0) throw std::invalid_argument("derangements of negative");
  if (n == 0) return 1;
  if (n == 1) return 0;
  BigInt a = 1, b = 0;  // !0, !1
  for (int i = 2; i <= n; ++i) {
    BigInt cur = BigInt(i - 1) * (b + a);
    a = b;
    b = cur;
  }
  return b;
}

BigInt bell_number(int k) {
  if (k < 0) throw std::invalid_argument("Bell number of negative");
  // Bell triangle.
  std::vector<BigInt> row = {1};
  for (int i = 1; i <= k; ++i) {
    std::vector<BigInt> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
    row = std::move(next);
  }
  return row[0];
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw std::invalid_argument("log2 of non-positive");
  unsigned bits = boost::multiprecision::msb(v);
  if (bits < 1000) return std::log2(v.convert_to<double>());
  BigInt shifted = v >> (bits - 52);
  return std::log2(shifted.convert_to<double>()) + (bits - 52);
}

FixedPointCount count_fixed_point_perms(int n, int m) {
  if (n < 0 || m < 0 || m > n)
    throw std::invalid_argument("need 0 <= m <= n");
  FixedPointCount r;
  r.exact = binomial(n, m) * derangement_count(n - m);
  r.upper = factorial(n) / factorial(m);
  r.lower_valid = (m <= n - 2);
  r.lower = r.lower_valid ? factorial(n) / (factorial(m) * (n - m)) : BigInt(0);
  return r;
}

CountBounds k_fold_derangement_bounds(int n, int k) {
  if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0, k >= 1");
  CountBounds b;
  if (k == 1) {
    b.lower = b.upper = 1;
    return b;
  }
  b.upper = boost::multiprecision::pow(derangement_count(n), unsigned(k - 1));
  // No tuple exists once k exceeds n: the k images of one index cannot
  // all differ inside an n-set.
  b.lower = (k <= n)
                ? boost::multiprecision::pow(factorial(n - k + 1), unsigned(k - 1))
                : BigInt(0);
  return b;
}

BigInt k_fold_derangement_exact(int n, int k, unsigned long long guard) {
  if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0, k >= 1");
  if (k == 1) return 1;
  if (n == 0) return 1;
  double space = std::pow(factorial(n).convert_to<double>(), k - 1);
  if (space > static_cast<double>(guard))
    throw std::invalid_argument("search space exceeds guard");

  std::vector<Permutation> chosen;  // pi_2, ..., pi_k progressively
  BigInt count = 0;
  auto clashes = [&](const Permutation& cand) {
    for (int i = 0; i < n; ++i)
      if (cand[i] == i) return true;  // against pi_1 = id
    for (const auto& prev : chosen) {
      bool differs_everywhere = true;
      for (int i = 0; i < n; ++i)
        if (cand[i] == prev[i]) {
          differs_everywhere = false;
          break;
        }
      if (!differs_everywhere) return true;
    }
    return false;
  };
  std::function<void()> rec = [&]() {
    if (static_cast<int>(chosen.size()) == k - 1) {
      ++count;
      return;
    }
    for_each_permutation(n, [&](const Permutation& cand) {
      if (clashes(cand)) return;
      chosen.push_back(cand);
      rec();
      chosen.pop_back();
    });
  };
  rec();
  return count;
}

namespace {
void rgs_rec(int k, int pos, int max_used, std::string& cur,
             std::vector<std::string>& out) {
  if (pos == k) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= max_used + 1; ++v) {
    cur.push_back(static_cast<char>('0' + v));
    rgs_rec(k, pos + 1, std::max(max_used, v), cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<SetPartition> set_partitions(int k) {
  if (k < 1 || k > 9) throw std::invalid_argument("supported for 1 <= k <= 9");
  std::vector<std::string> rgs;
  std::string cur = "0";
  rgs_rec(k, 1, 0, cur, rgs);
  // Lexicographic already; reorder by block count descending, ties by
  // string. stable_sort keeps the lexicographic order within a count.
  std::stable_sort(rgs.begin(), rgs.end(),
                   [](const std::string& a, const std::string& b) {
                     char ma = *std::max_element(a.begin(), a.end());
                     char mb = *std::max_element(b.begin(), b.end());
                     return ma > mb;
                   });
  std::vector<SetPartition> out;
  out.reserve(rgs.size());
  for (const auto& s : rgs) {
    SetPartition p;
    p.rgs = s;
    int blocks = *std::max_element(s.begin(), s.end()) - '0' + 1;
    p.blocks.assign(blocks, {});
    for (int i = 0; i < k; ++i) p.blocks[s[i] - '0'].push_back(i);
    out.push_back(std::move(p));
  }
  return out;
}

BellSignature bell_signature(const std::vector<Permutation>& perms) {
  if (perms.empty()) throw std::invalid_argument("need at least one permutation");
  int k = static_cast<int>(perms.size());
  int n = static_cast<int>(perms[0].size());
  std::vector<Permutation> inv;
  inv.reserve(perms.size());
  for (const auto& p : perms) {
    if (static_cast<int>(p.size()) != n || !is_permutation(p))
      throw std::invalid_argument("permutations must share one ground set");
    inv.push_back(inverse_permutation(p));
  }

  auto parts = set_partitions(k);
  std::map<std::string, std::size_t> by_rgs;
  for (std::size_t j = 0; j < parts.size(); ++j) by_rgs[parts[j].rgs] = j;

  BellSignature sig;
  sig.k = k;
  sig.n = n;
  sig.counts.assign(parts.size(), 0);
  std::string pattern(k, '0');
  std::vector<int> firsts;
  for (int i = 0; i < n; ++i) {
    firsts.clear();
    for (int l = 0; l < k; ++l) {
      int v = inv[l][i];
      std::size_t slot = 0;
      while (slot < firsts.size() && firsts[slot] != v) ++slot;
      if (slot == firsts.size()) firsts.push_back(v);
      pattern[l] = static_cast<char>('0' + slot);
    }
    ++sig.counts[by_rgs.at(pattern)];
  }
  return sig;
}

CountBounds bell_count_bounds(int n, const BellSignature& sig) {
  auto parts = set_partitions(sig.k);
  if (sig.counts.size() != parts.size())
    throw std::invalid_argument("signature length must be Bell(k)");
  long long total = 0;
  std::vector<int> counts;
  for (long long c : sig.counts) {
    if (c < 0) throw std::invalid_argument("negative signature count");
    total += c;
    counts.push_back(static_cast<int>(c));
  }
  if (total != n) throw std::invalid_argument("signature must sum to n");

  BigInt multi = multinomial(n, counts);
  CountBounds b;
  b.lower = multi;
  long long index_slots = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    int kk = static_cast<int>(parts[j].blocks.size());
    int ii = counts[j];
    index_slots += static_cast<long long>(kk) * ii;
    if (ii == 0) continue;
    if (kk == 1) continue;  // factor 1
    if (kk == 2)
      b.lower *= derangement_count(ii);
    else
      b.lower *= k_fold_derangement_bounds(ii, kk).lower;
  }
  b.upper = multi * boost::multiprecision::pow(BigInt(n),
                                               unsigned(index_slots - n));
  return b;
}

}  // namespace typmatch
