#include "typmatch/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "typmatch/graph.hpp"

namespace typmatch {

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v])
      return false;
    seen[v] = true;
  }
  return true;
}

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation inverse_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    inv[p[i]] = static_cast<int>(i);
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

bool CycleSignature::valid() const {
  if (n < 0 || m < 0 || c != static_cast<int>(lengths.size())) return false;
  int total = m;
  for (int len : lengths) {
    if (len < 2) return false;
    total += len;
  }
  return total == n;
}

CycleSignature CycleSignature::canonical() const {
  CycleSignature s = *this;
  std::sort(s.lengths.begin(), s.lengths.end());
  return s;
}

bool CycleSignature::operator==(const CycleSignature& o) const {
  CycleSignature a = canonical(), b = o.canonical();
  return a.n == b.n && a.m == b.m && a.lengths == b.lengths;
}

CycleDecomposition cycle_decompose(const Permutation& p) {
  if (!is_permutation(p)) throw std::invalid_argument("not a permutation");
  int n = static_cast<int>(p.size());
  CycleDecomposition d;
  d.signature.n = n;
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int j = i;
    do {
      seen[j] = true;
      cyc.push_back(j);
      j = p[j];
    } while (j != i);
    if (cyc.size() == 1) {
      d.fixed_points.push_back(i);
    } else {
      d.cycles.push_back(std::move(cyc));
    }
  }
  d.signature.m = static_cast<int>(d.fixed_points.size());
  d.signature.c = static_cast<int>(d.cycles.size());
  for (const auto& cyc : d.cycles)
    d.signature.lengths.push_back(static_cast<int>(cyc.size()));
  std::sort(d.signature.lengths.begin(), d.signature.lengths.end());
  std::sort(d.cycles.begin(), d.cycles.end(),
            [](const auto& a, const auto& b) {
              return a.size() != b.size() ? a.size() < b.size() : a[0] < b[0];
            });
  return d;
}

Permutation standard_permutation(const CycleSignature& sig) {
  if (!sig.valid()) throw std::invalid_argument("invalid cycle signature");
  Permutation p = identity_permutation(sig.n);
  int a = 0;
  for (int len : sig.lengths) {
    int b = a + len - 1;
    p[a] = b;
    for (int j = a + 1; j <= b; ++j) p[j] = j - 1;
    a = b + 1;
  }
  return p;
}

namespace {
void signatures_rec(int remaining, int min_len, CycleSignature& cur,
                    std::vector<CycleSignature>& out) {
  if (remaining == 0) {
    CycleSignature s = cur;
    s.c = static_cast<int>(s.lengths.size());
    out.push_back(std::move(s));
    return;
  }
  for (int len = min_len; len <= remaining; ++len) {
    if (remaining - len == 1) continue;  // a leftover singleton is a
                                         // fixed point, counted in m
    cur.lengths.push_back(len);
    signatures_rec(remaining - len, len, cur, out);
    cur.lengths.pop_back();
  }
}
}  // namespace

std::vector<CycleSignature> all_cycle_signatures(int n) {
  std::vector<CycleSignature> out;
  for (int m = n; m >= 0; --m) {
    if (n - m == 1) continue;
    CycleSignature cur;
    cur.n = n;
    cur.m = m;
    signatures_rec(n - m, 2, cur, out);
  }
  return out;
}

Permutation induced_edge_permutation(const Permutation& pi, int n) {
  if (static_cast<int>(pi.size()) != n || !is_permutation(pi))
    throw std::invalid_argument("vertex permutation of wrong size");
  Permutation out(ut_length(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int a = pi[i], b = pi[j];
      if (a > b) std::swap(a, b);
      out[ut_index(i, j, n)] = static_cast<int>(ut_index(a, b, n));
    }
  }
  return out;
}

void for_each_permutation(int n,
                          const std::function<void(const Permutation&)>& fn) {
  Permutation p = identity_permutation(n);
  do {
    fn(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace typmatch
