#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibrant {

/// A monotone map [m] -> [n] between finite ordinals, stored by its values.
/// vals.size() == m+1, entries weakly increasing, entries <= n (the codomain
/// is tracked separately since the map need not be surjective).
struct Ordinal {
  std::vector<int> vals;
  int codomain = 0;

  Ordinal() = default;
  Ordinal(std::vector<int> v, int cod) : vals(std::move(v)), codomain(cod) {}

  int domain() const { return static_cast<int>(vals.size()) - 1; }
  int operator()(int i) const { return vals[static_cast<size_t>(i)]; }

  bool is_identity() const {
    if (codomain != domain()) return false;
    for (int i = 0; i <= domain(); ++i)
      if (vals[static_cast<size_t>(i)] != i) return false;
    return true;
  }
  bool is_injective() const {
    for (size_t i = 1; i < vals.size(); ++i)
      if (vals[i] == vals[i - 1]) return false;
    return true;
  }
  bool is_surjective() const {
    if (vals.empty()) return codomain < 0;
    if (vals.front() != 0 || vals.back() != codomain) return false;
    for (size_t i = 1; i < vals.size(); ++i)
      if (vals[i] > vals[i - 1] + 1) return false;
    return true;
  }
  bool monotone() const {
    for (size_t i = 1; i < vals.size(); ++i)
      if (vals[i] < vals[i - 1]) return false;
    return vals.empty() || (vals.front() >= 0 && vals.back() <= codomain);
  }

  bool operator==(const Ordinal& o) const {
    return codomain == o.codomain && vals == o.vals;
  }
  bool operator<(const Ordinal& o) const {
    if (codomain != o.codomain) return codomain < o.codomain;
    return vals < o.vals;
  }
};

inline Ordinal ordinal_id(int n) {
  std::vector<int> v(static_cast<size_t>(n) + 1);
  std::iota(v.begin(), v.end(), 0);
  return Ordinal(std::move(v), n);
}

/// Coface delta(n,i): the injection [n-1] -> [n] missing i.
inline Ordinal coface(int n, int i) {
  assert(n >= 1 && i >= 0 && i <= n);
  std::vector<int> v;
  v.reserve(static_cast<size_t>(n));
  for (int j = 0; j <= n; ++j)
    if (j != i) v.push_back(j);
  return Ordinal(std::move(v), n);
}

/// Codegeneracy sigma(n,i): the surjection [n+1] -> [n] hitting i twice.
inline Ordinal codegeneracy(int n, int i) {
  assert(n >= 0 && i >= 0 && i <= n);
  std::vector<int> v;
  v.reserve(static_cast<size_t>(n) + 2);
  for (int j = 0; j <= n + 1; ++j) v.push_back(j <= i ? j : j - 1);
  return Ordinal(std::move(v), n);
}

/// g after f, i.e. the composite [k] -f-> [m] -g-> [n].
inline Ordinal compose(const Ordinal& g, const Ordinal& f) {
  assert(f.codomain == g.domain());
  std::vector<int> v;
  v.reserve(f.vals.size());
  for (int x : f.vals) v.push_back(g.vals[static_cast<size_t>(x)]);
  return Ordinal(std::move(v), g.codomain);
}

struct EpiMono {
  Ordinal epi;   // surjection onto the image
  Ordinal mono;  // injection of the image
};

/// Unique epi-mono factorization of a monotone map.
inline EpiMono factorize(const Ordinal& f) {
  std::vector<int> image = f.vals;
  image.erase(std::unique(image.begin(), image.end()), image.end());
  std::vector<int> epi;
  epi.reserve(f.vals.size());
  for (int x : f.vals) {
    auto it = std::lower_bound(image.begin(), image.end(), x);
    epi.push_back(static_cast<int>(it - image.begin()));
  }
  int p = static_cast<int>(image.size()) - 1;
  return EpiMono{Ordinal(std::move(epi), p), Ordinal(std::move(image), f.codomain)};
}

/// A degeneracy word: strictly decreasing indices i_1 > ... > i_k encoding
/// the operator s_{i_1} ... s_{i_k}. The empty word is the identity.
using DegWord = std::vector<int>;

/// Surjection [m] ->> [m - |w|] with duplicate positions given by the word.
inline Ordinal word_to_surjection(const DegWord& w, int m) {
  std::vector<bool> dup(static_cast<size_t>(std::max(m, 0)) + 1, false);
  for (int i : w) {
    assert(i >= 0 && i < m);
    dup[static_cast<size_t>(i)] = true;
  }
  std::vector<int> v;
  v.reserve(static_cast<size_t>(m) + 1);
  int cur = 0;
  for (int j = 0; j <= m; ++j) {
    v.push_back(cur);
    if (j < m && !dup[static_cast<size_t>(j)]) ++cur;
    // duplicate position keeps cur
  }
  return Ordinal(std::move(v), m - static_cast<int>(w.size()));
}

/// Duplicate positions of a surjection, in strictly decreasing order.
inline DegWord surjection_to_word(const Ordinal& s) {
  assert(s.is_surjective());
  DegWord w;
  for (int i = s.domain() - 1; i >= 0; --i)
    if (s.vals[static_cast<size_t>(i)] == s.vals[static_cast<size_t>(i) + 1]) w.push_back(i);
  return w;
}

/// All monotone maps [m] -> [n] in lexicographic order.
inline std::vector<Ordinal> all_monotone(int m, int n) {
  std::vector<Ordinal> out;
  if (m < 0 || n < 0) return out;
  std::vector<int> cur(static_cast<size_t>(m) + 1, 0);
  while (true) {
    out.emplace_back(cur, n);
    int i = m;
    while (i >= 0 && cur[static_cast<size_t>(i)] == n) --i;
    if (i < 0) break;
    int v = ++cur[static_cast<size_t>(i)];
    for (int j = i + 1; j <= m; ++j) cur[static_cast<size_t>(j)] = v;
  }
  return out;
}

inline std::vector<Ordinal> all_surjections(int m, int k) {
  std::vector<Ordinal> out;
  for (auto& f : all_monotone(m, k))
    if (f.is_surjective()) out.push_back(f);
  return out;
}

inline std::vector<Ordinal> all_injections(int m, int n) {
  std::vector<Ordinal> out;
  for (auto& f : all_monotone(m, n))
    if (f.is_injective()) out.push_back(f);
  return out;
}

/// Does t factor as t = t' . s through the surjection s?  If so return t'.
/// Works for arbitrary monotone t; the condition is that s identifies only
/// points that t also identifies.
inline bool factor_through(const Ordinal& t, const Ordinal& s, Ordinal* out) {
  assert(t.domain() == s.domain());
  for (int i = 0; i < s.domain(); ++i) {
    if (s.vals[static_cast<size_t>(i)] == s.vals[static_cast<size_t>(i) + 1] &&
        t.vals[static_cast<size_t>(i)] != t.vals[static_cast<size_t>(i) + 1])
      return false;
  }
  std::vector<int> v(static_cast<size_t>(s.codomain) + 1, -1);
  for (int i = 0; i <= s.domain(); ++i) v[static_cast<size_t>(s.vals[static_cast<size_t>(i)])] = t.vals[static_cast<size_t>(i)];
  if (out) *out = Ordinal(std::move(v), t.codomain);
  return true;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Number of monotone surjections [m] ->> [k].
inline long long count_surjections(int m, int k) {
  if (k < 0 || m < k) return 0;
  return binomial(m, k);
}

/// Number of monotone maps [m] -> [n].
inline long long count_monotone(int m, int n) {
  if (m < 0 || n < 0) return 0;
  return binomial(n + m + 1, m + 1);
}

}  // namespace fibrant
