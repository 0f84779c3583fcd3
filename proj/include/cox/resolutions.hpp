#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cox/errors.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/linalg.hpp"
#include "cox/presentation.hpp"
#include "cox/representation.hpp"

namespace cox {

inline constexpr int kDefaultCap = 16;

struct ResolutionSummary {
  Vertex simple;
  Side side = Side::Left;
  std::vector<std::map<Vertex, int>> terms;  // terms[m][p] = d_{mp}
  bool finite = false;

  int multiplicity(int m, Vertex v) const {
    if (m < 0 || m >= static_cast<int>(terms.size())) return 0;
    auto it = terms[m].find(v);
    return it == terms[m].end() ? 0 : it->second;
  }
  int length() const { return static_cast<int>(terms.size()) - 1; }
};

inline int arrow_multiplicity(const Presentation& p, Vertex from, Vertex to) {
  for (const auto& nb : p.neighbors(from, Direction::Out))
    if (nb.vertex == to) return nb.multiplicity;
  return 0;
}

// Ext^m(S(src), S(tgt)) for every m, by an explicit minimal injective resolution of S(tgt)
// over the finite convex hull {z : src <= z <= tgt}. Index m of the result; missing degrees are 0.
inline std::vector<int> ext_dims_by_resolution(const Presentation& p, Vertex src, Vertex tgt) {
  p.require(src);
  p.require(tgt);
  auto& cache = p.cache();
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (auto it = cache.ext_tables.find({src.id, tgt.id}); it != cache.ext_tables.end()) return it->second;
  }
  std::vector<int> dims;
  const auto hull = p.interval(src, tgt);
  if (!hull.empty()) {
    const FiniteQuiver q = FiniteQuiver::from_presentation(p, hull);
    const auto res = resolve(q, simple_rep(q, q.local(tgt)), static_cast<int>(hull.size()) + 1);
    if (!res.finite) throw std::logic_error("resolution over a finite interval did not terminate");
    const auto bass = bass_numbers(q, res);
    for (const auto& term : bass) dims.push_back(term[q.local(src)]);
    while (!dims.empty() && dims.back() == 0) dims.pop_back();
  }
  std::lock_guard<std::mutex> lock(cache.mutex);
  cache.ext_tables.emplace(std::make_pair(src.id, tgt.id), dims);
  return dims;
}

inline int ext_dim(const Presentation& p, Vertex src, Vertex tgt, int m) {
  p.require(src);
  p.require(tgt);
  if (m < 0) throw Error("ext degree must be nonnegative");
  if (p.kind() == Kind::Quiver) {
    if (m == 0) return src == tgt ? 1 : 0;
    if (m == 1) return arrow_multiplicity(p, src, tgt);
    return 0;
  }
  const auto dims = ext_dims_by_resolution(p, src, tgt);
  return m < static_cast<int>(dims.size()) ? dims[m] : 0;
}

// Minimal injective resolution of S(j) (Left) or of the right simple Ŝ(j) (Right, via the opposite).
inline ResolutionSummary minimal_injective_resolution(const Presentation& p, Vertex j, Side side, int max_degree) {
  p.require(j);
  if (max_degree < 0) throw Error("max_degree must be nonnegative");
  if (side == Side::Right) {
    auto r = minimal_injective_resolution(p.opposite(), j, Side::Left, max_degree);
    r.side = Side::Right;
    return r;
  }
  ResolutionSummary out{j, Side::Left, {}, true};
  out.terms.push_back({{j, 1}});
  if (p.kind() == Kind::Quiver) {
    std::map<Vertex, int> first;
    for (const auto& nb : p.neighbors(j, Direction::In)) first[nb.vertex] += nb.multiplicity;
    if (!first.empty()) {
      if (max_degree < 1) throw CapExceeded("resolution of S(" + p.label(j) + ") has a nonzero term beyond degree 0");
      out.terms.push_back(std::move(first));
    }
    return out;
  }

  auto& cache = p.cache();
  std::optional<std::vector<std::map<Vertex, int>>> cached;
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (auto it = cache.bass_tables.find(j.id); it != cache.bass_tables.end()) cached = it->second;
  }
  if (!cached) {
    const auto candidates = p.ext_candidates_below(j);
    if (!candidates)
      throw SharpEulerViolated("no finite socle-support certificate for the resolution of S(" + p.label(j) + ")");
    const FiniteQuiver q = FiniteQuiver::from_presentation(p, *candidates);
    const auto res = resolve(q, simple_rep(q, q.local(j)), std::max(max_degree, kDefaultCap));
    if (!res.finite)
      throw CapExceeded("resolution of S(" + p.label(j) + ") does not stop by degree " +
                        std::to_string(std::max(max_degree, kDefaultCap)));
    std::vector<std::map<Vertex, int>> terms;
    for (const auto& mult : bass_numbers(q, res)) {
      std::map<Vertex, int> t;
      for (int v = 0; v < q.size(); ++v)
        if (mult[v]) t[q.vertex(v)] = mult[v];
      terms.push_back(std::move(t));
    }
    std::lock_guard<std::mutex> lock(cache.mutex);
    cached = cache.bass_tables.emplace(j.id, std::move(terms)).first->second;
  }
  if (static_cast<int>(cached->size()) > max_degree + 1)
    throw CapExceeded("resolution of S(" + p.label(j) + ") has a nonzero term beyond degree " +
                      std::to_string(max_degree));
  out.terms = *cached;
  return out;
}

inline BigInt mobius(const Presentation& p, Vertex lo, Vertex hi) {
  if (p.kind() != Kind::Poset) throw Error("mobius expects a poset presentation");
  auto elems = p.interval(lo, hi);
  if (elems.empty()) return 0;
  std::stable_sort(elems.begin(), elems.end(), [&](Vertex a, Vertex b) { return p.rank(a) < p.rank(b); });
  std::map<Vertex, BigInt> mu;
  for (auto z : elems) {
    if (z == lo) {
      mu[z] = 1;
      continue;
    }
    BigInt s = 0;
    for (const auto& [y, v] : mu)
      if (p.leq(y, z)) s += v;
    mu[z] = -s;
  }
  return mu[hi];
}

// dim Ext^m(S(lo), S(hi)) from the order complex of the open interval (lo, hi):
// δ at m = 0, the cover relation at m = 1, reduced cohomology in degree m-2 above that.
inline int order_complex_ext(const Presentation& p, Vertex lo, Vertex hi, int m) {
  if (p.kind() != Kind::Poset) throw Error("order_complex_ext expects a poset presentation");
  if (m == 0) return lo == hi ? 1 : 0;
  if (lo == hi || !p.leq(lo, hi)) return 0;
  if (m == 1) return arrow_multiplicity(p, lo, hi);
  std::vector<Vertex> open;
  for (auto z : p.interval(lo, hi))
    if (z != lo && z != hi) open.push_back(z);
  // chains[d + 1] = d-simplices, as index lists in increasing order
  std::vector<std::vector<std::vector<int>>> chains(1, {{}});
  const int n = static_cast<int>(open.size());
  while (true) {
    std::vector<std::vector<int>> next;
    for (const auto& c : chains.back())
      for (int v = 0; v < n; ++v)
        if (c.empty() || (c.back() != v && p.leq(open[c.back()], open[v]) && open[c.back()] != open[v])) {
          auto e = c;
          e.push_back(v);
          next.push_back(std::move(e));
        }
    if (next.empty()) break;
    chains.push_back(std::move(next));
  }
  auto coboundary_rank = [&](std::size_t k) -> std::size_t {  // C^{k-1} -> C^{k}, indices into chains
    if (k == 0 || k >= chains.size()) return 0;
    std::map<std::vector<int>, std::size_t> lower;
    for (std::size_t i = 0; i < chains[k - 1].size(); ++i) lower.emplace(chains[k - 1][i], i);
    QMatrix d(chains[k].size(), chains[k - 1].size());
    for (std::size_t r = 0; r < chains[k].size(); ++r)
      for (std::size_t drop = 0; drop < chains[k][r].size(); ++drop) {
        auto face = chains[k][r];
        face.erase(face.begin() + static_cast<long>(drop));
        d(r, lower.at(face)) += (drop % 2 == 0) ? 1 : -1;
      }
    return rank(d);
  };
  const std::size_t k = static_cast<std::size_t>(m - 1);  // simplices of dimension m-2 live in chains[m-1]
  if (k >= chains.size()) return 0;
  return static_cast<int>(chains[k].size() - coboundary_rank(k + 1) - coboundary_rank(k));
}

// Length of the minimal injective resolution of S(j), or nullopt when it exceeds cap.
inline std::optional<int> inj_dim_simple(const Presentation& p, Vertex j, int cap) {
  try {
    return minimal_injective_resolution(p, j, Side::Left, cap).length();
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
}

struct SharpEulerReport {
  bool computable = true;
  bool left_sharp = true;
  bool right_sharp = true;
  bool symmetric = true;
  std::vector<std::string> failures;
  bool all() const { return computable && left_sharp && right_sharp && symmetric; }
};

inline SharpEulerReport check_sharp_euler(const Presentation& p, const IndexWindow& sample, int cap) {
  SharpEulerReport r;
  std::map<Vertex, ResolutionSummary> left, right;
  for (auto j : sample) {
    try {
      left.emplace(j, minimal_injective_resolution(p, j, Side::Left, cap));
    } catch (const Error& e) {
      r.left_sharp = false;
      r.failures.push_back(std::string("left: ") + e.what());
    }
    try {
      right.emplace(j, minimal_injective_resolution(p, j, Side::Right, cap));
    } catch (const Error& e) {
      r.right_sharp = false;
      r.failures.push_back(std::string("right: ") + e.what());
    }
  }
  const Presentation op = p.opposite();
  for (auto i : sample)
    for (auto j : sample) {
      if (!left.count(j) || !right.count(i)) {
        r.symmetric = false;
        continue;
      }
      const auto explicit_left = ext_dims_by_resolution(p, i, j);
      const auto explicit_right = ext_dims_by_resolution(op, j, i);
      for (int m = 0; m <= cap; ++m) {
        const int d = left.at(j).multiplicity(m, i);
        const int dhat = right.at(i).multiplicity(m, j);
        const int e1 = m < static_cast<int>(explicit_left.size()) ? explicit_left[m] : 0;
        const int e2 = m < static_cast<int>(explicit_right.size()) ? explicit_right[m] : 0;
        if (d != dhat || d != ext_dim(p, i, j, m) || ext_dim(p, i, j, m) != ext_dim(op, j, i, m) || d != e1 ||
            d != e2) {
          r.symmetric = false;
          r.failures.push_back("symmetry fails at (" + p.label(i) + ", " + p.label(j) + ", m=" + std::to_string(m) +
                               ")");
        }
      }
    }
  return r;
}

}  // namespace cox
