#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cox/errors.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/presentation.hpp"
#include "cox/resolutions.hpp"

namespace cox {

namespace detail {

inline BigInt count_paths(const Presentation& p, Vertex from, Vertex to, std::size_t& visited, std::size_t budget) {
  if (from == to) return 1;
  if (!p.leq(from, to)) return 0;
  auto& cache = p.cache();
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (auto it = cache.path_counts.find({from.id, to.id}); it != cache.path_counts.end()) return it->second;
  }
  if (++visited > budget)
    throw IntervalFinitenessViolated("path enumeration exceeded the node budget (COX_NODE_BUDGET)");
  BigInt total = 0;
  for (const auto& nb : p.neighbors(to, Direction::In))
    if (p.leq(from, nb.vertex)) total += nb.multiplicity * count_paths(p, from, nb.vertex, visited, budget);
  std::lock_guard<std::mutex> lock(cache.mutex);
  cache.path_counts.emplace(std::make_pair(from.id, to.id), total);
  return total;
}

inline Certificate certificate_for(const Presentation& p) {
  return (p.family() == Family::Finite || p.family() == Family::GarlandSeq) ? Certificate::Enumerated
                                                                              : Certificate::ClosedForm;
}

inline std::vector<Vertex> with_neighbors(const Presentation& p, Vertex v, Direction d) {
  std::vector<Vertex> out{v};
  for (const auto& nb : p.neighbors(v, d)) out.push_back(nb.vertex);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Number of directed paths from -> to, the trivial path included.
inline BigInt path_count(const Presentation& p, Vertex from, Vertex to) {
  p.require(from);
  p.require(to);
  std::size_t visited = 0;
  return detail::count_paths(p, from, to, visited, node_budget());
}

// 𝔠(i, j) = number of paths j -> i (quivers) or [j <= i] (posets). Row i is dim E(i).
inline LazyIntMatrix cartan_matrix(const Presentation& p) {
  LazyIntMatrix::EntryRule entry;
  if (p.kind() == Kind::Quiver)
    entry = [p](Vertex i, Vertex j) { return path_count(p, j, i); };
  else
    entry = [p](Vertex i, Vertex j) {
      p.require(i);
      p.require(j);
      return BigInt(p.leq(j, i) ? 1 : 0);
    };
  const Certificate cert = detail::certificate_for(p);
  LazyIntMatrix::Axis rows, cols;
  if (p.down_sets_finite()) rows = {[p](Vertex i) { return p.closure(i, Direction::In); }, cert};
  if (p.up_sets_finite()) cols = {[p](Vertex j) { return p.closure(j, Direction::Out); }, cert};
  return LazyIntMatrix(entry, rows, cols);
}

// The canonical inverse: δ - #arrows(p -> j) for path coalgebras, alternating Bass numbers for posets.
inline LazyIntMatrix cartan_inverse(const Presentation& p) {
  const Certificate cert = detail::certificate_for(p);
  if (p.kind() == Kind::Quiver) {
    auto entry = [p](Vertex j, Vertex a) {
      p.require(j);
      p.require(a);
      return BigInt((j == a ? 1 : 0) - arrow_multiplicity(p, a, j));
    };
    LazyIntMatrix::Axis rows{[p](Vertex j) { return detail::with_neighbors(p, j, Direction::In); }, cert};
    LazyIntMatrix::Axis cols{[p](Vertex a) { return detail::with_neighbors(p, a, Direction::Out); }, cert};
    return LazyIntMatrix(entry, rows, cols);
  }
  auto entry = [p](Vertex j, Vertex a) {
    p.require(a);
    if (!p.leq(a, j)) return BigInt(0);
    const auto res = minimal_injective_resolution(p, j, Side::Left, kDefaultCap);
    BigInt s = 0;
    for (int m = 0; m < static_cast<int>(res.terms.size()); ++m) s += (m % 2 == 0 ? 1 : -1) * res.multiplicity(m, a);
    return s;
  };
  LazyIntMatrix::Axis rows{[p](Vertex j) { return *p.ext_candidates_below(j); }, cert};
  LazyIntMatrix::Axis cols{[p](Vertex a) { return *p.ext_candidates_above(a); }, cert};
  return LazyIntMatrix(entry, rows, cols, /*memoize=*/true);
}

struct CartanPair {
  Presentation presentation;
  LazyIntMatrix cartan;
  LazyIntMatrix inverse;

  explicit CartanPair(Presentation p)
      : presentation(p), cartan(cartan_matrix(p)), inverse(cartan_inverse(p)) {}
};

enum class Tri { Yes, No, Unknown };

inline std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

struct FinitenessReport {
  Tri row_finite = Tri::Unknown;
  Tri col_finite = Tri::Unknown;
  std::string semiperfect_interpretation;
};

inline FinitenessReport classify_finiteness(const Presentation& p, const IndexWindow& sample) {
  FinitenessReport r;
  // Every presentation here certifies finiteness of up/down sets in both directions.
  auto probe = [&](bool certified, Direction d) {
    if (!certified) return Tri::No;
    for (auto v : sample) p.closure(v, d);
    return Tri::Yes;
  };
  r.row_finite = probe(p.down_sets_finite(), Direction::In);
  r.col_finite = probe(p.up_sets_finite(), Direction::Out);
  auto side = [](Tri t, const char* name) {
    if (t == Tri::Yes) return std::string(name) + " semiperfect";
    if (t == Tri::No) return std::string("not ") + name + " semiperfect";
    return std::string(name) + " semiperfectness unknown";
  };
  r.semiperfect_interpretation = side(r.row_finite, "right") + ", " + side(r.col_finite, "left");
  return r;
}

// Left: row a of 𝔠 (dim E(a)); Right: column a of 𝔠 (dim Ê(a)).
inline LazyVector dim_injective(const Presentation& p, Vertex a, Side side) {
  p.require(a);
  const LazyIntMatrix c = cartan_matrix(p);
  if (side == Side::Left) return LazyVector([c, a](Vertex j) { return c.entry(a, j); }, c.row_support(a));
  return LazyVector([c, a](Vertex i) { return c.entry(i, a); }, c.col_support(a));
}

}  // namespace cox
