#pragma once

// Knitting of Auslander-Reiten components at the level of dimension vectors, for hereditary
// (quiver) presentations, starting from a section.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cox/artranslate.hpp"
#include "cox/cartan.hpp"
#include "cox/coxeter.hpp"
#include "cox/errors.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/presentation.hpp"

namespace cox {

struct KnitNode {
  int id = 0;
  DimensionVector dim;
  std::string label;
  int depth = 0;               // number of τ applications from the seed
  bool boundary = false;       // a predecessor lies outside the seed window
  bool projective = false;     // detected by a non-positive mesh difference
  std::optional<int> tau;      // id of τN once the mesh ending at N is complete
  std::optional<Comodule> module;
};

struct KnitSeed {
  std::vector<DimensionVector> dims;
  std::vector<std::string> labels;
  std::vector<bool> boundary;
  std::vector<std::pair<int, int>> arrows;  // indices into dims; repeated for multiplicity
  std::vector<std::optional<Comodule>> modules;
};

struct KnitFragment {
  std::vector<KnitNode> nodes;
  std::vector<std::pair<int, int>> arrows;
  std::vector<std::pair<int, int>> tau_links;  // (N, τN)
  int meshes = 0;
};

namespace detail {

inline std::string interval_label(const Presentation& p, const DimensionVector& d) {
  if (p.family() != Family::AInfinity && p.family() != Family::ZAInfinity) return {};
  if (d.empty()) return {};
  const auto a = d.begin()->first.id, b = d.rbegin()->first.id;
  if (b - a + 1 != static_cast<std::int64_t>(d.size())) return {};
  for (const auto& [v, x] : d)
    if (x != 1) return {};
  return "I(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace detail

// Injectives E(j), j in the window, with an arrow E(y) -> E(x) for each quiver arrow x -> y.
inline KnitSeed injective_section(const Presentation& p, const IndexWindow& w, bool materialize = false) {
  require_quiver(p);
  if (!p.down_sets_finite()) throw InfiniteDimensional("the injectives of " + p.name() + " are infinite-dimensional");
  KnitSeed s;
  std::map<Vertex, int> index;
  for (auto j : w) {
    p.require(j);
    index[j] = static_cast<int>(s.dims.size());
    s.dims.push_back(*dim_injective(p, j, Side::Left).to_sparse());
    std::string label = detail::interval_label(p, s.dims.back());
    s.labels.push_back(label.empty() ? "E(" + p.label(j) + ")" : label);
    bool edge = false;
    for (auto d : {Direction::In, Direction::Out})
      for (const auto& nb : p.neighbors(j, d))
        if (!w.contains(nb.vertex)) edge = true;
    s.boundary.push_back(edge);
    s.modules.push_back(materialize ? std::optional<Comodule>(injective_comodule(p, j)) : std::nullopt);
  }
  for (auto x : w)
    for (const auto& nb : p.neighbors(x, Direction::Out))
      if (w.contains(nb.vertex))
        for (int k = 0; k < nb.multiplicity; ++k) s.arrows.push_back({index[nb.vertex], index[x]});
  return s;
}

// The modules ₙ𝕀_b for b in the window with b >= n, with arrows ₙ𝕀_{b+1} -> ₙ𝕀_b.
inline KnitSeed interval_slice(const Presentation& p, std::int64_t n, const IndexWindow& w, bool materialize = false) {
  KnitSeed s;
  std::vector<std::int64_t> tops;
  for (auto v : w)
    if (v.id >= n) tops.push_back(v.id);
  if (tops.empty()) throw EmptyWindow("no interval module ₙ𝕀_b with b in the window");
  for (std::size_t k = 0; k < tops.size(); ++k) {
    DimensionVector d;
    for (auto id = n; id <= tops[k]; ++id) d[Vertex{id}] = 1;
    s.dims.push_back(d);
    s.labels.push_back(detail::interval_label(p, d));
    s.boundary.push_back(k + 1 == tops.size() || tops[k + 1] != tops[k] + 1);
    s.modules.push_back(materialize ? std::optional<Comodule>(interval_module(p, n, tops[k])) : std::nullopt);
    if (k > 0 && tops[k] == tops[k - 1] + 1) s.arrows.push_back({static_cast<int>(k), static_cast<int>(k - 1)});
  }
  return s;
}

// Completes `steps` meshes. A node is ready once every successor has its τ determined; among ready
// nodes the one with the smallest (depth, id) goes first. With materialize, each new node also
// carries the comodule-level τ of its source, which must agree with the mesh dimension.
// With stop_when_stuck the fragment knitted so far is returned instead of throwing KnittingStuck.
inline KnitFragment knit_component(const Presentation& p, const KnitSeed& seed, int steps,
                                   bool stop_when_stuck = false) {
  require_quiver(p);
  KnitFragment f;
  for (std::size_t i = 0; i < seed.dims.size(); ++i) {
    KnitNode n;
    n.id = static_cast<int>(i);
    n.dim = seed.dims[i];
    n.label = seed.labels[i];
    n.boundary = seed.boundary[i];
    if (i < seed.modules.size()) n.module = seed.modules[i];
    f.nodes.push_back(std::move(n));
  }
  f.arrows = seed.arrows;
  std::vector<int> tau_power(f.nodes.size(), 0);
  std::vector<std::string> base_label(seed.labels);

  auto succs = [&](int id) {
    std::vector<int> out;
    for (auto [a, b] : f.arrows)
      if (a == id) out.push_back(b);
    return out;
  };
  auto preds = [&](int id) {
    std::vector<int> out;
    for (auto [a, b] : f.arrows)
      if (b == id) out.push_back(a);
    return out;
  };
  auto ready = [&](const KnitNode& n) {
    if (n.tau || n.projective || n.boundary) return false;
    for (int z : succs(n.id))
      if (!f.nodes[z].tau && !f.nodes[z].projective) return false;
    return true;
  };

  while (f.meshes < steps) {
    std::optional<int> pick;
    for (const auto& n : f.nodes)
      if (ready(n) && (!pick || n.depth < f.nodes[*pick].depth)) pick = n.id;
    if (!pick && stop_when_stuck) break;
    if (!pick)
      throw KnittingStuck("no mesh can be completed inside the window after " + std::to_string(f.meshes) +
                          " step(s)");
    const int id = *pick;
    const auto ps = preds(id);
    DimensionVector d;
    for (int q : ps) d = sum(d, f.nodes[q].dim);
    d = sum(d, f.nodes[id].dim, -1);
    bool positive = !d.empty();
    for (const auto& [v, x] : d)
      if (x < 0) positive = false;
    if (!positive) {
      f.nodes[id].projective = true;
      continue;
    }
    KnitNode t;
    t.id = static_cast<int>(f.nodes.size());
    t.dim = d;
    t.depth = f.nodes[id].depth + 1;
    tau_power.push_back(tau_power[id] + 1);
    base_label.push_back(base_label[id]);
    t.label = detail::interval_label(p, d);
    if (t.label.empty()) {
      const int k = tau_power.back();
      t.label = "τ" + (k > 1 ? "^" + std::to_string(k) : std::string()) + base_label.back();
    }
    if (f.nodes[id].module) {
      t.module = tau(*f.nodes[id].module, TauDirection::Tau);
      if (dim_vector(*t.module) != d) throw std::logic_error("knitted dimension disagrees with comodule-level τ");
    }
    f.nodes[id].tau = t.id;
    for (int q : ps) f.arrows.push_back({t.id, q});
    f.tau_links.push_back({id, t.id});
    f.nodes.push_back(std::move(t));
    ++f.meshes;
  }
  return f;
}

// The mesh ending at (EndingAt) or starting from (StartingFrom) a knitted node, as dimension vectors.
struct KnitMesh {
  DimensionVector left;
  std::vector<DimensionVector> middle;
  DimensionVector right;
};

inline KnitMesh knitted_mesh(const KnitFragment& f, const DimensionVector& n, MeshDirection d) {
  for (const auto& [src, dst] : f.tau_links) {
    const int end = d == MeshDirection::EndingAt ? src : dst;
    if (f.nodes[end].dim != n) continue;
    KnitMesh m{f.nodes[dst].dim, {}, f.nodes[src].dim};
    for (auto [a, b] : f.arrows)
      if (b == src) m.middle.push_back(f.nodes[a].dim);
    return m;
  }
  throw NotInKnittedRegion("no completed mesh of the fragment has this end term");
}

// Every τ-link satisfies dim τN = Φ(dim N).
inline std::optional<std::string> check_knitting_coxeter(const Presentation& p, const KnitFragment& f) {
  const CoxeterOperator op(p);
  for (auto [src, dst] : f.tau_links) {
    const LazyVector phi = apply_coxeter(op, f.nodes[src].dim, CoxeterDirection::Forward);
    std::vector<Vertex> anchors;
    for (const auto& [v, x] : f.nodes[src].dim) anchors.push_back(v);
    for (const auto& [v, x] : f.nodes[dst].dim) anchors.push_back(v);
    const DimensionVector rhs = phi.to_sparse() ? *phi.to_sparse() : detail::certify_support(p, phi, anchors, op.margin());
    if (rhs != f.nodes[dst].dim)
      return "τ-link " + std::to_string(src) + " -> " + std::to_string(dst) + ": Φ gives " + format_sparse(rhs, p) +
             ", knitting gives " + format_sparse(f.nodes[dst].dim, p);
  }
  return std::nullopt;
}

inline std::string to_text(const KnitFragment& f, const Presentation& p) {
  std::ostringstream os;
  for (const auto& n : f.nodes) os << "node " << n.id << " dim=" << format_sparse(n.dim, p) << '\n';
  for (auto [a, b] : f.arrows) os << "arrow " << a << ' ' << b << '\n';
  for (auto [a, b] : f.tau_links) os << "tau " << a << ' ' << b << '\n';
  return os.str();
}

inline std::string to_dot(const KnitFragment& f, const Presentation& p) {
  std::ostringstream os;
  os << "digraph ar {\n  rankdir=RL;\n  node [shape=box];\n";
  for (const auto& n : f.nodes) {
    nlohmann::json label = n.label + "\n" + format_sparse(n.dim, p);
    os << "  n" << n.id << " [label=" << label.dump() << "];\n";
  }
  for (auto [a, b] : f.arrows) os << "  n" << a << " -> n" << b << ";\n";
  for (auto [a, b] : f.tau_links) os << "  n" << a << " -> n" << b << " [style=dashed, constraint=false];\n";
  os << "}\n";
  return os.str();
}

inline std::string to_json_lines(const KnitFragment& f, const Presentation& p) {
  std::ostringstream os;
  for (const auto& n : f.nodes) {
    nlohmann::ordered_json j;
    j["type"] = "node";
    j["id"] = n.id;
    j["label"] = n.label;
    j["dim"] = format_sparse(n.dim, p);
    os << j.dump() << '\n';
  }
  for (auto [a, b] : f.arrows) os << nlohmann::ordered_json{{"type", "arrow"}, {"from", a}, {"to", b}}.dump() << '\n';
  for (auto [a, b] : f.tau_links) os << nlohmann::ordered_json{{"type", "tau"}, {"from", a}, {"to", b}}.dump() << '\n';
  return os.str();
}

}  // namespace cox
