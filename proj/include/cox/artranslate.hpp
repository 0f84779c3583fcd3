#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cox/cartan.hpp"
#include "cox/coxeter.hpp"
#include "cox/errors.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/presentation.hpp"
#include "cox/representation.hpp"

namespace cox {

inline constexpr int kDefaultMargin = 2;

// A finite-dimensional comodule, i.e. a representation of a finite convex window of the quiver.
// Arrows leaving the window act by zero.
struct Comodule {
  Presentation presentation;
  std::shared_ptr<const FiniteQuiver> quiver;
  Rep rep;

  int dim_at(Vertex v) const {
    const int i = quiver->local(v);
    return i < 0 ? 0 : rep.dim[i];
  }
  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    for (int i = 0; i < quiver->size(); ++i)
      if (rep.dim[i] > 0) s.push_back(quiver->vertex(i));
    return s;
  }
  bool is_zero() const { return rep.is_zero(); }
};

// ---- windows ----

// Union of the intervals between comparable members of `seeds`: the smallest convex set containing them.
inline std::vector<Vertex> convex_hull(const Presentation& p, const std::vector<Vertex>& seeds) {
  std::set<Vertex> out(seeds.begin(), seeds.end());
  for (auto a : seeds)
    for (auto b : seeds)
      if (a != b && p.leq(a, b))
        for (auto z : p.interval(a, b)) out.insert(z);
  return {out.begin(), out.end()};
}

// Seeds plus everything within `margin` undirected arrow steps, made convex.
inline std::vector<Vertex> expand_window(const Presentation& p, const std::vector<Vertex>& seeds, int margin) {
  std::set<Vertex> seen(seeds.begin(), seeds.end());
  std::vector<Vertex> frontier(seeds.begin(), seeds.end());
  for (int step = 0; step < margin; ++step) {
    std::vector<Vertex> next;
    for (auto v : frontier)
      for (auto d : {Direction::In, Direction::Out})
        for (const auto& nb : p.neighbors(v, d))
          if (seen.insert(nb.vertex).second) next.push_back(nb.vertex);
    frontier = std::move(next);
  }
  return convex_hull(p, {seen.begin(), seen.end()});
}

// Window vertices having a neighbour outside the window.
inline std::vector<Vertex> window_boundary(const Presentation& p, const FiniteQuiver& q) {
  std::vector<Vertex> out;
  for (auto v : q.vertices()) {
    bool edge = false;
    for (auto d : {Direction::In, Direction::Out})
      for (const auto& nb : p.neighbors(v, d))
        if (q.local(nb.vertex) < 0) edge = true;
    if (edge) out.push_back(v);
  }
  return out;
}

// The same comodule on a larger convex window.
inline Comodule embed(const Comodule& m, std::vector<Vertex> window) {
  const Presentation& p = m.presentation;
  for (auto v : m.support()) window.push_back(v);
  auto q = std::make_shared<const FiniteQuiver>(FiniteQuiver::from_presentation(p, convex_hull(p, window)));
  Rep r;
  r.dim.assign(q->size(), 0);
  for (int i = 0; i < q->size(); ++i) r.dim[i] = m.dim_at(q->vertex(i));
  // parallel arrows are matched by their rank among arrows with the same endpoints
  std::map<std::pair<Vertex, Vertex>, std::vector<int>> old_arrows;
  for (int a = 0; a < static_cast<int>(m.quiver->arrows().size()); ++a) {
    auto [s, t] = m.quiver->arrows()[a];
    old_arrows[{m.quiver->vertex(s), m.quiver->vertex(t)}].push_back(a);
  }
  std::map<std::pair<Vertex, Vertex>, int> seen;
  for (auto [s, t] : q->arrows()) {
    const std::pair<Vertex, Vertex> key{q->vertex(s), q->vertex(t)};
    const int k = seen[key]++;
    auto it = old_arrows.find(key);
    if (it != old_arrows.end() && k < static_cast<int>(it->second.size()))
      r.maps.push_back(m.rep.maps[it->second[k]]);
    else
      r.maps.emplace_back(r.dim[t], r.dim[s]);
  }
  return Comodule{p, q, std::move(r)};
}

inline void require_quiver(const Presentation& p) {
  if (p.kind() != Kind::Quiver)
    throw HypothesisViolated("comodule-level computations need a path-coalgebra (quiver) presentation");
}

// ---- constructors ----

inline Comodule make_comodule(const Presentation& p, const std::vector<Vertex>& window, Rep rep) {
  require_quiver(p);
  auto q = std::make_shared<const FiniteQuiver>(FiniteQuiver::from_presentation(p, convex_hull(p, window)));
  if (static_cast<int>(rep.dim.size()) != q->size() || rep.maps.size() != q->arrows().size())
    throw Error("representation does not match the window quiver");
  for (std::size_t a = 0; a < q->arrows().size(); ++a) {
    auto [s, t] = q->arrows()[a];
    if (rep.maps[a].rows() != static_cast<std::size_t>(rep.dim[t]) ||
        rep.maps[a].cols() != static_cast<std::size_t>(rep.dim[s]))
      throw Error("arrow map has the wrong shape");
  }
  return Comodule{p, std::move(q), std::move(rep)};
}

// Dimension d_v at each listed vertex and the given matrix on each (simple) arrow; other arrows act by zero.
inline Comodule comodule_from_maps(const Presentation& p, const std::map<Vertex, int>& dims,
                                   const std::map<std::pair<Vertex, Vertex>, QMatrix>& maps) {
  require_quiver(p);
  std::vector<Vertex> verts;
  for (const auto& [v, d] : dims) {
    p.require(v);
    if (d > 0) verts.push_back(v);
  }
  if (verts.empty()) verts.push_back(dims.empty() ? Vertex{0} : dims.begin()->first);
  auto q = std::make_shared<const FiniteQuiver>(FiniteQuiver::from_presentation(p, convex_hull(p, verts)));
  Rep r;
  r.dim.assign(q->size(), 0);
  for (int i = 0; i < q->size(); ++i)
    if (auto it = dims.find(q->vertex(i)); it != dims.end()) r.dim[i] = it->second;
  for (auto [s, t] : q->arrows()) {
    auto it = maps.find({q->vertex(s), q->vertex(t)});
    if (it != maps.end()) {
      if (it->second.rows() != static_cast<std::size_t>(r.dim[t]) ||
          it->second.cols() != static_cast<std::size_t>(r.dim[s]))
        throw Error("arrow map has the wrong shape");
      r.maps.push_back(it->second);
    } else {
      r.maps.emplace_back(r.dim[t], r.dim[s]);
    }
  }
  return Comodule{p, std::move(q), std::move(r)};
}

// One-dimensional at each vertex of `support` with identity maps along arrows inside it.
inline Comodule thin_module(const Presentation& p, const std::vector<Vertex>& support) {
  require_quiver(p);
  if (support.empty()) throw Error("thin module needs a nonempty support");
  for (auto v : support) p.require(v);
  auto q = std::make_shared<const FiniteQuiver>(FiniteQuiver::from_presentation(p, convex_hull(p, support)));
  std::vector<int> local;
  for (auto v : support) local.push_back(q->local(v));
  return Comodule{p, q, thin_rep(*q, local)};
}

// ₙ𝕀ₘ: the thin module on n..m of a linear family.
inline Comodule interval_module(const Presentation& p, std::int64_t n, std::int64_t m) {
  if (p.family() != Family::AInfinity && p.family() != Family::ZAInfinity)
    throw Error("interval modules are defined for a-infinity and z-a-infinity");
  if (n > m) throw Error("interval module needs n <= m");
  std::vector<Vertex> s;
  for (auto id = n; id <= m; ++id) s.push_back(Vertex{id});
  return thin_module(p, s);
}

inline Comodule simple_comodule(const Presentation& p, Vertex j) { return thin_module(p, {j}); }

// E(j); finite-dimensional only when the down-set of j is finite.
inline Comodule injective_comodule(const Presentation& p, Vertex j) {
  require_quiver(p);
  if (!p.down_sets_finite()) throw InfiniteDimensional("E(" + p.label(j) + ") is infinite-dimensional");
  auto q = std::make_shared<const FiniteQuiver>(FiniteQuiver::from_presentation(p, p.closure(j, Direction::In)));
  return Comodule{p, q, injective_rep(*q, {q->local(j)})};
}

inline Comodule direct_sum(const Comodule& a, const Comodule& b) {
  std::vector<Vertex> w = a.support();
  for (auto v : b.support()) w.push_back(v);
  if (w.empty()) return a;
  const Comodule ea = embed(a, w), eb = embed(b, w);
  Rep r;
  for (int i = 0; i < ea.quiver->size(); ++i) r.dim.push_back(ea.rep.dim[i] + eb.rep.dim[i]);
  for (std::size_t k = 0; k < ea.quiver->arrows().size(); ++k) {
    auto [s, t] = ea.quiver->arrows()[k];
    QMatrix m(r.dim[t], r.dim[s]);
    for (std::size_t i = 0; i < ea.rep.maps[k].rows(); ++i)
      for (std::size_t j = 0; j < ea.rep.maps[k].cols(); ++j) m(i, j) = ea.rep.maps[k](i, j);
    for (std::size_t i = 0; i < eb.rep.maps[k].rows(); ++i)
      for (std::size_t j = 0; j < eb.rep.maps[k].cols(); ++j)
        m(ea.rep.dim[t] + i, ea.rep.dim[s] + j) = eb.rep.maps[k](i, j);
    r.maps.push_back(std::move(m));
  }
  return Comodule{a.presentation, ea.quiver, std::move(r)};
}

// ---- basic invariants ----

inline DimensionVector dim_vector(const Comodule& m) {
  DimensionVector d;
  for (int i = 0; i < m.quiver->size(); ++i) add_to(d, m.quiver->vertex(i), m.rep.dim[i]);
  return d;
}

inline bool isomorphic(const Comodule& a, const Comodule& b) {
  if (dim_vector(a) != dim_vector(b)) return false;
  if (a.is_zero()) return true;
  std::vector<Vertex> w = a.support();
  for (auto v : b.support()) w.push_back(v);
  const Comodule ea = embed(a, w), eb = embed(b, w);
  return is_isomorphic(*ea.quiver, ea.rep, eb.rep);
}

struct SocleResult {
  DimensionVector dim;
  Comodule submodule;  // semisimple
  RepMap inclusion;    // submodule -> M, per window vertex
};

inline SocleResult socle(const Comodule& m) {
  const auto basis = socle_basis(*m.quiver, m.rep);
  Rep s;
  for (const auto& b : basis) s.dim.push_back(static_cast<int>(b.cols()));
  for (auto [a, t] : m.quiver->arrows()) s.maps.emplace_back(s.dim[t], s.dim[a]);
  SocleResult out{{}, Comodule{m.presentation, m.quiver, s}, basis};
  out.dim = dim_vector(out.submodule);
  return out;
}

struct FormalInjective {
  std::map<Vertex, int> summands;  // E(j)^{d_j}

  bool empty() const { return summands.empty(); }
  friend bool operator==(const FormalInjective&, const FormalInjective&) = default;
};

inline FormalInjective formal_injective(const FiniteQuiver& q, const std::vector<int>& local_summands) {
  FormalInjective f;
  for (int x : local_summands) ++f.summands[q.vertex(x)];
  return f;
}

// Σ d_j · row j of 𝔠.
inline DimensionVector dim_formal_injective(const Presentation& p, const FormalInjective& e) {
  DimensionVector d;
  for (const auto& [j, mult] : e.summands) {
    auto row = dim_injective(p, j, Side::Left).to_sparse();
    if (!row) throw InfiniteDimensional("E(" + p.label(j) + ") is infinite-dimensional");
    d = sum(d, *row, mult);
  }
  return d;
}

// dim ν(E) = Σ d_j · column j of 𝔠.
inline DimensionVector nakayama_dim(const Presentation& p, const FormalInjective& e) {
  DimensionVector d;
  for (const auto& [j, mult] : e.summands) {
    auto col = dim_injective(p, j, Side::Right).to_sparse();
    if (!col) throw InfiniteDimensional("Ê(" + p.label(j) + ") is infinite-dimensional");
    d = sum(d, *col, mult);
  }
  return d;
}

// ---- copresentations and the transpose ----

struct InjCopresentation {
  Comodule module;  // embedded in the working window
  FormalInjective e0, e1;
  std::vector<int> e0_local, e1_local;      // summand vertices, window-local
  std::vector<PathCoefficient> coefficients;  // block (k, j): paths k -> j
  RepMap embedding;                           // M -> E0 on the window
  RepMap map;                                 // E0 -> E1 on the window
};

inline InjCopresentation min_inj_copresentation(const Comodule& m, int margin = kDefaultMargin) {
  require_quiver(m.presentation);
  if (margin < 1) throw WindowInsufficient("copresentations need a margin of at least one arrow step");
  const Presentation& p = m.presentation;
  const auto supp = m.support();
  const Comodule w = supp.empty() ? m : embed(m, expand_window(p, supp, margin));
  const FiniteQuiver& q = *w.quiver;
  for (auto v : supp)
    for (const auto& nb : p.neighbors(v, Direction::In))
      if (q.local(nb.vertex) < 0) throw WindowInsufficient("window misses an in-neighbour of the support");

  Envelope env0 = envelope(q, w.rep);
  Cokernel cok = cokernel(q, env0.injective, env0.iota);
  Envelope env1 = envelope(q, cok.module);
  RepMap g = compose(env1.iota, cok.projection);
  auto coefficients = path_coefficients(q, env0.summands, env1.summands, g);
  InjCopresentation c{w,
                      formal_injective(q, env0.summands),
                      formal_injective(q, env1.summands),
                      env0.summands,
                      env1.summands,
                      std::move(coefficients),
                      env0.iota,
                      std::move(g)};
  for (int i = 0; i < q.size(); ++i) {
    if (rank(c.embedding[i]) != static_cast<std::size_t>(w.rep.dim[i]))
      throw std::logic_error("envelope is not injective");
    if (!(c.map[i] * c.embedding[i]).is_zero()) throw std::logic_error("copresentation is not a complex");
    if (rank(c.map[i]) + w.rep.dim[i] != static_cast<std::size_t>(env0.injective.dim[i]))
      throw std::logic_error("copresentation is not exact at E0");
  }
  return c;
}

// Hom(E(j), M) = 0 for every j in supp(M) and its one-arrow neighbourhood.
inline bool certify_no_inj_hom(const Comodule& m) {
  require_quiver(m.presentation);
  const Presentation& p = m.presentation;
  const auto supp = m.support();
  if (supp.empty()) return true;
  std::set<Vertex> targets(supp.begin(), supp.end());
  std::vector<Vertex> base = supp;
  for (auto v : supp)
    for (auto d : {Direction::In, Direction::Out})
      for (const auto& nb : p.neighbors(v, d)) {
        targets.insert(nb.vertex);
        if (d == Direction::In) base.push_back(nb.vertex);
      }
  for (auto j : targets) {
    auto w = base;
    w.push_back(j);
    const Comodule e = embed(m, w);
    const Rep inj = injective_rep(*e.quiver, {e.quiver->local(j)});
    if (hom_dim(*e.quiver, inj, e.rep) != 0) return false;
  }
  return true;
}

namespace detail {

// Tr M = Ker(∇E1 -> ∇E0) as a comodule over the opposite presentation, on the copresentation window.
inline Comodule transpose_module(const InjCopresentation& c) {
  const FiniteQuiver& q = *c.module.quiver;
  auto qop = std::make_shared<const FiniteQuiver>(q.opposite());
  std::vector<PathCoefficient> dual;
  for (const auto& pc : c.coefficients)
    dual.push_back({pc.src_summand, pc.dst_summand, q.reversed_in(*qop, pc.path), pc.value});
  const Rep e1 = injective_rep(*qop, c.e1_local);
  const RepMap nabla = injective_hom(*qop, c.e1_local, c.e0_local, dual);
  Kernel k = kernel_rep(*qop, e1, nabla);
  return Comodule{c.module.presentation.opposite(), qop, std::move(k.module)};
}

inline void require_inside(const Comodule& m, const std::vector<Vertex>& boundary, const char* what) {
  for (auto v : boundary)
    if (m.dim_at(v) != 0)
      throw WindowInsufficient(std::string(what) + " reaches the window boundary at " + m.presentation.label(v) +
                               "; increase the margin");
}

}  // namespace detail

struct TransposeResult {
  DimensionVector dim;              // dim ∇E1 - dim ∇E0
  std::optional<Comodule> module;   // over the opposite presentation
};

inline TransposeResult transpose_tr(const Comodule& m, int margin = kDefaultMargin) {
  if (!certify_no_inj_hom(m))
    throw HomCNotZero("Hom(C, M) is nonzero, so dim Tr M is not dim ∇E1 - dim ∇E0");
  const auto c = min_inj_copresentation(m, margin);
  const Presentation& p = m.presentation;
  const auto boundary = window_boundary(p, *c.module.quiver);
  TransposeResult r{{}, detail::transpose_module(c)};
  detail::require_inside(*r.module, boundary, "Tr M");
  // The shortcut uses columns of 𝔠, which may be infinite; their difference is evaluated on the window.
  const LazyIntMatrix cartan = cartan_matrix(p);
  for (auto v : c.module.quiver->vertices()) {
    BigInt x = 0;
    for (const auto& [k, d] : c.e1.summands) x += d * cartan.entry(v, k);
    for (const auto& [j, d] : c.e0.summands) x -= d * cartan.entry(v, j);
    add_to(r.dim, v, x);
  }
  for (auto v : boundary)
    if (r.dim.count(v)) throw WindowInsufficient("dim ∇E1 - dim ∇E0 reaches the window boundary; increase the margin");
  if (r.dim != dim_vector(*r.module)) throw std::logic_error("Tr M disagrees with dim ∇E1 - dim ∇E0");
  return r;
}

enum class TauDirection { Tau, TauMinus };

// τ⁻ M = D Tr M and τ N = Tr_{op}(D N), computed on exact-rational representations.
inline Comodule tau(const Comodule& n, TauDirection d, int margin = kDefaultMargin) {
  require_quiver(n.presentation);
  if (n.is_zero()) return n;
  if (d == TauDirection::TauMinus) {
    const auto c = min_inj_copresentation(n, margin);
    const Comodule tr = detail::transpose_module(c);
    detail::require_inside(tr, window_boundary(tr.presentation, *tr.quiver), "Tr M");
    return Comodule{n.presentation, c.module.quiver, dual_rep(tr.rep)};
  }
  const Comodule dn{n.presentation.opposite(), std::make_shared<const FiniteQuiver>(n.quiver->opposite()),
                    dual_rep(n.rep)};
  const auto c = min_inj_copresentation(dn, margin);
  Comodule out = detail::transpose_module(c);
  detail::require_inside(out, window_boundary(out.presentation, *out.quiver), "τN");
  return out;
}

// ---- meshes ----

struct MeshSequence {
  Comodule left;                 // τN
  std::vector<Comodule> middle;
  Comodule right;                // N
};

inline bool mesh_additive(const MeshSequence& s) {
  DimensionVector d = sum(dim_vector(s.left), dim_vector(s.right));
  for (const auto& m : s.middle) d = sum(d, dim_vector(m), -1);
  return d.empty();
}

// (a, b) when m is isomorphic to the interval module on a..b of a linear family.
inline std::optional<std::pair<std::int64_t, std::int64_t>> as_interval(const Comodule& m) {
  const Presentation& p = m.presentation;
  if (p.family() != Family::AInfinity && p.family() != Family::ZAInfinity) return std::nullopt;
  const auto supp = m.support();
  if (supp.empty()) return std::nullopt;
  const auto a = supp.front().id, b = supp.back().id;
  if (b - a + 1 != static_cast<std::int64_t>(supp.size())) return std::nullopt;
  for (auto v : supp)
    if (m.dim_at(v) != 1) return std::nullopt;
  if (!isomorphic(m, interval_module(p, a, b))) return std::nullopt;
  return std::make_pair(a, b);
}

enum class MeshDirection { EndingAt, StartingFrom };

// Almost split sequence with N at the given end. Intervals of a linear family use the closed form
// for the middle term; other modules need a knitted fragment (see knitting.hpp).
inline MeshSequence almost_split_mesh(const Comodule& n, MeshDirection d, int margin = kDefaultMargin) {
  auto iv = as_interval(n);
  if (!iv) throw NotInKnittedRegion("not an interval module; knit the component to obtain its mesh");
  const Presentation& p = n.presentation;
  auto [a, b] = *iv;
  MeshSequence s{n, {}, n};
  auto push = [&](std::int64_t x, std::int64_t y) {
    if (x <= y && p.contains(Vertex{x})) s.middle.push_back(interval_module(p, x, y));
  };
  if (d == MeshDirection::EndingAt) {
    s.left = tau(n, TauDirection::Tau, margin);
    if (s.left.is_zero()) throw HypothesisViolated("N is projective; no almost split sequence ends at it");
    s.right = n;
    push(a, b + 1);
    push(a + 1, b);
  } else {
    s.right = tau(n, TauDirection::TauMinus, margin);
    if (s.right.is_zero()) throw HypothesisViolated("N is injective; no almost split sequence starts at it");
    s.left = n;
    push(a - 1, b);
    push(a, b - 1);
  }
  return s;
}

// ---- dim τN = Φ(dim N) ----

struct TauFormulaCheck {
  bool holds = false;
  DimensionVector lhs;  // dim τN, comodule level
  DimensionVector rhs;  // Φ(dim N)
};

inline TauFormulaCheck verify_tau_formula(const Comodule& n, int margin = kDefaultMargin) {
  require_quiver(n.presentation);
  const Presentation& p = n.presentation;
  const Comodule dn{p.opposite(), std::make_shared<const FiniteQuiver>(n.quiver->opposite()), dual_rep(n.rep)};
  if (dn.is_zero() || min_inj_copresentation(dn, margin).e1.empty())
    throw HypothesisViolated("inj.dim DN is not 1 (N is projective)");
  if (!certify_no_inj_hom(dn)) throw HypothesisViolated("Hom(C, DN) is nonzero");
  TauFormulaCheck r;
  r.lhs = dim_vector(tau(n, TauDirection::Tau, margin));
  const CoxeterOperator op(p);
  const LazyVector phi = apply_coxeter(op, dim_vector(n), CoxeterDirection::Forward);
  if (auto s = phi.to_sparse()) {
    r.rhs = *s;
  } else {
    std::vector<Vertex> anchors = n.support();
    for (const auto& [v, x] : r.lhs) anchors.push_back(v);
    r.rhs = detail::certify_support(p, phi, anchors, margin + 2);
  }
  r.holds = r.lhs == r.rhs;
  return r;
}

}  // namespace cox
