#pragma once

// Finite-dimensional representations of a finite acyclic quiver (optionally with all
// commutativity relations, i.e. an incidence algebra) and the injective-resolution engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cox/errors.hpp"
#include "cox/linalg.hpp"
#include "cox/presentation.hpp"

namespace cox {

struct PathClass {
  int src = 0;
  int dst = 0;
  std::vector<int> arrows;  // a representative path, arrows in travel order
  int position = 0;         // index within classes(src, dst)
};

class FiniteQuiver {
 public:
  FiniteQuiver(std::vector<Vertex> vertices, std::vector<std::pair<int, int>> arrows, bool commutative)
      : vertices_(std::move(vertices)), arrows_(std::move(arrows)), commutative_(commutative) {
    const int n = static_cast<int>(vertices_.size());
    for (int i = 0; i < n; ++i) local_.emplace(vertices_[i], i);
    out_.assign(n, {});
    in_.assign(n, {});
    for (int a = 0; a < static_cast<int>(arrows_.size()); ++a) {
      out_[arrows_[a].first].push_back(a);
      in_[arrows_[a].second].push_back(a);
    }
    compute_reach();
    between_.assign(n, std::vector<std::vector<int>>(n));
    if (commutative_)
      build_commutative_classes();
    else
      build_free_classes();
  }

  // Full subquiver (or subposet with its Hasse arrows) on the given vertices, which should be convex.
  static FiniteQuiver from_presentation(const Presentation& p, std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::map<Vertex, int> idx;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) idx.emplace(vs[i], i);
    std::vector<std::pair<int, int>> arrows;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i)
      for (const auto& nb : p.neighbors(vs[i], Direction::Out)) {
        auto it = idx.find(nb.vertex);
        if (it == idx.end()) continue;
        for (int k = 0; k < nb.multiplicity; ++k) arrows.push_back({i, it->second});
      }
    return FiniteQuiver(std::move(vs), std::move(arrows), p.kind() == Kind::Poset);
  }

  FiniteQuiver opposite() const {
    std::vector<std::pair<int, int>> rev;
    for (auto [s, t] : arrows_) rev.push_back({t, s});
    return FiniteQuiver(vertices_, std::move(rev), commutative_);
  }

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  Vertex vertex(int i) const { return vertices_[i]; }
  int local(Vertex v) const {
    auto it = local_.find(v);
    return it == local_.end() ? -1 : it->second;
  }
  const std::vector<std::pair<int, int>>& arrows() const { return arrows_; }
  const std::vector<int>& out_arrows(int v) const { return out_[v]; }
  const std::vector<int>& in_arrows(int v) const { return in_[v]; }
  bool commutative() const { return commutative_; }
  bool reaches(int a, int b) const { return reach_[a][b] != 0; }

  const std::vector<int>& classes(int src, int dst) const { return between_[src][dst]; }
  const PathClass& path_class(int id) const { return classes_[id]; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int trivial(int v) const { return between_[v][v][0]; }

  // The class of the path obtained by removing `arrow` from the front of `cls`, or -1.
  int strip_first(int arrow, int cls) const {
    const auto& c = classes_[cls];
    const auto [s, t] = arrows_[arrow];
    if (c.src != s) return -1;
    if (commutative_) return reach_[t][c.dst] ? between_[t][c.dst][0] : -1;
    if (c.arrows.empty() || c.arrows[0] != arrow) return -1;
    return find(t, std::vector<int>(c.arrows.begin() + 1, c.arrows.end()));
  }

  // For p = p'·q (q a terminal segment of p), the class of p'; otherwise -1.
  int strip_suffix(int p, int q) const {
    const auto& cp = classes_[p];
    const auto& cq = classes_[q];
    if (cp.dst != cq.dst) return -1;
    if (commutative_) return reach_[cp.src][cq.src] ? between_[cp.src][cq.src][0] : -1;
    if (cq.arrows.size() > cp.arrows.size()) return -1;
    if (!std::equal(cq.arrows.rbegin(), cq.arrows.rend(), cp.arrows.rbegin())) return -1;
    return find(cp.src, std::vector<int>(cp.arrows.begin(), cp.arrows.end() - cq.arrows.size()));
  }

  // The class in `opp` (this->opposite()) of the reversed path.
  int reversed_in(const FiniteQuiver& opp, int cls) const {
    const auto& c = classes_[cls];
    if (commutative_) return opp.between_[c.dst][c.src][0];
    return opp.find(c.dst, std::vector<int>(c.arrows.rbegin(), c.arrows.rend()));
  }

 private:
  int find(int src, const std::vector<int>& seq) const {
    auto it = by_sequence_.find({src, seq});
    return it == by_sequence_.end() ? -1 : it->second;
  }

  void compute_reach() {
    const int n = size();
    std::vector<int> indeg(n, 0), order;
    for (auto [s, t] : arrows_) {
      (void)s;
      ++indeg[t];
    }
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) order.push_back(v);
    for (std::size_t k = 0; k < order.size(); ++k)
      for (int a : out_[order[k]])
        if (--indeg[arrows_[a].second] == 0) order.push_back(arrows_[a].second);
    if (static_cast<int>(order.size()) != n) throw CycleDetected("window quiver has a cycle");
    reach_.assign(n, std::vector<char>(n, 0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      reach_[v][v] = 1;
      for (int a : out_[v])
        for (int w = 0; w < n; ++w)
          if (reach_[arrows_[a].second][w]) reach_[v][w] = 1;
    }
  }

  void add_class(int src, int dst, std::vector<int> seq) {
    PathClass c{src, dst, std::move(seq), static_cast<int>(between_[src][dst].size())};
    const int id = static_cast<int>(classes_.size());
    between_[src][dst].push_back(id);
    by_sequence_.emplace(std::make_pair(src, c.arrows), id);
    classes_.push_back(std::move(c));
  }

  void build_free_classes() {
    const std::size_t budget = node_budget();
    for (int s = 0; s < size(); ++s) {
      std::vector<std::pair<int, std::vector<int>>> stack{{s, {}}};
      while (!stack.empty()) {
        auto [v, seq] = std::move(stack.back());
        stack.pop_back();
        for (auto it = out_[v].rbegin(); it != out_[v].rend(); ++it) {
          auto next = seq;
          next.push_back(*it);
          stack.push_back({arrows_[*it].second, std::move(next)});
        }
        add_class(s, v, std::move(seq));
        if (classes_.size() > budget) throw IntervalFinitenessViolated("node budget exceeded enumerating paths");
      }
    }
    for (auto& row : between_)
      for (auto& list : row)
        std::sort(list.begin(), list.end(), [&](int a, int b) {
          return classes_[a].arrows < classes_[b].arrows;
        });
    for (auto& row : between_)
      for (auto& list : row)
        for (int k = 0; k < static_cast<int>(list.size()); ++k) classes_[list[k]].position = k;
  }

  void build_commutative_classes() {
    const int n = size();
    for (int s = 0; s < n; ++s) {
      // breadth-first parents give a representative chain to every vertex above s
      std::vector<int> via(n, -2);
      via[s] = -1;
      std::vector<int> queue{s};
      for (std::size_t k = 0; k < queue.size(); ++k)
        for (int a : out_[queue[k]])
          if (via[arrows_[a].second] == -2) {
            via[arrows_[a].second] = a;
            queue.push_back(arrows_[a].second);
          }
      for (int d = 0; d < n; ++d) {
        if (via[d] == -2) continue;
        std::vector<int> seq;
        for (int v = d; via[v] >= 0; v = arrows_[via[v]].first) seq.push_back(via[v]);
        std::reverse(seq.begin(), seq.end());
        add_class(s, d, std::move(seq));
      }
    }
  }

  std::vector<Vertex> vertices_;
  std::vector<std::pair<int, int>> arrows_;
  bool commutative_;
  std::map<Vertex, int> local_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<std::vector<char>> reach_;
  std::vector<PathClass> classes_;
  std::vector<std::vector<std::vector<int>>> between_;
  std::map<std::pair<int, std::vector<int>>, int> by_sequence_;
};

// A representation: a space of dimension dim[v] at each vertex and a matrix per arrow (dim[t] x dim[s]).
struct Rep {
  std::vector<int> dim;
  std::vector<QMatrix> maps;

  int total_dim() const {
    int s = 0;
    for (int d : dim) s += d;
    return s;
  }
  bool is_zero() const { return total_dim() == 0; }
};

using RepMap = std::vector<QMatrix>;  // one matrix per vertex

inline Rep zero_rep(const FiniteQuiver& q) {
  Rep r;
  r.dim.assign(q.size(), 0);
  for (auto [s, t] : q.arrows()) {
    (void)s;
    (void)t;
    r.maps.emplace_back(0, 0);
  }
  return r;
}

inline Rep simple_rep(const FiniteQuiver& q, int v) {
  Rep r = zero_rep(q);
  r.dim[v] = 1;
  for (std::size_t a = 0; a < q.arrows().size(); ++a)
    r.maps[a] = QMatrix(r.dim[q.arrows()[a].second], r.dim[q.arrows()[a].first]);
  return r;
}

// One-dimensional at each vertex of `support`, identity along arrows inside it.
inline Rep thin_rep(const FiniteQuiver& q, const std::vector<int>& support) {
  Rep r;
  r.dim.assign(q.size(), 0);
  for (int v : support) r.dim[v] = 1;
  for (auto [s, t] : q.arrows()) {
    QMatrix m(r.dim[t], r.dim[s]);
    if (r.dim[s] && r.dim[t]) m(0, 0) = 1;
    r.maps.push_back(std::move(m));
  }
  return r;
}

inline bool rep_equal(const Rep& a, const Rep& b) { return a.dim == b.dim && a.maps == b.maps; }

// The linear map M_p along a path class p (representative path; all classes agree in the commutative case).
inline QMatrix path_map(const FiniteQuiver& q, const Rep& m, int cls) {
  const auto& c = q.path_class(cls);
  QMatrix acc = QMatrix::identity(m.dim[c.src]);
  for (int a : c.arrows) acc = m.maps[a] * acc;
  return acc;
}

// ---- injectives ----

// Offsets of each summand's block at each vertex, for E = ⊕ E(summands[s]).
struct InjectiveLayout {
  std::vector<int> summands;
  std::vector<std::vector<int>> offset;  // offset[i][s]
  std::vector<int> dim;
};

inline InjectiveLayout injective_layout(const FiniteQuiver& q, const std::vector<int>& summands) {
  InjectiveLayout L{summands, std::vector<std::vector<int>>(q.size()), std::vector<int>(q.size(), 0)};
  for (int i = 0; i < q.size(); ++i) {
    int off = 0;
    for (int x : summands) {
      L.offset[i].push_back(off);
      off += static_cast<int>(q.classes(i, x).size());
    }
    L.dim[i] = off;
  }
  return L;
}

// E(x)_i has basis the path classes i -> x; an arrow strips itself from the front of a class.
inline Rep injective_rep(const FiniteQuiver& q, const std::vector<int>& summands) {
  const auto L = injective_layout(q, summands);
  Rep r;
  r.dim = L.dim;
  for (int a = 0; a < static_cast<int>(q.arrows().size()); ++a) {
    const auto [s, t] = q.arrows()[a];
    QMatrix m(L.dim[t], L.dim[s]);
    for (std::size_t k = 0; k < summands.size(); ++k)
      for (int cls : q.classes(s, summands[k])) {
        int stripped = q.strip_first(a, cls);
        if (stripped < 0) continue;
        m(L.offset[t][k] + q.path_class(stripped).position, L.offset[s][k] + q.path_class(cls).position) = 1;
      }
    r.maps.push_back(std::move(m));
  }
  return r;
}

struct PathCoefficient {
  int dst_summand;  // index into the target injective's summands (vertex k)
  int src_summand;  // index into the source injective's summands (vertex j)
  int path;         // class k -> j
  Rational value;
};

// The morphism ⊕E(j) -> ⊕E(k) given by path coefficients; a path q: k -> j acts by right-stripping q.
inline RepMap injective_hom(const FiniteQuiver& q, const std::vector<int>& src, const std::vector<int>& dst,
                            const std::vector<PathCoefficient>& coeffs) {
  const auto Ls = injective_layout(q, src);
  const auto Ld = injective_layout(q, dst);
  RepMap f;
  for (int i = 0; i < q.size(); ++i) {
    QMatrix m(Ld.dim[i], Ls.dim[i]);
    for (const auto& c : coeffs) {
      if (c.value == 0) continue;
      for (int p : q.classes(i, src[c.src_summand])) {
        int rest = q.strip_suffix(p, c.path);
        if (rest < 0) continue;
        m(Ld.offset[i][c.dst_summand] + q.path_class(rest).position,
          Ls.offset[i][c.src_summand] + q.path_class(p).position) += c.value;
      }
    }
    f.push_back(std::move(m));
  }
  return f;
}

// Reads off the path coefficients of a morphism g: ⊕E(src) -> ⊕E(dst) from its vertex-k blocks.
inline std::vector<PathCoefficient> path_coefficients(const FiniteQuiver& q, const std::vector<int>& src,
                                                      const std::vector<int>& dst, const RepMap& g) {
  const auto Ls = injective_layout(q, src);
  const auto Ld = injective_layout(q, dst);
  std::vector<PathCoefficient> out;
  for (std::size_t a = 0; a < dst.size(); ++a) {
    const int k = dst[a];
    for (std::size_t b = 0; b < src.size(); ++b)
      for (int cls : q.classes(k, src[b])) {
        const Rational& v = g[k](Ld.offset[k][a], Ls.offset[k][b] + q.path_class(cls).position);
        if (v != 0) out.push_back({static_cast<int>(a), static_cast<int>(b), cls, v});
      }
  }
  return out;
}

// ---- socle, envelope, cokernel ----

// Columns span soc_v M = ∩ ker M_α over arrows α leaving v.
inline std::vector<QMatrix> socle_basis(const FiniteQuiver& q, const Rep& m) {
  std::vector<QMatrix> out;
  for (int v = 0; v < q.size(); ++v) {
    std::vector<QMatrix> blocks;
    for (int a : q.out_arrows(v)) blocks.push_back(m.maps[a]);
    out.push_back(kernel(vstack(blocks, m.dim[v])));
  }
  return out;
}

inline std::vector<int> socle_dims(const FiniteQuiver& q, const Rep& m) {
  std::vector<int> d;
  for (const auto& b : socle_basis(q, m)) d.push_back(static_cast<int>(b.cols()));
  return d;
}

struct Envelope {
  std::vector<int> summands;  // local vertices, nondecreasing
  Rep injective;
  RepMap iota;                // M -> injective
};

// Minimal injective envelope: functionals dual to a socle basis, pushed along every path class.
inline Envelope envelope(const FiniteQuiver& q, const Rep& m) {
  const auto soc = socle_basis(q, m);
  Envelope env;
  std::vector<QMatrix> functionals(q.size());
  for (int x = 0; x < q.size(); ++x) {
    const int k = static_cast<int>(soc[x].cols());
    if (k == 0) continue;
    QMatrix full = *inverse(complete_basis(soc[x]));
    functionals[x] = full.row_block(0, k);
    for (int c = 0; c < k; ++c) env.summands.push_back(x);
  }
  env.injective = injective_rep(q, env.summands);
  const auto L = injective_layout(q, env.summands);
  for (int i = 0; i < q.size(); ++i) {
    QMatrix iota(L.dim[i], m.dim[i]);
    std::vector<int> copy(q.size(), 0);
    for (std::size_t s = 0; s < env.summands.size(); ++s) {
      const int x = env.summands[s];
      const int which = copy[x]++;
      for (int cls : q.classes(i, x)) {
        QMatrix row = functionals[x].row_block(which, 1) * path_map(q, m, cls);
        for (int c = 0; c < m.dim[i]; ++c) iota(L.offset[i][s] + q.path_class(cls).position, c) = row(0, c);
      }
    }
    env.iota.push_back(std::move(iota));
  }
  return env;
}

struct Cokernel {
  Rep module;
  RepMap projection;  // target -> module
};

inline Cokernel cokernel(const FiniteQuiver& q, const Rep& target, const RepMap& f) {
  Cokernel c;
  std::vector<QMatrix> lift;
  c.module.dim.assign(q.size(), 0);
  for (int i = 0; i < q.size(); ++i) {
    QMatrix p = f[i].cols() == 0 ? QMatrix::identity(target.dim[i]) : left_kernel(f[i]);
    c.module.dim[i] = static_cast<int>(p.rows());
    lift.push_back(*solve(p, QMatrix::identity(p.rows())));
    c.projection.push_back(std::move(p));
  }
  for (int a = 0; a < static_cast<int>(q.arrows().size()); ++a) {
    const auto [s, t] = q.arrows()[a];
    c.module.maps.push_back(c.projection[t] * target.maps[a] * lift[s]);
  }
  return c;
}

struct Kernel {
  Rep module;
  RepMap inclusion;  // module -> source
};

inline Kernel kernel_rep(const FiniteQuiver& q, const Rep& source, const RepMap& f) {
  Kernel k;
  k.module.dim.assign(q.size(), 0);
  for (int i = 0; i < q.size(); ++i) {
    QMatrix basis = f[i].rows() == 0 ? QMatrix::identity(source.dim[i]) : kernel(f[i]);
    k.module.dim[i] = static_cast<int>(basis.cols());
    k.inclusion.push_back(std::move(basis));
  }
  for (int a = 0; a < static_cast<int>(q.arrows().size()); ++a) {
    const auto [s, t] = q.arrows()[a];
    auto x = solve(k.inclusion[t], source.maps[a] * k.inclusion[s]);
    if (!x) throw std::logic_error("kernel is not a subrepresentation");
    k.module.maps.push_back(std::move(*x));
  }
  return k;
}

// D M as a representation of the opposite quiver (arrow indices preserved).
inline Rep dual_rep(const Rep& m) {
  Rep d;
  d.dim = m.dim;
  for (const auto& x : m.maps) d.maps.push_back(x.transpose());
  return d;
}

inline RepMap compose(const RepMap& g, const RepMap& f) {
  RepMap out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(g[i] * f[i]);
  return out;
}

// ---- Hom spaces ----

// A basis of Hom(A, B); each element is one matrix per vertex.
inline std::vector<RepMap> hom_basis(const FiniteQuiver& q, const Rep& A, const Rep& B) {
  std::vector<int> base(q.size() + 1, 0);
  for (int i = 0; i < q.size(); ++i) base[i + 1] = base[i] + B.dim[i] * A.dim[i];
  const int unknowns = base[q.size()];
  std::size_t eqs = 0;
  for (auto [s, t] : q.arrows()) eqs += static_cast<std::size_t>(B.dim[t]) * A.dim[s];
  QMatrix sys(eqs, unknowns);
  std::size_t row = 0;
  for (int a = 0; a < static_cast<int>(q.arrows().size()); ++a) {
    const auto [s, t] = q.arrows()[a];
    // (B_a f_s - f_t A_a)(r, c) = 0
    for (int r = 0; r < B.dim[t]; ++r)
      for (int c = 0; c < A.dim[s]; ++c, ++row) {
        for (int k = 0; k < B.dim[s]; ++k) sys(row, base[s] + k * A.dim[s] + c) += B.maps[a](r, k);
        for (int k = 0; k < A.dim[t]; ++k) sys(row, base[t] + r * A.dim[t] + k) -= A.maps[a](k, c);
      }
  }
  const QMatrix ker = kernel(sys);
  std::vector<RepMap> out;
  for (std::size_t col = 0; col < ker.cols(); ++col) {
    RepMap f;
    for (int i = 0; i < q.size(); ++i) {
      QMatrix m(B.dim[i], A.dim[i]);
      for (int r = 0; r < B.dim[i]; ++r)
        for (int c = 0; c < A.dim[i]; ++c) m(r, c) = ker(base[i] + r * A.dim[i] + c, col);
      f.push_back(std::move(m));
    }
    out.push_back(std::move(f));
  }
  return out;
}

inline std::size_t hom_dim(const FiniteQuiver& q, const Rep& A, const Rep& B) { return hom_basis(q, A, B).size(); }

// A ≅ B. A found isomorphism is a proof; a negative answer relies on pseudo-random combinations
// of a Hom basis, which detect an isomorphism with overwhelming probability.
inline bool is_isomorphic(const FiniteQuiver& q, const Rep& A, const Rep& B) {
  if (A.dim != B.dim) return false;
  if (A.is_zero()) return true;
  const auto basis = hom_basis(q, A, B);
  if (basis.empty()) return false;
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (int attempt = 0; attempt < 8; ++attempt) {
    RepMap f;
    for (int i = 0; i < q.size(); ++i) f.emplace_back(B.dim[i], A.dim[i]);
    for (const auto& b : basis) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      const Rational c = static_cast<long>((state >> 33) % 19) - 9;
      for (int i = 0; i < q.size(); ++i)
        for (std::size_t r = 0; r < f[i].rows(); ++r)
          for (std::size_t cc = 0; cc < f[i].cols(); ++cc) f[i](r, cc) += c * b[i](r, cc);
    }
    bool iso = true;
    for (int i = 0; i < q.size() && iso; ++i)
      if (A.dim[i] > 0 && rank(f[i]) != static_cast<std::size_t>(A.dim[i])) iso = false;
    if (iso) return true;
  }
  return false;
}

// ---- minimal injective resolutions ----

struct ExplicitResolution {
  std::vector<Envelope> terms;       // terms[m].summands are the Bass multiplicities in degree m
  std::vector<RepMap> differentials;  // d_m : E_m -> E_{m+1}
  bool finite = false;               // the last computed cokernel vanished
};

// Resolves m up to degree max_degree (inclusive); `finite` reports whether it stopped on its own.
inline ExplicitResolution resolve(const FiniteQuiver& q, const Rep& m, int max_degree) {
  ExplicitResolution res;
  Rep current = m;
  RepMap previous_projection;
  for (int deg = 0; deg <= max_degree + 1; ++deg) {
    if (current.is_zero()) {
      res.finite = true;
      return res;
    }
    if (deg == max_degree + 1) break;
    Envelope env = envelope(q, current);
    if (deg > 0) res.differentials.push_back(compose(env.iota, previous_projection));
    Cokernel c = cokernel(q, env.injective, env.iota);
    res.terms.push_back(std::move(env));
    current = std::move(c.module);
    previous_projection = std::move(c.projection);
  }
  return res;
}

inline std::vector<std::vector<int>> bass_numbers(const FiniteQuiver& q, const ExplicitResolution& r) {
  std::vector<std::vector<int>> out;
  for (const auto& t : r.terms) {
    std::vector<int> mult(q.size(), 0);
    for (int x : t.summands) ++mult[x];
    out.push_back(std::move(mult));
  }
  return out;
}

}  // namespace cox
