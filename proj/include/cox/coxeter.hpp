#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "cox/cartan.hpp"
#include "cox/errors.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/presentation.hpp"

namespace cox {

enum class CoxeterDirection { Forward, Inverse };

// Ids of a garland block span 2m+1, so a ring narrower than two blocks can miss nonzero entries.
inline int default_margin(const Presentation& p) {
  if (p.family() == Family::Garland) {
    const auto directive = p.family_directive().value_or("garland 1");
    const int m = std::stoi(directive.substr(directive.find(' ') + 1));
    return 2 * (2 * m + 1);
  }
  return 4;
}

class CoxeterOperator {
 public:
  // margin <= 0 picks default_margin(p).
  explicit CoxeterOperator(const Presentation& p, int margin = 0)
      : pair_(p),
        cartan_tr_(transpose(pair_.cartan)),
        inverse_tr_(transpose(pair_.inverse)),
        margin_(margin > 0 ? margin : default_margin(p)) {}

  const CartanPair& pair() const { return pair_; }
  const Presentation& presentation() const { return pair_.presentation; }
  const LazyIntMatrix& cartan() const { return pair_.cartan; }
  const LazyIntMatrix& inverse() const { return pair_.inverse; }
  const LazyIntMatrix& cartan_tr() const { return cartan_tr_; }
  const LazyIntMatrix& inverse_tr() const { return inverse_tr_; }
  // Width of the zero ring used to certify the support of intermediate vectors.
  int margin() const { return margin_; }

 private:
  CartanPair pair_;
  LazyIntMatrix cartan_tr_;
  LazyIntMatrix inverse_tr_;
  int margin_;
};

// Forward: -(𝔠^{-tr})·𝔠.  Inverse: -(𝔠^{-1})·𝔠^{tr}.
inline LazyIntMatrix coxeter_matrix(const CoxeterOperator& op, CoxeterDirection d) {
  if (d == CoxeterDirection::Forward) return negate(multiply(op.inverse_tr(), op.cartan()));
  return negate(multiply(op.inverse(), op.cartan_tr()));
}

// Φ(x) = -((x·𝔠^{-tr})·𝔠) and Φ⁻(x) = -((x·𝔠^{-1})·𝔠^{tr}) for finitely supported x.
inline LazyVector apply_coxeter(const CoxeterOperator& op, const SparseVector& x, CoxeterDirection d) {
  for (const auto& [v, c] : x) op.presentation().require(v);
  const LazyVector lx = LazyVector::from_sparse(x);
  if (d == CoxeterDirection::Forward) return negate(apply_vector(apply_vector(lx, op.inverse_tr()), op.cartan()));
  return negate(apply_vector(apply_vector(lx, op.inverse()), op.cartan_tr()));
}

inline LazyVector apply_coxeter(const CoxeterOperator& op, const LazyVector& x, CoxeterDirection d) {
  auto sparse = x.to_sparse();
  if (!sparse) throw NotInDomain("input is neither finitely supported nor a generator combination");
  return apply_coxeter(op, *sparse, d);
}

// Σ λ_a dim Ê(a) for the forward direction, Σ λ_a dim E(a) for the inverse direction.
struct GeneratorCombination {
  SparseVector coefficients;
};

namespace detail {

// Evaluates y on the id range spanned by `anchors` plus a margin, and requires y to vanish on a
// further ring of the same width; the nonzero entries inside are returned as y's support.
inline SparseVector certify_support(const Presentation& p, const LazyVector& y, const std::vector<Vertex>& anchors,
                                    int margin) {
  if (anchors.empty()) return {};
  auto [lo, hi] = std::minmax_element(anchors.begin(), anchors.end());
  const std::int64_t a = lo->id - margin, b = hi->id + margin;
  SparseVector inside;
  for (std::int64_t id = a; id <= b; ++id)
    if (p.contains(Vertex{id})) add_to(inside, Vertex{id}, y.at(Vertex{id}));
  for (std::int64_t id = a - margin; id < a; ++id)
    if (p.contains(Vertex{id}) && y.at(Vertex{id}) != 0)
      throw WindowInsufficient("intermediate vector is nonzero at " + p.label(Vertex{id}) +
                               ", outside the certified window; increase --margin");
  for (std::int64_t id = b + 1; id <= b + margin; ++id)
    if (p.contains(Vertex{id}) && y.at(Vertex{id}) != 0)
      throw WindowInsufficient("intermediate vector is nonzero at " + p.label(Vertex{id}) +
                               ", outside the certified window; increase --margin");
  return inside;
}

}  // namespace detail

inline LazyVector apply_coxeter(const CoxeterOperator& op, const GeneratorCombination& g, CoxeterDirection d) {
  const Presentation& p = op.presentation();
  std::vector<Vertex> anchors;
  for (const auto& [a, c] : g.coefficients) {
    p.require(a);
    anchors.push_back(a);
  }
  const auto lambda = std::make_shared<const SparseVector>(g.coefficients);
  const LazyIntMatrix c = op.cartan();
  LazyVector x = (d == CoxeterDirection::Forward)
                     ? LazyVector(
                           [lambda, c](Vertex i) {
                             BigInt s = 0;
                             for (const auto& [a, l] : *lambda) s += l * c.entry(i, a);
                             return s;
                           },
                           std::nullopt)
                     : LazyVector(
                           [lambda, c](Vertex j) {
                             BigInt s = 0;
                             for (const auto& [a, l] : *lambda) s += l * c.entry(a, j);
                             return s;
                           },
                           std::nullopt);
  const LazyIntMatrix& first = d == CoxeterDirection::Forward ? op.inverse_tr() : op.inverse();
  const LazyIntMatrix& second = d == CoxeterDirection::Forward ? op.cartan() : op.cartan_tr();
  const LazyVector y = apply_vector(x, first);
  const SparseVector y_sparse = detail::certify_support(p, y, anchors, op.margin());
  return negate(apply_vector(LazyVector::from_sparse(y_sparse), second));
}

struct GeneratorCheck {
  bool holds = true;
  std::string detail;
};

// Φ(dim Ê(a)) = -dim E(a) and Φ⁻(dim E(a)) = -dim Ê(a), compared at every vertex of `sample`.
inline GeneratorCheck verify_generator_identities(const CoxeterOperator& op, Vertex a, const IndexWindow& sample) {
  const Presentation& p = op.presentation();
  const GeneratorCombination g{{{a, 1}}};
  const LazyVector fwd = apply_coxeter(op, g, CoxeterDirection::Forward);
  const LazyVector inv = apply_coxeter(op, g, CoxeterDirection::Inverse);
  for (auto j : sample) {
    if (fwd.at(j) != -op.cartan().entry(a, j))
      return {false, "Φ(dim Ê(" + p.label(a) + ")) differs from -dim E(" + p.label(a) + ") at " + p.label(j)};
    if (inv.at(j) != -op.cartan().entry(j, a))
      return {false, "Φ⁻(dim E(" + p.label(a) + ")) differs from -dim Ê(" + p.label(a) + ") at " + p.label(j)};
  }
  return {};
}

enum class GeneratorSide { Injectives, OpInjectives };

// λ with x = Σ λ_a dim E(a) (Injectives) or x = Σ λ_a dim Ê(a) (OpInjectives).
inline SparseVector decompose_in_generators(const CoxeterOperator& op, const SparseVector& x, GeneratorSide side) {
  const Presentation& p = op.presentation();
  for (const auto& [v, c] : x) p.require(v);
  const bool inj = side == GeneratorSide::Injectives;
  const LazyVector lambda = apply_vector(LazyVector::from_sparse(x), inj ? op.inverse() : op.inverse_tr());
  auto lam = lambda.to_sparse();
  if (!lam) throw NotInSubgroup("coefficients are not finitely supported");
  const LazyVector back = apply_vector(LazyVector::from_sparse(*lam), inj ? op.cartan() : op.cartan_tr());
  std::vector<Vertex> check;
  for (const auto& [v, c] : x) check.push_back(v);
  if (back.support()) {
    check.insert(check.end(), back.support()->begin(), back.support()->end());
  } else {
    std::vector<Vertex> anchors = check;
    for (const auto& [v, c] : *lam) anchors.push_back(v);
    if (!anchors.empty()) {
      auto [lo, hi] = std::minmax_element(anchors.begin(), anchors.end());
      for (std::int64_t id = lo->id - op.margin(); id <= hi->id + op.margin(); ++id)
        if (p.contains(Vertex{id})) check.push_back(Vertex{id});
    }
  }
  for (auto v : check) {
    auto it = x.find(v);
    const BigInt want = it == x.end() ? BigInt(0) : it->second;
    if (back.at(v) != want) throw NotInSubgroup("the generator expansion does not reproduce x at " + p.label(v));
  }
  return *lam;
}

}  // namespace cox
