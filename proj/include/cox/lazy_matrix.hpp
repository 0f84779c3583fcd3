#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cox/arith.hpp"
#include "cox/errors.hpp"
#include "cox/presentation.hpp"

namespace cox {

// How a finiteness flag is known: not at all, from a family's closed form, or by enumeration.
enum class Certificate { None, ClosedForm, Enumerated };

inline Certificate weaker(Certificate a, Certificate b) {
  if (a == Certificate::None || b == Certificate::None) return Certificate::None;
  if (a == Certificate::Enumerated || b == Certificate::Enumerated) return Certificate::Enumerated;
  return Certificate::ClosedForm;
}

using SparseVector = std::map<Vertex, BigInt>;  // zero entries are never stored
using DimensionVector = SparseVector;

inline void add_to(SparseVector& v, Vertex at, const BigInt& x) {
  if (x == 0) return;
  auto& slot = v[at];
  slot += x;
  if (slot == 0) v.erase(at);
}

inline SparseVector scaled(const SparseVector& v, const BigInt& c) {
  SparseVector out;
  if (c == 0) return out;
  for (const auto& [k, x] : v) out[k] = x * c;
  return out;
}

inline SparseVector sum(const SparseVector& a, const SparseVector& b, const BigInt& cb = 1) {
  SparseVector out = a;
  for (const auto& [k, x] : b) add_to(out, k, x * cb);
  return out;
}

inline SparseVector unit_vector(Vertex v) { return SparseVector{{v, 1}}; }

class LazyIntMatrix {
 public:
  using EntryRule = std::function<BigInt(Vertex, Vertex)>;
  using SupportRule = std::function<std::vector<Vertex>(Vertex)>;

  struct Axis {
    SupportRule support;  // only consulted when certificate != None
    Certificate certificate = Certificate::None;
  };

  LazyIntMatrix(EntryRule entry, Axis rows, Axis cols, bool memoize = false)
      : impl_(std::make_shared<Impl>(std::move(entry), std::move(rows), std::move(cols), memoize)) {}

  BigInt entry(Vertex i, Vertex j) const { return impl_->get(i, j); }

  // Finite set outside which row i vanishes, or nullopt when row-finiteness is not certified.
  std::optional<std::vector<Vertex>> row_support(Vertex i) const {
    if (impl_->rows.certificate == Certificate::None) return std::nullopt;
    return impl_->rows.support(i);
  }
  std::optional<std::vector<Vertex>> col_support(Vertex j) const {
    if (impl_->cols.certificate == Certificate::None) return std::nullopt;
    return impl_->cols.support(j);
  }

  bool row_finite() const { return impl_->rows.certificate != Certificate::None; }
  bool col_finite() const { return impl_->cols.certificate != Certificate::None; }
  Certificate row_certificate() const { return impl_->rows.certificate; }
  Certificate col_certificate() const { return impl_->cols.certificate; }
  const Axis& rows() const { return impl_->rows; }
  const Axis& cols() const { return impl_->cols; }

 private:
  struct Impl {
    Impl(EntryRule e, Axis r, Axis c, bool m) : rule(std::move(e)), rows(std::move(r)), cols(std::move(c)), memo(m) {}
    BigInt get(Vertex i, Vertex j) const {
      if (!memo) return rule(i, j);
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find({i, j}); it != cache.end()) return it->second;
      }
      BigInt v = rule(i, j);
      std::lock_guard<std::mutex> lock(mutex);
      cache.emplace(std::make_pair(i, j), v);
      return v;
    }
    EntryRule rule;
    Axis rows, cols;
    bool memo;
    mutable std::mutex mutex;
    mutable std::map<std::pair<Vertex, Vertex>, BigInt> cache;
  };
  std::shared_ptr<const Impl> impl_;
};

inline LazyIntMatrix identity_matrix() {
  LazyIntMatrix::Axis ax{[](Vertex v) { return std::vector<Vertex>{v}; }, Certificate::ClosedForm};
  return LazyIntMatrix([](Vertex i, Vertex j) { return BigInt(i == j ? 1 : 0); }, ax, ax);
}

inline LazyIntMatrix transpose(const LazyIntMatrix& m) {
  return LazyIntMatrix([m](Vertex i, Vertex j) { return m.entry(j, i); }, m.cols(), m.rows());
}

inline LazyIntMatrix negate(const LazyIntMatrix& m) {
  return LazyIntMatrix([m](Vertex i, Vertex j) { return BigInt(-m.entry(i, j)); }, m.rows(), m.cols());
}

namespace detail {

inline std::vector<Vertex> union_supports(const std::vector<Vertex>& through,
                                          const LazyIntMatrix::SupportRule& rule) {
  std::set<Vertex> out;
  for (auto k : through)
    for (auto v : rule(k)) out.insert(v);
  return {out.begin(), out.end()};
}

inline std::string vertex_pair(Vertex i, Vertex j) {
  return "(" + std::to_string(i.id) + ", " + std::to_string(j.id) + ")";
}

}  // namespace detail

// The product a·b as a single, explicitly grouped binary operation.
inline LazyIntMatrix multiply(const LazyIntMatrix& a, const LazyIntMatrix& b) {
  auto entry = [a, b](Vertex i, Vertex j) {
    std::optional<std::vector<Vertex>> through = a.row_support(i);
    if (!through) through = b.col_support(j);
    if (!through)
      throw UndefinedProduct("entry " + detail::vertex_pair(i, j) +
                             " of the product is an infinite sum: neither factor is finite there");
    BigInt s = 0;
    for (auto k : *through) {
      BigInt x = a.entry(i, k);
      if (x != 0) s += x * b.entry(k, j);
    }
    return s;
  };
  LazyIntMatrix::Axis rows, cols;
  rows.certificate = weaker(a.row_certificate(), b.row_certificate());
  if (rows.certificate != Certificate::None)
    rows.support = [a, b](Vertex i) { return detail::union_supports(*a.row_support(i), b.rows().support); };
  cols.certificate = weaker(a.col_certificate(), b.col_certificate());
  if (cols.certificate != Certificate::None)
    cols.support = [a, b](Vertex j) { return detail::union_supports(*b.col_support(j), a.cols().support); };
  return LazyIntMatrix(entry, rows, cols, /*memoize=*/true);
}

class LazyVector {
 public:
  using EntryRule = std::function<BigInt(Vertex)>;

  LazyVector(EntryRule rule, std::optional<std::vector<Vertex>> support)
      : rule_(std::move(rule)), support_(std::move(support)) {}

  static LazyVector from_sparse(SparseVector x) {
    std::vector<Vertex> supp;
    for (const auto& [k, v] : x) supp.push_back(k);
    auto shared = std::make_shared<const SparseVector>(std::move(x));
    return LazyVector(
        [shared](Vertex v) {
          auto it = shared->find(v);
          return it == shared->end() ? BigInt(0) : it->second;
        },
        std::move(supp));
  }

  static LazyVector zero() { return from_sparse({}); }

  BigInt at(Vertex v) const {
    if (support_ && !std::binary_search(support_->begin(), support_->end(), v)) return 0;
    return rule_(v);
  }

  const std::optional<std::vector<Vertex>>& support() const { return support_; }
  bool finite_support() const { return support_.has_value(); }

  std::optional<SparseVector> to_sparse() const {
    if (!support_) return std::nullopt;
    SparseVector out;
    for (auto v : *support_) add_to(out, v, rule_(v));
    return out;
  }

  SparseVector restrict(const IndexWindow& w) const {
    SparseVector out;
    for (auto v : w) add_to(out, v, at(v));
    return out;
  }

 private:
  EntryRule rule_;
  std::optional<std::vector<Vertex>> support_;  // sorted
};

// x·m, i.e. (x·m)_j = Σ_i x_i m_ij.
inline LazyVector apply_vector(const LazyVector& x, const LazyIntMatrix& m) {
  if (x.support()) {
    auto supp = *x.support();
    auto rule = [x, m, supp](Vertex j) {
      BigInt s = 0;
      for (auto i : supp) {
        BigInt xi = x.at(i);
        if (xi != 0) s += xi * m.entry(i, j);
      }
      return s;
    };
    std::optional<std::vector<Vertex>> out_support;
    if (m.row_finite()) out_support = detail::union_supports(supp, m.rows().support);
    return LazyVector(rule, out_support);
  }
  auto rule = [x, m](Vertex j) {
    auto through = m.col_support(j);
    if (!through)
      throw UndefinedProduct("coordinate " + std::to_string(j.id) +
                             " of a vector-matrix product is an infinite sum");
    BigInt s = 0;
    for (auto i : *through) {
      BigInt mij = m.entry(i, j);
      if (mij != 0) s += x.at(i) * mij;
    }
    return s;
  };
  return LazyVector(rule, std::nullopt);
}

inline LazyVector negate(const LazyVector& x) {
  return LazyVector([x](Vertex v) { return BigInt(-x.at(v)); }, x.support());
}

struct MatrixWindow {
  IndexWindow rows;
  IndexWindow cols;
  std::vector<std::vector<BigInt>> data;
  friend bool operator==(const MatrixWindow&, const MatrixWindow&) = default;
};

inline MatrixWindow evaluate_window(const LazyIntMatrix& m, const IndexWindow& rows, const IndexWindow& cols) {
  if (rows.empty() || cols.empty()) throw EmptyWindow("evaluate_window needs nonempty windows");
  MatrixWindow w{rows, cols, {}};
  for (auto i : rows) {
    std::vector<BigInt> row;
    for (auto j : cols) row.push_back(m.entry(i, j));
    w.data.push_back(std::move(row));
  }
  return w;
}

inline MatrixWindow evaluate_window(const LazyIntMatrix& m, const IndexWindow& w) { return evaluate_window(m, w, w); }

inline std::string to_tsv(const MatrixWindow& w, const Presentation& p) {
  std::ostringstream os;
  for (auto j : w.cols) os << '\t' << p.label(j);
  os << '\n';
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    os << p.label(w.rows[r]);
    for (const auto& x : w.data[r]) os << '\t' << x;
    os << '\n';
  }
  return os.str();
}

enum class Side { Left, Right };

struct IdentityCheck {
  bool holds = true;
  std::optional<std::pair<Vertex, Vertex>> where;
  BigInt value = 0;
};

// Checks that the product a·b is the identity on w×w; each product entry is the exact (untruncated) sum.
inline IdentityCheck verify_identity_on_window(const LazyIntMatrix& a, const LazyIntMatrix& b, const IndexWindow& w,
                                               Side /*side*/) {
  const LazyIntMatrix prod = multiply(a, b);
  for (auto i : w)
    for (auto j : w) {
      BigInt v = prod.entry(i, j);
      if (v != (i == j ? 1 : 0)) return IdentityCheck{false, std::make_pair(i, j), v};
    }
  return {};
}

inline std::string format_sparse(const SparseVector& x, const Presentation& p) {
  if (x.empty()) return "0";
  std::string out;
  for (const auto& [v, c] : x) {
    if (!out.empty()) out += ',';
    out += c.str() + "@" + p.label(v);
  }
  return out;
}

// Parses `coeff@vertex,...`; repeated vertices accumulate.
inline SparseVector parse_sparse(std::string_view text, const Presentation& p) {
  SparseVector out;
  std::istringstream is{std::string(text)};
  std::string item;
  while (std::getline(is, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    if (item == "0") continue;
    auto at = item.find('@');
    if (at == std::string::npos) throw Error("vector entry '" + item + "' is not of the form coeff@vertex");
    BigInt c;
    try {
      c = BigInt(item.substr(0, at));
    } catch (const std::exception&) {
      throw Error("invalid coefficient in '" + item + "'");
    }
    add_to(out, p.parse_vertex(item.substr(at + 1)), c);
  }
  return out;
}

}  // namespace cox
