#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cox/arith.hpp"
#include "cox/errors.hpp"

namespace cox {

struct Vertex {
  std::int64_t id = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

enum class Kind { Quiver, Poset };
enum class Direction { In, Out };
enum class Family { Finite, AInfinity, ZAInfinity, DInfinity, Garland, GarlandSeq };

struct Neighbor {
  Vertex vertex;
  int multiplicity = 1;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Ordered, duplicate-free list of vertices. Display order is the numeric order of vertex ids.
class IndexWindow {
 public:
  IndexWindow() = default;
  explicit IndexWindow(std::vector<Vertex> vs) : vertices_(std::move(vs)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }
  const Vertex& operator[](std::size_t i) const { return vertices_[i]; }
  bool contains(Vertex v) const { return std::binary_search(vertices_.begin(), vertices_.end(), v); }
  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;

 private:
  std::vector<Vertex> vertices_;
};

// Upper bound on the number of vertices visited by a single path or order-ideal enumeration.
inline std::size_t node_budget() {
  if (const char* env = std::getenv("COX_NODE_BUDGET")) {
    std::size_t value = 0;
    std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0) return value;
  }
  return 1'000'000;
}

// Memo tables shared by all copies of a presentation. Pure caches: entries never change once written.
struct PresentationCache {
  std::mutex mutex;
  std::map<std::pair<std::int64_t, std::int64_t>, BigInt> path_counts;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> ext_tables;
  std::map<std::int64_t, std::vector<std::map<Vertex, int>>> bass_tables;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

class Backend {
 public:
  virtual ~Backend() = default;
  virtual Kind kind() const = 0;
  virtual Family family() const = 0;
  virtual std::string name() const = 0;
  virtual bool contains(Vertex v) const = 0;
  virtual std::vector<Neighbor> out(Vertex v) const = 0;
  virtual std::vector<Neighbor> in(Vertex v) const = 0;
  // Strictly increases along every arrow / cover.
  virtual std::int64_t rank(Vertex v) const = 0;
  // Path a -> b exists (quiver) or a <= b (poset).
  virtual bool leq(Vertex a, Vertex b) const = 0;
  virtual bool is_finite() const { return false; }
  virtual std::vector<Vertex> vertices() const { return {}; }
  virtual bool down_sets_finite() const = 0;
  virtual bool up_sets_finite() const = 0;
  // Posets whose down-sets are infinite override these with a certified finite candidate set.
  virtual std::optional<std::vector<Vertex>> ext_candidates_below(Vertex) const { return std::nullopt; }
  virtual std::optional<std::vector<Vertex>> ext_candidates_above(Vertex) const { return std::nullopt; }
  virtual std::string label(Vertex v) const { return std::to_string(v.id); }
  virtual std::optional<Vertex> find(std::string_view token) const {
    auto id = parse_int(token);
    if (!id || !contains(Vertex{*id})) return std::nullopt;
    return Vertex{*id};
  }
  virtual std::optional<std::string> family_directive() const { return std::nullopt; }
};

class AInfinityBackend final : public Backend {
 public:
  Kind kind() const override { return Kind::Quiver; }
  Family family() const override { return Family::AInfinity; }
  std::string name() const override { return "a-infinity"; }
  bool contains(Vertex v) const override { return v.id >= 0; }
  std::vector<Neighbor> out(Vertex v) const override { return {{Vertex{v.id + 1}, 1}}; }
  std::vector<Neighbor> in(Vertex v) const override {
    if (v.id == 0) return {};
    return {{Vertex{v.id - 1}, 1}};
  }
  std::int64_t rank(Vertex v) const override { return v.id; }
  bool leq(Vertex a, Vertex b) const override { return a.id <= b.id; }
  bool down_sets_finite() const override { return true; }
  bool up_sets_finite() const override { return false; }
  std::optional<std::string> family_directive() const override { return "a-infinity"; }
};

class ZAInfinityBackend final : public Backend {
 public:
  Kind kind() const override { return Kind::Quiver; }
  Family family() const override { return Family::ZAInfinity; }
  std::string name() const override { return "z-a-infinity"; }
  bool contains(Vertex) const override { return true; }
  std::vector<Neighbor> out(Vertex v) const override { return {{Vertex{v.id + 1}, 1}}; }
  std::vector<Neighbor> in(Vertex v) const override { return {{Vertex{v.id - 1}, 1}}; }
  std::int64_t rank(Vertex v) const override { return v.id; }
  bool leq(Vertex a, Vertex b) const override { return a.id <= b.id; }
  bool down_sets_finite() const override { return false; }
  bool up_sets_finite() const override { return false; }
  std::optional<std::string> family_directive() const override { return "z-a-infinity"; }
};

// Vertices -1, 0, 1, 2, ...; arrows 1 -> -1, 1 -> 0, 1 -> 2 and s -> s+1 for s >= 2.
class DInfinityBackend final : public Backend {
 public:
  Kind kind() const override { return Kind::Quiver; }
  Family family() const override { return Family::DInfinity; }
  std::string name() const override { return "d-infinity"; }
  bool contains(Vertex v) const override { return v.id >= -1; }
  std::vector<Neighbor> out(Vertex v) const override {
    if (v.id == 1) return {{Vertex{-1}, 1}, {Vertex{0}, 1}, {Vertex{2}, 1}};
    if (v.id >= 2) return {{Vertex{v.id + 1}, 1}};
    return {};
  }
  std::vector<Neighbor> in(Vertex v) const override {
    if (v.id == -1 || v.id == 0 || v.id == 2) return {{Vertex{1}, 1}};
    if (v.id >= 3) return {{Vertex{v.id - 1}, 1}};
    return {};
  }
  std::int64_t rank(Vertex v) const override {
    if (v.id == 1) return 0;
    if (v.id < 1) return 1;
    return v.id - 1;
  }
  bool leq(Vertex a, Vertex b) const override { return a == b || a.id == 1 || (a.id >= 2 && b.id >= a.id); }
  bool down_sets_finite() const override { return true; }
  bool up_sets_finite() const override { return false; }
  std::optional<std::string> family_directive() const override { return "d-infinity"; }
};

// Infinite chain of garland blocks of constant length m, glued at bullets.
// Bullet k has id k*(2m+1); the block above bullet k has columns c = 1..m with ids k*(2m+1)+2c-1, +2c.
class GarlandBackend final : public Backend {
 public:
  explicit GarlandBackend(int m) : m_(m), period_(2 * static_cast<std::int64_t>(m) + 1) {}
  Kind kind() const override { return Kind::Poset; }
  Family family() const override { return Family::Garland; }
  std::string name() const override { return "garland " + std::to_string(m_); }
  bool contains(Vertex) const override { return true; }
  std::vector<Neighbor> out(Vertex v) const override {
    auto [q, c] = decode(v);
    const std::int64_t base = q * period_;
    if (c == 0) return {{Vertex{base + 1}, 1}, {Vertex{base + 2}, 1}};
    if (c < m_) return {{Vertex{base + 2 * c + 1}, 1}, {Vertex{base + 2 * c + 2}, 1}};
    return {{Vertex{base + period_}, 1}};
  }
  std::vector<Neighbor> in(Vertex v) const override {
    auto [q, c] = decode(v);
    const std::int64_t base = q * period_;
    if (c == 0) return {{Vertex{base - 2}, 1}, {Vertex{base - 1}, 1}};
    if (c == 1) return {{Vertex{base}, 1}};
    return {{Vertex{base + 2 * (c - 1) - 1}, 1}, {Vertex{base + 2 * (c - 1)}, 1}};
  }
  std::int64_t rank(Vertex v) const override {
    auto [q, c] = decode(v);
    return q * (m_ + 1) + c;
  }
  bool leq(Vertex a, Vertex b) const override { return a == b || rank(a) < rank(b); }
  bool down_sets_finite() const override { return false; }
  bool up_sets_finite() const override { return false; }
  // Ext(S(z), S(j)) vanishes once a bullet lies strictly between z and j.
  std::optional<std::vector<Vertex>> ext_candidates_below(Vertex j) const override {
    auto [q, c] = decode(j);
    const std::int64_t floor_bullet = (c == 0 ? q - 1 : q) * period_;
    std::vector<Vertex> out;
    for (std::int64_t z = floor_bullet; z <= j.id; ++z)
      if (leq(Vertex{z}, j)) out.push_back(Vertex{z});
    return out;
  }
  std::optional<std::vector<Vertex>> ext_candidates_above(Vertex p) const override {
    auto [q, c] = decode(p);
    (void)c;
    const std::int64_t ceil_bullet = (q + 1) * period_;
    std::vector<Vertex> out;
    for (std::int64_t z = p.id; z <= ceil_bullet; ++z)
      if (leq(p, Vertex{z})) out.push_back(Vertex{z});
    return out;
  }
  std::optional<std::string> family_directive() const override { return "garland " + std::to_string(m_); }

 private:
  // (block index q, column c) with c = 0 for the bullet q.
  std::pair<std::int64_t, std::int64_t> decode(Vertex v) const {
    const std::int64_t q = floor_div(v.id, period_);
    const std::int64_t r = v.id - q * period_;
    return {q, r == 0 ? 0 : (r - 1) / 2 + 1};
  }

  int m_;
  std::int64_t period_;
};

struct FiniteData {
  Kind kind = Kind::Quiver;
  Family family = Family::Finite;
  std::optional<std::string> directive;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::int64_t> index;
  std::vector<std::vector<Neighbor>> out, in;
  std::vector<std::vector<char>> reach;
  std::vector<std::int64_t> rank;
};

class FiniteBackend final : public Backend {
 public:
  explicit FiniteBackend(FiniteData d) : d_(std::move(d)) {}
  Kind kind() const override { return d_.kind; }
  Family family() const override { return d_.family; }
  std::string name() const override {
    if (d_.directive) return *d_.directive;
    return d_.kind == Kind::Quiver ? "finite quiver" : "finite poset";
  }
  bool contains(Vertex v) const override { return v.id >= 0 && v.id < static_cast<std::int64_t>(d_.labels.size()); }
  std::vector<Neighbor> out(Vertex v) const override { return d_.out[v.id]; }
  std::vector<Neighbor> in(Vertex v) const override { return d_.in[v.id]; }
  std::int64_t rank(Vertex v) const override { return d_.rank[v.id]; }
  bool leq(Vertex a, Vertex b) const override { return d_.reach[a.id][b.id] != 0; }
  bool is_finite() const override { return true; }
  std::vector<Vertex> vertices() const override {
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < d_.labels.size(); ++i) vs.push_back(Vertex{static_cast<std::int64_t>(i)});
    return vs;
  }
  bool down_sets_finite() const override { return true; }
  bool up_sets_finite() const override { return true; }
  std::string label(Vertex v) const override { return d_.labels[v.id]; }
  std::optional<Vertex> find(std::string_view token) const override {
    auto it = d_.index.find(std::string(token));
    if (it == d_.index.end()) return std::nullopt;
    return Vertex{it->second};
  }
  std::optional<std::string> family_directive() const override { return d_.directive; }

 private:
  FiniteData d_;
};

class OppositeBackend final : public Backend {
 public:
  explicit OppositeBackend(std::shared_ptr<const Backend> base) : base_(std::move(base)) {}
  const std::shared_ptr<const Backend>& base() const { return base_; }
  Kind kind() const override { return base_->kind(); }
  Family family() const override { return base_->family(); }
  std::string name() const override { return base_->name() + " (opposite)"; }
  bool contains(Vertex v) const override { return base_->contains(v); }
  std::vector<Neighbor> out(Vertex v) const override { return base_->in(v); }
  std::vector<Neighbor> in(Vertex v) const override { return base_->out(v); }
  std::int64_t rank(Vertex v) const override { return -base_->rank(v); }
  bool leq(Vertex a, Vertex b) const override { return base_->leq(b, a); }
  bool is_finite() const override { return base_->is_finite(); }
  std::vector<Vertex> vertices() const override { return base_->vertices(); }
  bool down_sets_finite() const override { return base_->up_sets_finite(); }
  bool up_sets_finite() const override { return base_->down_sets_finite(); }
  std::optional<std::vector<Vertex>> ext_candidates_below(Vertex j) const override {
    return base_->ext_candidates_above(j);
  }
  std::optional<std::vector<Vertex>> ext_candidates_above(Vertex p) const override {
    return base_->ext_candidates_below(p);
  }
  std::string label(Vertex v) const override { return base_->label(v); }
  std::optional<Vertex> find(std::string_view token) const override { return base_->find(token); }

 private:
  std::shared_ptr<const Backend> base_;
};

// A poset viewed as its Hasse quiver.
class HasseBackend final : public Backend {
 public:
  explicit HasseBackend(std::shared_ptr<const Backend> base) : base_(std::move(base)) {}
  Kind kind() const override { return Kind::Quiver; }
  Family family() const override { return base_->family(); }
  std::string name() const override { return "hasse quiver of " + base_->name(); }
  bool contains(Vertex v) const override { return base_->contains(v); }
  std::vector<Neighbor> out(Vertex v) const override { return base_->out(v); }
  std::vector<Neighbor> in(Vertex v) const override { return base_->in(v); }
  std::int64_t rank(Vertex v) const override { return base_->rank(v); }
  bool leq(Vertex a, Vertex b) const override { return base_->leq(a, b); }
  bool is_finite() const override { return base_->is_finite(); }
  std::vector<Vertex> vertices() const override { return base_->vertices(); }
  bool down_sets_finite() const override { return base_->down_sets_finite(); }
  bool up_sets_finite() const override { return base_->up_sets_finite(); }
  std::string label(Vertex v) const override { return base_->label(v); }
  std::optional<Vertex> find(std::string_view token) const override { return base_->find(token); }

 private:
  std::shared_ptr<const Backend> base_;
};

}  // namespace detail

class Presentation {
 public:
  explicit Presentation(std::shared_ptr<const detail::Backend> backend)
      : backend_(std::move(backend)),
        cache_(std::make_shared<PresentationCache>()),
        op_cache_(std::make_shared<PresentationCache>()) {}

  Kind kind() const { return backend_->kind(); }
  Family family() const { return backend_->family(); }
  std::string name() const { return backend_->name(); }
  bool is_finite() const { return backend_->is_finite(); }
  bool contains(Vertex v) const { return backend_->contains(v); }

  void require(Vertex v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex " + std::to_string(v.id) + " in " + name());
  }

  std::vector<Neighbor> neighbors(Vertex v, Direction d) const {
    require(v);
    return d == Direction::In ? backend_->in(v) : backend_->out(v);
  }

  std::int64_t rank(Vertex v) const { return backend_->rank(v); }
  bool leq(Vertex a, Vertex b) const { return backend_->leq(a, b); }
  std::vector<Vertex> vertices() const { return backend_->vertices(); }
  bool down_sets_finite() const { return backend_->down_sets_finite(); }
  bool up_sets_finite() const { return backend_->up_sets_finite(); }

  // All vertices reachable from v along arrows in direction d (v included), in display order.
  std::vector<Vertex> closure(Vertex v, Direction d) const {
    require(v);
    if (d == Direction::In ? !down_sets_finite() : !up_sets_finite())
      throw IntervalFinitenessViolated("the " + std::string(d == Direction::In ? "down" : "up") + "-set of " +
                                       label(v) + " is infinite in " + name());
    std::set<Vertex> seen{v};
    std::deque<Vertex> queue{v};
    const std::size_t budget = node_budget();
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      for (const auto& n : neighbors(x, d))
        if (seen.insert(n.vertex).second) {
          if (seen.size() > budget) throw IntervalFinitenessViolated("node budget exceeded while enumerating");
          queue.push_back(n.vertex);
        }
    }
    return {seen.begin(), seen.end()};
  }

  // {z : lo <= z <= hi}, in display order; empty when lo is not below hi.
  std::vector<Vertex> interval(Vertex lo, Vertex hi) const {
    require(lo);
    require(hi);
    if (!leq(lo, hi)) return {};
    std::set<Vertex> seen{lo};
    std::deque<Vertex> queue{lo};
    const std::size_t budget = node_budget();
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      for (const auto& n : backend_->out(x))
        if (leq(n.vertex, hi) && seen.insert(n.vertex).second) {
          if (seen.size() > budget) throw IntervalFinitenessViolated("node budget exceeded in interval enumeration");
          queue.push_back(n.vertex);
        }
    }
    return {seen.begin(), seen.end()};
  }

  // Finite set containing every z with Ext(S(z), S(j)) possibly nonzero (posets).
  std::optional<std::vector<Vertex>> ext_candidates_below(Vertex j) const {
    require(j);
    if (auto c = backend_->ext_candidates_below(j)) return c;
    if (down_sets_finite()) return closure(j, Direction::In);
    return std::nullopt;
  }
  std::optional<std::vector<Vertex>> ext_candidates_above(Vertex p) const {
    require(p);
    if (auto c = backend_->ext_candidates_above(p)) return c;
    if (up_sets_finite()) return closure(p, Direction::Out);
    return std::nullopt;
  }

  std::string label(Vertex v) const { return backend_->label(v); }

  Vertex parse_vertex(std::string_view token) const {
    if (auto v = backend_->find(token)) return *v;
    throw UnknownVertex("unknown vertex '" + std::string(token) + "' in " + name());
  }

  std::optional<std::string> family_directive() const { return backend_->family_directive(); }

  Presentation opposite() const {
    std::shared_ptr<const detail::Backend> b;
    if (auto o = std::dynamic_pointer_cast<const detail::OppositeBackend>(backend_))
      b = o->base();
    else
      b = std::make_shared<detail::OppositeBackend>(backend_);
    return Presentation(std::move(b), op_cache_, cache_);
  }

  PresentationCache& cache() const { return *cache_; }
  const std::shared_ptr<const detail::Backend>& backend() const { return backend_; }

 private:
  Presentation(std::shared_ptr<const detail::Backend> b, std::shared_ptr<PresentationCache> c,
               std::shared_ptr<PresentationCache> oc)
      : backend_(std::move(b)), cache_(std::move(c)), op_cache_(std::move(oc)) {}

  std::shared_ptr<const detail::Backend> backend_;
  std::shared_ptr<PresentationCache> cache_;
  std::shared_ptr<PresentationCache> op_cache_;
};

inline std::vector<Neighbor> neighbors(const Presentation& p, Vertex v, Direction d) { return p.neighbors(v, d); }

// ---- constructors ----

inline Presentation a_infinity() { return Presentation(std::make_shared<detail::AInfinityBackend>()); }
inline Presentation z_a_infinity() { return Presentation(std::make_shared<detail::ZAInfinityBackend>()); }
inline Presentation d_infinity() { return Presentation(std::make_shared<detail::DInfinityBackend>()); }

inline Presentation garland(int m) {
  if (m < 1) throw Error("garland length must be at least 1");
  return Presentation(std::make_shared<detail::GarlandBackend>(m));
}

// Vertex id of bullet k in the constant garland of block length m.
inline Vertex garland_bullet(int m, std::int64_t k) { return Vertex{k * (2 * static_cast<std::int64_t>(m) + 1)}; }

namespace detail {

inline std::vector<std::int64_t> topological_ranks(std::size_t n, const std::vector<std::vector<Neighbor>>& out,
                                                  bool& acyclic) {
  std::vector<int> indeg(n, 0);
  for (const auto& list : out)
    for (const auto& nb : list) ++indeg[nb.vertex.id];
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  std::vector<std::int64_t> rank(n, 0);
  std::size_t done = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    ++done;
    for (const auto& nb : out[v]) {
      rank[nb.vertex.id] = std::max(rank[nb.vertex.id], rank[v] + 1);
      if (--indeg[nb.vertex.id] == 0) queue.push_back(nb.vertex.id);
    }
  }
  acyclic = (done == n);
  return rank;
}

inline std::vector<std::vector<char>> reachability(std::size_t n, const std::vector<std::vector<Neighbor>>& out,
                                                   const std::vector<std::int64_t>& rank) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rank[a] > rank[b]; });
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (auto v : order) {
    reach[v][v] = 1;
    for (const auto& nb : out[v])
      for (std::size_t w = 0; w < n; ++w)
        if (reach[nb.vertex.id][w]) reach[v][w] = 1;
  }
  return reach;
}

}  // namespace detail

// Finite quiver; `arrows` may repeat a pair to encode multiplicity.
inline Presentation finite_quiver(const std::vector<std::string>& labels,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& arrows) {
  detail::FiniteData d;
  d.kind = Kind::Quiver;
  d.labels = labels;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!d.index.emplace(labels[i], static_cast<std::int64_t>(i)).second) throw Error("duplicate vertex " + labels[i]);
  std::map<std::pair<std::int64_t, std::int64_t>, int> mult;
  for (auto [s, t] : arrows) {
    if (s < 0 || t < 0 || s >= static_cast<std::int64_t>(n) || t >= static_cast<std::int64_t>(n))
      throw UnknownVertex("arrow endpoint out of range");
    if (s == t) throw CycleDetected("cycle detected: loop at " + labels[s]);
    ++mult[{s, t}];
  }
  d.out.assign(n, {});
  d.in.assign(n, {});
  for (const auto& [st, m] : mult) {
    d.out[st.first].push_back({Vertex{st.second}, m});
    d.in[st.second].push_back({Vertex{st.first}, m});
  }
  bool acyclic = true;
  d.rank = detail::topological_ranks(n, d.out, acyclic);
  if (!acyclic) throw CycleDetected("cycle detected: the quiver is not acyclic");
  d.reach = detail::reachability(n, d.out, d.rank);
  return Presentation(std::make_shared<detail::FiniteBackend>(std::move(d)));
}

// Finite poset generated by the relations lo < hi; redundant relations are reduced to covers.
inline Presentation finite_poset(const std::vector<std::string>& labels,
                                 const std::vector<std::pair<std::int64_t, std::int64_t>>& relations,
                                 Family family = Family::Finite, std::optional<std::string> directive = std::nullopt) {
  detail::FiniteData d;
  d.kind = Kind::Poset;
  d.family = family;
  d.directive = std::move(directive);
  d.labels = labels;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!d.index.emplace(labels[i], static_cast<std::int64_t>(i)).second) throw Error("duplicate vertex " + labels[i]);
  std::vector<std::vector<Neighbor>> graph(n);
  std::set<std::pair<std::int64_t, std::int64_t>> rel;
  for (auto [lo, hi] : relations) {
    if (lo < 0 || hi < 0 || lo >= static_cast<std::int64_t>(n) || hi >= static_cast<std::int64_t>(n))
      throw UnknownVertex("cover endpoint out of range");
    if (lo == hi) throw NotAPoset("cover " + labels[lo] + " " + labels[hi] + " violates strictness");
    if (rel.insert({lo, hi}).second) graph[lo].push_back({Vertex{hi}, 1});
  }
  bool acyclic = true;
  auto rank0 = detail::topological_ranks(n, graph, acyclic);
  if (!acyclic) throw NotAPoset("cover relations contain a cycle, so they do not define a strict order");
  auto reach = detail::reachability(n, graph, rank0);
  d.out.assign(n, {});
  d.in.assign(n, {});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !reach[a][b]) continue;
      bool cover = true;
      for (std::size_t c = 0; c < n && cover; ++c)
        if (c != a && c != b && reach[a][c] && reach[c][b]) cover = false;
      if (cover) {
        d.out[a].push_back({Vertex{static_cast<std::int64_t>(b)}, 1});
        d.in[b].push_back({Vertex{static_cast<std::int64_t>(a)}, 1});
      }
    }
  d.rank = detail::topological_ranks(n, d.out, acyclic);
  d.reach = std::move(reach);
  return Presentation(std::make_shared<detail::FiniteBackend>(std::move(d)));
}

// Finite poset made of consecutive garland blocks of the given lengths, bullets 0..k.
inline Presentation garland_sequence(const std::vector<int>& lengths) {
  if (lengths.empty()) throw Error("garland-seq needs at least one block");
  std::vector<std::pair<std::int64_t, std::int64_t>> rel;
  std::int64_t next = 1;
  std::int64_t bullet = 0;
  for (int m : lengths) {
    if (m < 1) throw Error("garland length must be at least 1");
    std::vector<std::int64_t> prev{bullet};
    for (int c = 1; c <= m; ++c) {
      std::vector<std::int64_t> col{next, next + 1};
      next += 2;
      for (auto lo : prev)
        for (auto hi : col) rel.push_back({lo, hi});
      prev = col;
    }
    const std::int64_t sink = next++;
    for (auto lo : prev) rel.push_back({lo, sink});
    bullet = sink;
  }
  std::vector<std::string> labels;
  for (std::int64_t i = 0; i < next; ++i) labels.push_back(std::to_string(i));
  std::string directive = "garland-seq ";
  for (std::size_t i = 0; i < lengths.size(); ++i) directive += (i ? "," : "") + std::to_string(lengths[i]);
  return finite_poset(labels, rel, Family::GarlandSeq, directive);
}

// Vertex id of bullet k (0 = bottom) in garland_sequence(lengths).
inline Vertex garland_sequence_bullet(const std::vector<int>& lengths, std::size_t k) {
  std::int64_t id = 0;
  for (std::size_t i = 0; i < k && i < lengths.size(); ++i) id += 2 * lengths[i] + 1;
  return Vertex{id};
}

inline Presentation hasse_quiver(const Presentation& p) {
  if (p.kind() != Kind::Poset) throw Error("hasse_quiver expects a poset presentation");
  return Presentation(std::make_shared<detail::HasseBackend>(p.backend()));
}

// ---- text format ----

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::vector<int> parse_lengths(const std::string& s, std::size_t line) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    auto v = parse_int(item);
    if (!v || *v < 1 || *v > 1000) throw ParseError(line, "invalid garland length '" + item + "'");
    out.push_back(static_cast<int>(*v));
  }
  if (out.empty()) throw ParseError(line, "garland-seq needs at least one length");
  return out;
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  std::optional<Kind> kind;
  std::size_t kind_line = 0;
  std::optional<std::pair<std::string, std::size_t>> family;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::int64_t> index;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  bool saw_arrow = false, saw_cover = false;
  auto id_of = [&](const std::string& label) {
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    const auto id = static_cast<std::int64_t>(labels.size());
    labels.push_back(label);
    index.emplace(label, id);
    return id;
  };

  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    const std::string& dir = tok[0];
    auto expect = [&](std::size_t n) {
      if (tok.size() != n + 1)
        throw ParseError(line_no, "'" + dir + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (dir == "kind") {
      expect(1);
      if (tok[1] == "quiver")
        kind = Kind::Quiver;
      else if (tok[1] == "poset")
        kind = Kind::Poset;
      else
        throw ParseError(line_no, "unknown kind '" + tok[1] + "'");
      kind_line = line_no;
    } else if (dir == "vertex") {
      expect(1);
      id_of(tok[1]);
    } else if (dir == "arrow") {
      expect(2);
      saw_arrow = true;
      if (kind == Kind::Poset) throw ParseError(line_no, "'arrow' in a poset presentation");
      auto s = id_of(tok[1]);
      auto t = id_of(tok[2]);
      edges.push_back({s, t});
    } else if (dir == "cover") {
      expect(2);
      saw_cover = true;
      if (kind == Kind::Quiver) throw ParseError(line_no, "'cover' in a quiver presentation");
      auto s = id_of(tok[1]);
      auto t = id_of(tok[2]);
      edges.push_back({s, t});
    } else if (dir == "family") {
      if (tok.size() < 2) throw ParseError(line_no, "'family' expects a name");
      std::string rest = tok[1];
      for (std::size_t i = 2; i < tok.size(); ++i) rest += " " + tok[i];
      family = {rest, line_no};
    } else {
      throw ParseError(line_no, "unknown directive '" + dir + "'");
    }
  }

  if (family) {
    auto tok = detail::split_ws(family->first);
    const std::size_t ln = family->second;
    const std::string& name = tok[0];
    auto check_kind = [&](Kind k) {
      if (kind && *kind != k) throw ParseError(kind_line, "kind conflicts with family '" + name + "'");
    };
    if (name == "a-infinity" || name == "z-a-infinity" || name == "d-infinity") {
      if (tok.size() != 1) throw ParseError(ln, "family '" + name + "' takes no parameters");
      check_kind(Kind::Quiver);
      if (name == "a-infinity") return a_infinity();
      if (name == "z-a-infinity") return z_a_infinity();
      return d_infinity();
    }
    if (name == "garland" || name == "garland-seq") {
      if (tok.size() != 2) throw ParseError(ln, "family '" + name + "' expects one parameter");
      check_kind(Kind::Poset);
      auto lengths = detail::parse_lengths(tok[1], ln);
      if (name == "garland") {
        if (lengths.size() != 1) throw ParseError(ln, "garland takes a single length");
        return garland(lengths[0]);
      }
      return garland_sequence(lengths);
    }
    throw ParseError(ln, "unknown family '" + name + "'");
  }

  const Kind k = kind.value_or(saw_cover && !saw_arrow ? Kind::Poset : Kind::Quiver);
  if (k == Kind::Quiver) return finite_quiver(labels, edges);
  return finite_poset(labels, edges);
}

// Accepts the file syntax ("garland 2") and a shell-friendly colon form ("garland:2").
inline Presentation parse_family(std::string_view spec) {
  std::string s(spec);
  if (auto colon = s.find(':'); colon != std::string::npos) s[colon] = ' ';
  return parse_presentation("family " + s);
}

inline std::string emit_presentation(const Presentation& p) {
  if (auto d = p.family_directive()) return "family " + *d + "\n";
  if (!p.is_finite()) throw Error("cannot emit " + p.name());
  std::string out = p.kind() == Kind::Quiver ? "kind quiver\n" : "kind poset\n";
  const auto vs = p.vertices();
  for (auto v : vs) out += "vertex " + p.label(v) + "\n";
  const char* word = p.kind() == Kind::Quiver ? "arrow " : "cover ";
  for (auto v : vs)
    for (const auto& nb : p.neighbors(v, Direction::Out))
      for (int i = 0; i < nb.multiplicity; ++i) out += word + p.label(v) + " " + p.label(nb.vertex) + "\n";
  return out;
}

// ---- windows ----

inline IndexWindow window(const Presentation& p, std::string_view spec) {
  std::vector<Vertex> vs;
  const std::string s(spec);
  if (auto dots = s.find(".."); dots != std::string::npos) {
    Vertex lo = p.parse_vertex(s.substr(0, dots));
    Vertex hi = p.parse_vertex(s.substr(dots + 2));
    for (std::int64_t id = lo.id; id <= hi.id; ++id)
      if (p.contains(Vertex{id})) vs.push_back(Vertex{id});
  } else {
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ','))
      if (!item.empty()) vs.push_back(p.parse_vertex(item));
  }
  if (vs.empty()) throw EmptyWindow("window '" + s + "' is empty");
  return IndexWindow(std::move(vs));
}

inline IndexWindow window(const Presentation& p, const std::vector<Vertex>& vs) {
  for (auto v : vs) p.require(v);
  if (vs.empty()) throw EmptyWindow("empty window");
  return IndexWindow(vs);
}

struct LocalBoundednessReport {
  bool left_bounded = true;
  bool right_bounded = true;
  std::vector<std::string> witnesses;
};

inline LocalBoundednessReport check_local_boundedness(const Presentation& p, const IndexWindow& w) {
  LocalBoundednessReport r;
  if (p.family() != Family::Finite && p.family() != Family::GarlandSeq) {
    r.witnesses.push_back("certified: " + p.name() + " has finitely many arrows at every vertex");
    return r;
  }
  for (auto v : w) {
    std::size_t in = 0, out = 0;
    for (const auto& nb : p.neighbors(v, Direction::In)) in += nb.multiplicity;
    for (const auto& nb : p.neighbors(v, Direction::Out)) out += nb.multiplicity;
    r.witnesses.push_back(p.label(v) + ": in=" + std::to_string(in) + " out=" + std::to_string(out));
  }
  return r;
}

}  // namespace cox
