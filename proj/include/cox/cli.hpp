#pragma once

// Command-line front end. Every subcommand is a pure function of its flags; output order follows
// the presentation's display order so repeated runs are byte-identical.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cox/artranslate.hpp"
#include "cox/cartan.hpp"
#include "cox/coxeter.hpp"
#include "cox/errors.hpp"
#include "cox/knitting.hpp"
#include "cox/lazy_matrix.hpp"
#include "cox/presentation.hpp"
#include "cox/resolutions.hpp"

namespace cox::cli {

enum Exit { kOk = 0, kVerificationFailed = 1, kInputError = 2 };

namespace detail {

struct Options {
  std::string family, file, window_spec, vector, direction = "forward", side = "left", format = "tsv";
  std::string vertex, src, tgt, interval, support, suite, eval, seed = "injective";
  int max_degree = kDefaultCap, steps = 6, margin = kDefaultMargin, degree = -1;
  bool generators = false;
};

inline Presentation load(const Options& o) {
  if (!o.family.empty() && !o.file.empty()) throw Error("give either --family or --file, not both");
  if (!o.family.empty()) return parse_family(o.family);
  if (o.file.empty()) throw Error("a presentation is required: --family <name> or --file <path>");
  std::ifstream in(o.file);
  if (!in) throw Error("cannot read " + o.file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

inline IndexWindow require_window(const Presentation& p, const std::string& spec, const char* flag = "--window") {
  if (spec.empty()) throw Error(std::string(flag) + " is required");
  return window(p, spec);
}

inline void emit_matrix(std::ostream& out, const MatrixWindow& w, const Presentation& p, const std::string& format) {
  if (format == "tsv") {
    out << to_tsv(w, p);
    return;
  }
  if (format != "json-lines") throw Error("matrix output supports --format tsv or json-lines");
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    nlohmann::ordered_json j;
    j["row"] = p.label(w.rows[r]);
    std::vector<std::string> cols, vals;
    for (std::size_t c = 0; c < w.cols.size(); ++c) {
      cols.push_back(p.label(w.cols[c]));
      vals.push_back(w.data[r][c].str());
    }
    j["cols"] = cols;
    j["values"] = vals;
    out << j.dump() << '\n';
  }
}

inline void emit_vector(std::ostream& out, const SparseVector& x, const Presentation& p, const std::string& format,
                        const std::string& key = "dim") {
  if (format == "json-lines")
    out << nlohmann::ordered_json{{key, format_sparse(x, p)}}.dump() << '\n';
  else
    out << format_sparse(x, p) << '\n';
}

inline CoxeterDirection coxeter_direction(const std::string& s) {
  if (s == "forward") return CoxeterDirection::Forward;
  if (s == "inverse") return CoxeterDirection::Inverse;
  throw Error("--direction must be forward or inverse");
}

inline Side side_of(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw Error("--side must be left or right");
}

inline std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  auto a = cox::detail::parse_int(s.substr(0, comma));
  auto b = comma == std::string::npos ? std::nullopt : cox::detail::parse_int(s.substr(comma + 1));
  if (!a || !b) throw Error("--interval expects n,m");
  return {*a, *b};
}

inline Comodule module_from_flags(const Presentation& p, const Options& o) {
  if (!o.interval.empty() && !o.support.empty()) throw Error("give either --interval or --support");
  if (!o.interval.empty()) {
    auto [n, m] = parse_pair(o.interval);
    return interval_module(p, n, m);
  }
  if (!o.support.empty()) return thin_module(p, window(p, o.support).vertices());
  if (!o.vertex.empty()) return injective_comodule(p, p.parse_vertex(o.vertex));
  throw Error("a module is required: --interval n,m, --support <window> or --vertex <v> (injective E(v))");
}

inline std::string join_dims(const std::vector<Comodule>& ms, const Presentation& p) {
  std::string s;
  for (const auto& m : ms) s += (s.empty() ? "" : " + ") + ("[" + format_sparse(dim_vector(m), p) + "]");
  return s.empty() ? "0" : s;
}

// ---- verify suites: each returns an empty string on success, otherwise a counterexample ----

inline std::string suite_inverse(const Presentation& p, const IndexWindow& w, std::ostream& out) {
  const CartanPair cp(p);
  for (auto [a, b, name] : {std::tuple{&cp.inverse, &cp.cartan, "inv·c"}, std::tuple{&cp.cartan, &cp.inverse, "c·inv"}}) {
    const auto r = verify_identity_on_window(*a, *b, w, Side::Left);
    if (!r.holds)
      return std::string(name) + " at (" + p.label(r.where->first) + ", " + p.label(r.where->second) +
             ") = " + r.value.str();
  }
  for (auto a : w) {
    if (auto row = dim_injective(p, a, Side::Left).to_sparse()) {
      const auto e = apply_vector(LazyVector::from_sparse(*row), cp.inverse).to_sparse();
      if (e && *e != unit_vector(a)) return "dim E(" + p.label(a) + ")·inv = " + format_sparse(*e, p);
    }
    if (auto col = dim_injective(p, a, Side::Right).to_sparse()) {
      const auto e = apply_vector(LazyVector::from_sparse(*col), transpose(cp.inverse)).to_sparse();
      if (e && *e != unit_vector(a)) return "dim Ê(" + p.label(a) + ")·inv^tr = " + format_sparse(*e, p);
    }
  }
  out << "OK: left and right inverse identities hold on window\n";
  return {};
}

inline std::string suite_coxeter(const Presentation& p, const IndexWindow& w, int margin, std::ostream& out) {
  const CoxeterOperator op(p, std::max(margin, default_margin(p)));
  for (auto a : w) {
    const auto g = verify_generator_identities(op, a, w);
    if (!g.holds) return g.detail;
    const auto fwd = apply_coxeter(op, unit_vector(a), CoxeterDirection::Forward);
    const auto y = fwd.to_sparse() ? *fwd.to_sparse()
                                   : cox::detail::certify_support(p, fwd, {a}, op.margin());
    const auto back = apply_coxeter(op, y, CoxeterDirection::Inverse);
    const auto z = back.to_sparse() ? *back.to_sparse() : cox::detail::certify_support(p, back, {a}, op.margin());
    if (z != unit_vector(a)) return "Φ⁻Φ(e_" + p.label(a) + ") = " + format_sparse(z, p);
  }
  out << "OK: generator identities and Coxeter round trip hold on window\n";
  return {};
}

inline std::string suite_tau(const Presentation& p, const IndexWindow& w, int margin, std::ostream& out) {
  require_quiver(p);
  int checked = 0;
  if (p.family() == Family::AInfinity || p.family() == Family::ZAInfinity) {
    for (auto lo : w)
      for (auto hi : w) {
        if (hi < lo) continue;
        const auto n = interval_module(p, lo.id, hi.id);
        if (p.family() == Family::AInfinity && lo.id == 0) continue;  // 0..m is injective, τ⁻ vanishes
        const auto r = verify_tau_formula(n, margin);
        if (!r.holds)
          return "dim τ I(" + std::to_string(lo.id) + "," + std::to_string(hi.id) + ") = " + format_sparse(r.lhs, p) +
                 " but Φ gives " + format_sparse(r.rhs, p);
        const auto back = tau(tau(n, TauDirection::TauMinus, margin), TauDirection::Tau, margin);
        if (!isomorphic(back, n)) return "τ τ⁻ I(" + std::to_string(lo.id) + "," + std::to_string(hi.id) + ") ≇ I";
        ++checked;
      }
  } else {
    const auto f = knit_component(p, injective_section(p, w, true), static_cast<int>(w.size()), true);
    if (f.tau_links.empty()) throw KnittingStuck("no mesh of the injective section closes inside the window");
    if (auto bad = check_knitting_coxeter(p, f)) return *bad;
    checked = static_cast<int>(f.tau_links.size());
  }
  out << "OK: dim τN = Φ(dim N) for " << checked << " module(s)\n";
  return {};
}

inline std::string suite_euler(const Presentation& p, const IndexWindow& w, int cap, std::ostream& out) {
  const auto r = check_sharp_euler(p, w, cap);
  if (!r.all()) return r.failures.empty() ? "sharp Euler check failed" : r.failures.front();
  out << "OK: resolutions finite on both sides and Ext dimensions symmetric on window\n";
  return {};
}

inline std::string suite_mobius(const Presentation& p, const IndexWindow& w, int cap, std::ostream& out) {
  if (p.kind() != Kind::Poset) throw Error("the mobius suite needs a poset presentation");
  const LazyIntMatrix inv = cartan_inverse(p);
  for (auto lo : w)
    for (auto hi : w) {
      if (!p.leq(lo, hi)) continue;
      const BigInt mu = mobius(p, lo, hi);
      BigInt euler = 0, complex = 0;
      for (int m = 0; m <= cap; ++m) {
        euler += (m % 2 ? -1 : 1) * ext_dim(p, lo, hi, m);
        complex += (m % 2 ? -1 : 1) * order_complex_ext(p, lo, hi, m);
      }
      const BigInt entry = inv.entry(hi, lo);
      if (entry != mu || euler != mu || complex != mu)
        return "(" + p.label(lo) + ", " + p.label(hi) + "): inverse entry " + entry.str() + ", μ " + mu.str() +
               ", Ext Euler characteristic " + euler.str() + ", order complex " + complex.str();
    }
  out << "OK: inverse entries, Möbius function and Ext Euler characteristics agree on window\n";
  return {};
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Cartan, Coxeter and Auslander-Reiten computations for path and incidence coalgebras", "cox"};
  app.require_subcommand(1, 1);

  auto add_presentation = [&](CLI::App* s) {
    s->add_option("--family", o.family, "a-infinity | z-a-infinity | d-infinity | garland:<m> | garland-seq:<m1,m2,...>");
    s->add_option("--file", o.file, "presentation file");
  };
  auto add_window = [&](CLI::App* s, bool required) {
    auto opt = s->add_option("--window", o.window_spec, "a..b or a,b,c");
    if (required) opt->required();
  };
  auto add_format = [&](CLI::App* s, std::vector<std::string> allowed) {
    s->add_option("--format", o.format)->check(CLI::IsMember(allowed));
  };
  auto add_module = [&](CLI::App* s) {
    s->add_option("--interval", o.interval, "interval module n,m");
    s->add_option("--support", o.support, "thin module on a convex window");
    s->add_option("--vertex", o.vertex, "injective E(v)");
    s->add_option("--margin", o.margin, "window margin for copresentations")->check(CLI::NonNegativeNumber);
  };

  std::map<std::string, CLI::App*> sub;
  for (const char* name : {"cartan", "inverse", "coxeter"}) {
    auto* s = sub[name] = app.add_subcommand(name, std::string("evaluate ") + name + " matrix on a window");
    add_presentation(s);
    add_window(s, true);
    add_format(s, {"tsv", "json-lines"});
    if (std::string(name) == "coxeter") s->add_option("--direction", o.direction, "forward | inverse");
  }
  {
    auto* s = sub["apply"] = app.add_subcommand("apply", "apply Φ or Φ⁻ to a vector");
    add_presentation(s);
    s->add_option("--vector", o.vector, "coeff@vertex,...")->required();
    s->add_option("--direction", o.direction, "forward | inverse");
    s->add_option("--eval", o.eval, "print the result restricted to this window");
    s->add_flag("--generators", o.generators, "read --vector as coefficients of dim Ê(a) (forward) or dim E(a)");
    s->add_option("--margin", o.margin);
    add_format(s, {"tsv", "json-lines"});
  }
  {
    auto* s = sub["resolve"] = app.add_subcommand("resolve", "minimal injective resolution of a simple");
    add_presentation(s);
    s->add_option("--vertex", o.vertex)->required();
    s->add_option("--side", o.side, "left | right");
    s->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
    add_format(s, {"tsv", "json-lines"});
  }
  {
    auto* s = sub["ext"] = app.add_subcommand("ext", "dim Ext^m(S(src), S(tgt))");
    add_presentation(s);
    s->add_option("--src", o.src)->required();
    s->add_option("--tgt", o.tgt)->required();
    s->add_option("--degree", o.degree, "single degree m; all nonzero degrees if omitted");
    s->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
  }
  {
    auto* s = sub["tau"] = app.add_subcommand("tau", "Auslander-Reiten translate of a module");
    add_presentation(s);
    add_module(s);
    s->add_option("--direction", o.direction, "tau | tau-minus")->check(CLI::IsMember({"tau", "tau-minus", "forward", "inverse"}));
    add_format(s, {"tsv", "json-lines"});
  }
  {
    auto* s = sub["mesh"] = app.add_subcommand("mesh", "almost split sequence at an interval module");
    add_presentation(s);
    add_module(s);
    s->add_option("--direction", o.direction, "ending | starting")->check(CLI::IsMember({"ending", "starting", "forward", "inverse"}));
    add_format(s, {"tsv", "json-lines"});
  }
  {
    auto* s = sub["knit"] = app.add_subcommand("knit", "knit an Auslander-Reiten component fragment");
    add_presentation(s);
    add_window(s, true);
    s->add_option("--steps", o.steps)->check(CLI::NonNegativeNumber);
    s->add_option("--seed", o.seed, "injective | interval:<n>");
    add_format(s, {"tsv", "dot", "json-lines"});
  }
  {
    auto* s = sub["verify"] = app.add_subcommand("verify", "run a verification suite on a window");
    add_presentation(s);
    add_window(s, true);
    s->add_option("--suite", o.suite)->required()->check(CLI::IsMember({"inverse", "coxeter", "tau", "euler", "mobius"}));
    s->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
    s->add_option("--margin", o.margin)->check(CLI::NonNegativeNumber);
  }
  {
    auto* s = sub["classify"] = app.add_subcommand("classify", "finiteness and local boundedness report");
    add_presentation(s);
    add_window(s, true);
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    const Presentation p = detail::load(o);
    if (sub["cartan"]->parsed() || sub["inverse"]->parsed() || sub["coxeter"]->parsed()) {
      const auto w = detail::require_window(p, o.window_spec);
      LazyIntMatrix m = sub["cartan"]->parsed()    ? cartan_matrix(p)
                        : sub["inverse"]->parsed() ? cartan_inverse(p)
                                                   : coxeter_matrix(CoxeterOperator(p), detail::coxeter_direction(o.direction));
      detail::emit_matrix(out, evaluate_window(m, w), p, o.format);
      return kOk;
    }
    if (sub["apply"]->parsed()) {
      const CoxeterOperator op(p, std::max(o.margin, default_margin(p)));
      const auto d = detail::coxeter_direction(o.direction);
      const SparseVector x = parse_sparse(o.vector, p);
      const LazyVector y = o.generators ? apply_coxeter(op, GeneratorCombination{x}, d) : apply_coxeter(op, x, d);
      SparseVector shown;
      if (!o.eval.empty())
        shown = y.restrict(window(p, o.eval));
      else if (auto s = y.to_sparse())
        shown = *s;
      else
        throw WindowInsufficient("the result is not certified finitely supported; pass --eval <window>");
      detail::emit_vector(out, shown, p, o.format, "value");
      return kOk;
    }
    if (sub["resolve"]->parsed()) {
      const auto r = minimal_injective_resolution(p, p.parse_vertex(o.vertex), detail::side_of(o.side), o.max_degree);
      for (int m = 0; m < static_cast<int>(r.terms.size()); ++m) {
        SparseVector t;
        for (const auto& [v, c] : r.terms[m]) t[v] = c;
        if (o.format == "json-lines")
          out << nlohmann::ordered_json{{"degree", m}, {"terms", format_sparse(t, p)}}.dump() << '\n';
        else
          out << m << '\t' << format_sparse(t, p) << '\n';
      }
      return kOk;
    }
    if (sub["ext"]->parsed()) {
      const Vertex a = p.parse_vertex(o.src), b = p.parse_vertex(o.tgt);
      if (o.degree >= 0) {
        out << ext_dim(p, a, b, o.degree) << '\n';
      } else {
        for (int m = 0; m <= o.max_degree; ++m)
          if (int e = ext_dim(p, a, b, m)) out << m << '\t' << e << '\n';
      }
      return kOk;
    }
    if (sub["tau"]->parsed()) {
      const auto n = detail::module_from_flags(p, o);
      const bool minus = o.direction == "tau-minus" || o.direction == "inverse";
      const auto t = tau(n, minus ? TauDirection::TauMinus : TauDirection::Tau, o.margin);
      detail::emit_vector(out, dim_vector(t), p, o.format);
      return kOk;
    }
    if (sub["mesh"]->parsed()) {
      const auto n = detail::module_from_flags(p, o);
      const bool starting = o.direction == "starting" || o.direction == "inverse";
      const auto s = almost_split_mesh(n, starting ? MeshDirection::StartingFrom : MeshDirection::EndingAt, o.margin);
      if (!mesh_additive(s)) {
        err << "mesh is not additive\n";
        return kVerificationFailed;
      }
      if (o.format == "json-lines") {
        std::vector<std::string> mid;
        for (const auto& m : s.middle) mid.push_back(format_sparse(dim_vector(m), p));
        out << nlohmann::ordered_json{{"left", format_sparse(dim_vector(s.left), p)},
                                      {"middle", mid},
                                      {"right", format_sparse(dim_vector(s.right), p)}}
                   .dump()
            << '\n';
      } else {
        out << "0 -> [" << format_sparse(dim_vector(s.left), p) << "] -> " << detail::join_dims(s.middle, p)
            << " -> [" << format_sparse(dim_vector(s.right), p) << "] -> 0\n";
      }
      return kOk;
    }
    if (sub["knit"]->parsed()) {
      const auto w = detail::require_window(p, o.window_spec);
      KnitSeed seed;
      if (o.seed == "injective") {
        seed = injective_section(p, w);
      } else if (o.seed.rfind("interval:", 0) == 0) {
        auto n = cox::detail::parse_int(o.seed.substr(9));
        if (!n) throw Error("--seed interval:<n> needs an integer");
        seed = interval_slice(p, *n, w);
      } else {
        throw Error("--seed must be injective or interval:<n>");
      }
      const auto f = knit_component(p, seed, o.steps);
      out << (o.format == "dot" ? to_dot(f, p) : o.format == "json-lines" ? to_json_lines(f, p) : to_text(f, p));
      return kOk;
    }
    if (sub["verify"]->parsed()) {
      const auto w = detail::require_window(p, o.window_spec);
      std::string failure;
      if (o.suite == "inverse") failure = detail::suite_inverse(p, w, out);
      if (o.suite == "coxeter") failure = detail::suite_coxeter(p, w, o.margin, out);
      if (o.suite == "tau") failure = detail::suite_tau(p, w, o.margin, out);
      if (o.suite == "euler") failure = detail::suite_euler(p, w, o.max_degree, out);
      if (o.suite == "mobius") failure = detail::suite_mobius(p, w, o.max_degree, out);
      if (!failure.empty()) {
        out << "FAIL: " << failure << '\n';
        return kVerificationFailed;
      }
      return kOk;
    }
    if (sub["classify"]->parsed()) {
      const auto w = detail::require_window(p, o.window_spec);
      const auto r = classify_finiteness(p, w);
      const auto lb = check_local_boundedness(p, w);
      out << "row_finite\t" << to_string(r.row_finite) << '\n'
          << "col_finite\t" << to_string(r.col_finite) << '\n'
          << "interpretation\t" << r.semiperfect_interpretation << '\n'
          << "left_locally_bounded\t" << (lb.left_bounded ? "yes" : "no") << '\n'
          << "right_locally_bounded\t" << (lb.right_bounded ? "yes" : "no") << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace cox::cli
