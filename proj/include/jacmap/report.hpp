#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "jacmap/jelonek.hpp"
#include "jacmap/mapfile.hpp"
#include "jacmap/parse.hpp"
#include "jacmap/rabier.hpp"
#include "jacmap/solver.hpp"

namespace jacmap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "jacmap-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Check { Jacobian, Degree, Sf, Rabier, Cylinder, Clearance };

inline const char* check_name(Check c) {
  switch (c) {
    case Check::Jacobian: return "jacobian";
    case Check::Degree: return "degree";
    case Check::Sf: return "sf";
    case Check::Rabier: return "rabier";
    case Check::Cylinder: return "cylinder";
    default: return "clearance";
  }
}

inline std::vector<Check> parse_checks(const std::string& csv) {
  std::vector<Check> out;
  std::stringstream in(csv);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    bool found = false;
    for (Check c : {Check::Jacobian, Check::Degree, Check::Sf, Check::Rabier, Check::Cylinder, Check::Clearance})
      if (item == check_name(c)) {
        out.push_back(c);
        found = true;
      }
    if (!found) throw UsageError("unknown check '" + item + "'");
  }
  if (out.empty()) throw UsageError("no checks requested");
  return out;
}

struct AnalysisConfig {
  std::string map_source;
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  double nu_tol = 1e-3;
  double t_max = 1e4;
  int samples = 50;
  std::optional<std::size_t> drop;
  std::optional<std::string> path;
  std::optional<std::string> hyperplane;
  bool assert_biregular = false;
  ClearanceMode clearance_mode = ClearanceMode::Symbolic;
  bool timing = false;
};

inline void validate(const AnalysisConfig& cfg, const PolyMap& f) {
  if (cfg.checks.empty()) throw UsageError("no checks requested");
  auto wants = [&](Check c) { return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end(); };
  if (wants(Check::Rabier) && !cfg.path) throw UsageError("the rabier check needs --path");
  if (wants(Check::Clearance) && !cfg.hyperplane) throw UsageError("the clearance check needs --hyperplane");
  if (cfg.drop && (*cfg.drop < 1 || *cfg.drop > f.target_dim())) throw UsageError("--drop index out of range");
  if (cfg.drop && f.target_dim() < 2) throw UsageError("--drop needs at least two components");
  if (!(cfg.tol > 0.0) || !(cfg.nu_tol > 0.0)) throw UsageError("tolerances must be positive");
  if (!(cfg.t_max >= 10.0)) throw UsageError("--t-max must be at least 10");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
}

inline Json to_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const Certificate& c) {
  return Json{{"kind", c.kind},           {"criterion", c.criterion}, {"verified", c.verified},
              {"asserted", c.asserted},   {"evidence", c.evidence},   {"digest", c.digest()}};
}

inline Json map_json(const PolyMap& f) {
  Json comps = Json::array();
  for (const Polynomial& p : f.components()) comps.push_back(format(p));
  return Json{{"vars", f.vars().names()}, {"components", comps}};
}

inline Json witness_json(const RabierWitness& w, const WitnessOptions& opt) {
  Json j;
  j["map"] = map_json(w.map);
  j["path"] = format(w.path);
  j["accepted"] = w.accepted;
  j["rejection"] = w.accepted ? Json(nullptr) : Json(w.rejection);
  j["divergent_coordinates"] = w.divergent;
  if (w.image.finite) {
    Json lim = Json::array();
    for (const Scalar& s : w.image.limit) lim.push_back(s.str());
    j["limit"] = lim;
    Json rates = Json::array();
    for (const auto& r : w.image.rates) rates.push_back(r ? Json(*r) : Json(nullptr));
    j["convergence_exponents"] = rates;
  } else if (!w.divergent.empty()) {
    j["diverging_component"] = w.image.diverging_component;
  }
  Json samples = Json::array();
  for (const NuSample& s : w.nu_samples) {
    Json e{{"t", s.t}};
    e["nu"] = s.overflow ? Json(nullptr) : Json(s.nu);
    if (s.overflow) e["overflow"] = true;
    samples.push_back(e);
  }
  j["nu_samples"] = samples;
  j["decay_exponent"] = w.decay_exponent ? Json(*w.decay_exponent) : Json(nullptr);
  j["rabier_condition_claimed"] = rabier_condition_claimed({w});
  j["tolerance"] = {{"nu_tol", opt.tol}, {"t_max", opt.t_max}, {"decrease_slack", opt.decrease_slack}};
  return j;
}

namespace detail {

class Analysis {
 public:
  Analysis(const PolyMap& f, const AnalysisConfig& cfg) : f_(f), cfg_(cfg) {
    solve_.tol = cfg.tol;
  }

  Json run() {
    Json report;
    report["schema"] = kReportSchema;
    report["tool"] = {{"name", "jacmap"}, {"version", kToolVersion}};
    report["config"] = config_json();
    report["map"] = map_json(f_);
    Json results = Json::object();
    Json timing = Json::object();
    for (Check c : cfg_.checks) {
      auto start = std::chrono::steady_clock::now();
      Json r;
      try {
        r = dispatch(c);
      } catch (const Error& e) {
        r = Json{{"error", e.what()}};
      }
      results[check_name(c)] = r;
      timing[check_name(c)] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    report["results"] = results;
    report["certificates"] = certificates_;
    report["warnings"] = warnings_;
    if (cfg_.timing) report["timing_ms"] = timing;
    return report;
  }

  const std::optional<SfResult>& sf_result() const { return sf_; }

 private:
  Json config_json() const {
    Json checks = Json::array();
    for (Check c : cfg_.checks) checks.push_back(check_name(c));
    Json j{{"map", cfg_.map_source}, {"checks", checks}, {"seed", cfg_.seed}};
    j["tolerances"] = {{"solver_residual", solve_.tol},
                       {"dedup_radius", solve_.dedup_radius},
                       {"nu_tol", cfg_.nu_tol},
                       {"t_max", cfg_.t_max}};
    j["samples"] = cfg_.samples;
    j["drop"] = cfg_.drop ? Json(*cfg_.drop) : Json(nullptr);
    j["path"] = cfg_.path ? Json(*cfg_.path) : Json(nullptr);
    j["hyperplane"] = cfg_.hyperplane ? Json(*cfg_.hyperplane) : Json(nullptr);
    j["assert_biregular"] = cfg_.assert_biregular;
    j["clearance_mode"] = cfg_.clearance_mode == ClearanceMode::Symbolic ? "symbolic" : "sampling";
    return j;
  }

  Json dispatch(Check c) {
    switch (c) {
      case Check::Jacobian: return jacobian();
      case Check::Degree: return degree();
      case Check::Sf: return sf();
      case Check::Rabier: return rabier();
      case Check::Cylinder: return cylinder();
      default: return clearance();
    }
  }

  void warn(const std::string& w) {
    for (const auto& existing : warnings_)
      if (existing == w) return;
    warnings_.push_back(w);
  }

  bool nonsingular() {
    if (!nonsingular_) nonsingular_ = is_nonsingular(f_).nonsingular;
    return *nonsingular_;
  }

  Json jacobian() {
    NonsingularVerdict v = is_nonsingular(f_);
    nonsingular_ = v.nonsingular;
    return Json{{"determinant", format(v.determinant)},
                {"nonsingular", v.nonsingular},
                {"constant", v.constant ? Json(v.constant->str()) : Json(nullptr)}};
  }

  Json degree() {
    DegreeEstimate d = geometric_degree(f_, cfg_.samples, cfg_.seed, solve_);
    if (!nonsingular())
      warn("map is singular: fiber counts are generic-count diagnostics, not a nonproperness test");
    Json hist = Json::object();
    for (const auto& [count, freq] : d.histogram) hist[std::to_string(count)] = freq;
    return Json{{"mu", d.mu},
                {"histogram", hist},
                {"samples", d.samples},
                {"degenerate", d.degenerate},
                {"seed", d.seed},
                {"bezout_bound", bezout_bound(f_)},
                {"tolerance", {{"solver_residual", solve_.tol}, {"dedup_radius", solve_.dedup_radius}}}};
  }

  const SfResult& sf_cached() {
    if (!sf_) {
      SfOptions opt;
      opt.seed = cfg_.seed;
      opt.solve = solve_;
      sf_ = sf_symbolic(f_, opt);
    }
    return *sf_;
  }

  Json sf() {
    const SfResult& r = sf_cached();
    Json j;
    j["status"] = r.sf.is_empty() ? "empty" : r.sf.is_proper() ? "hypersurface" : "unknown";
    j["polynomial"] = r.sf.is_proper() ? Json(format(r.sf.polynomial)) : Json(nullptr);
    j["reason"] = r.sf.is_unknown() ? Json(r.sf.reason) : Json(nullptr);
    j["target_vars"] = r.target_vars.names();
    j["nonsingular"] = r.nonsingular;
    j["mu"] = r.mu;
    Json elim = Json::array();
    for (std::size_t i = 0; i < r.eliminants.size(); ++i)
      elim.push_back({{"variable", f_.vars()[i]},
                      {"relation", format(r.eliminants[i])},
                      {"leading_coefficient", format(r.leading_coefficients[i])}});
    j["eliminants"] = elim;
    Json cands = Json::array();
    for (const CandidateFactor& c : r.candidates)
      cands.push_back({{"factor", format(c.factor)}, {"kept", c.validated}, {"method", c.method}, {"detail", c.detail}});
    j["candidates"] = cands;
    j["tolerance"] = {{"solver_residual", solve_.tol}, {"probe_radii", {1e-2, 1e-3, 1e-4}}, {"probe_growth", 10.0}};
    if (!r.nonsingular && !r.candidates.empty())
      warn("map is singular: candidate factors were validated by the nonproperness probe, not by fiber counts");
    if (auto c = properness_certificate(f_, r)) certificates_.push_back(to_json(*c));
    return j;
  }

  Json rabier() {
    PolyMap g = cfg_.drop ? drop_component(f_, *cfg_.drop) : f_;
    LaurentPath path = parse_path(*cfg_.path);
    WitnessOptions opt;
    opt.tol = cfg_.nu_tol;
    opt.t_max = cfg_.t_max;
    RabierWitness w = check_witness(g, path, opt);
    if (auto c = witness_certificate(w)) certificates_.push_back(to_json(*c));
    return witness_json(w, opt);
  }

  Json cylinder() {
    const SfResult& r = sf_cached();
    Json axes = Json::array();
    for (std::size_t k = 1; k <= f_.target_dim(); ++k)
      axes.push_back({{"k", k}, {"cylinder", cylinder_check(r.sf, k)}});
    return Json{{"sf", describe(r.sf)}, {"axes", axes}};
  }

  Json clearance() {
    const SfResult& r = sf_cached();
    Polynomial h = parse_poly(*cfg_.hyperplane, r.target_vars);
    ClearanceOptions opt;
    opt.mode = cfg_.clearance_mode;
    opt.assert_biregular = cfg_.assert_biregular;
    opt.seed = cfg_.seed;
    opt.solve = solve_;
    ClearanceVerdict v = hyperplane_clearance(f_, r.sf, h, opt);
    for (const std::string& w : v.warnings) warn(w);
    if (v.certificate) certificates_.push_back(to_json(*v.certificate));
    return Json{{"hyperplane", format(h)},
                {"mode", opt.mode == ClearanceMode::Symbolic ? "symbolic" : "sampling"},
                {"intersects", to_string(v.intersects)},
                {"graph_type", v.graph_type},
                {"certificate", v.certificate.has_value()},
                {"evidence", v.evidence}};
  }

  const PolyMap& f_;
  const AnalysisConfig& cfg_;
  SolveOptions solve_;
  std::optional<bool> nonsingular_;
  std::optional<SfResult> sf_;
  Json certificates_ = Json::array();
  Json warnings_ = Json::array();
};

}  // namespace detail

inline Json run(const AnalysisConfig& cfg, const PolyMap& f) {
  validate(cfg, f);
  return detail::Analysis(f, cfg).run();
}

// Indented key: value rendering of a report.
inline std::string render_text(const Json& j, int indent = 0) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string out;
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (e.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !flat(v) && !v.empty())
        out += pad + k + ":\n" + render_text(v, indent + 2);
      else if (flat(v)) {
        std::string items;
        for (const auto& e : v) items += (items.empty() ? "" : ", ") + scalar(e);
        out += pad + k + ": [" + items + "]\n";
      } else
        out += pad + k + ": " + (v.is_object() ? std::string("{}") : scalar(v)) + "\n";
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured())
        out += pad + "-\n" + render_text(v, indent + 2);
      else
        out += pad + "- " + scalar(v) + "\n";
    }
  } else {
    out += pad + scalar(j) + "\n";
  }
  return out;
}

// ---- built-in corpus ---------------------------------------------------

struct CorpusEntry {
  std::string id;
  std::string description;
  std::string map_text;
};

inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"example-3-6",
       "degree-10 triangular automorphism of C^3 built from h = z - 3x^5y + 2x^7y^2",
       "vars: x y z\n"
       "f1 = x + y*(z - 3*x^5*y + 2*x^7*y^2)\n"
       "f2 = y\n"
       "f3 = z - 3*x^5*y + 2*x^7*y^2\n"},
      {"x-xy", "(x, xy): singular, nonproper over the line y1 = 0",
       "vars: x y\n"
       "f1 = x\n"
       "f2 = x*y\n"},
      {"x2-y", "(x^2, y): proper double cover, singular along x = 0",
       "vars: x y\n"
       "f1 = x^2\n"
       "f2 = y\n"},
  };
  return entries;
}

inline const CorpusEntry& corpus_entry(const std::string& id) {
  for (const CorpusEntry& e : corpus())
    if (e.id == id) return e;
  throw UsageError("unknown corpus id '" + id + "'");
}

namespace detail {

class Expectations {
 public:
  void expect(const std::string& name, const Json& expected, const Json& actual) {
    add(name, expected, actual, expected == actual);
  }
  void add(const std::string& name, const Json& expected, const Json& actual, bool pass) {
    list_.push_back({{"name", name}, {"expected", expected}, {"actual", actual}, {"pass", pass}});
    if (!pass) mismatches_.push_back(name);
  }
  Json list() const { return list_; }
  Json mismatches() const { return mismatches_; }
  bool ok() const { return mismatches_.empty(); }

 private:
  Json list_ = Json::array();
  Json mismatches_ = Json::array();
};

inline Json at(const Json& j, const std::string& check, const std::string& field) {
  const Json& r = j.at("results").at(check);
  return r.contains(field) ? r.at(field) : Json(nullptr);
}

inline bool has_certificate(const Json& report, const std::string& criterion) {
  for (const auto& c : report.at("certificates"))
    if (c.at("criterion") == criterion) return true;
  return false;
}

inline Json example_3_6(const PolyMap& f, std::uint64_t seed, Expectations& ex, Json& body) {
  AnalysisConfig cfg;
  cfg.map_source = "corpus:example-3-6";
  cfg.checks = {Check::Jacobian, Check::Degree, Check::Sf, Check::Clearance};
  cfg.seed = seed;
  cfg.hyperplane = "y1";
  Json report = run(cfg, f);
  ex.expect("jacobian.determinant", "1", at(report, "jacobian", "determinant"));
  ex.expect("jacobian.nonsingular", true, at(report, "jacobian", "nonsingular"));
  ex.expect("degree.mu", 1, at(report, "degree", "mu"));
  ex.expect("degree.histogram", Json{{"1", 50}}, at(report, "degree", "histogram"));
  ex.expect("sf.status", "empty", at(report, "sf", "status"));
  ex.expect("certificate.nonsingular-and-proper", true, has_certificate(report, criteria::kNonsingularProper));
  ex.expect("clearance.y1.intersects", "no", at(report, "clearance", "intersects"));
  ex.expect("certificate.hypersurface-clearance", true, has_certificate(report, criteria::kHypersurfaceClearance));

  Vars w{"p", "q", "r"};
  PolyMap inverse(w, {parse_poly("p - q*r", w), parse_poly("q", w),
                      parse_poly("r + 3*q*(p - q*r)^5 - 2*q^2*(p - q*r)^7", w)});
  ex.expect("inverse.verified", true, verify_inverse(f, inverse));
  double worst = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    std::vector<Scalar> y = degree_sample_target(seed, 1000 + k, 3);
    std::vector<Complex> yc;
    for (const Scalar& s : y) yc.push_back(s.to_complex());
    auto sols = solve_fiber_exact(f, y);
    if (sols.size() != 1) {
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    std::vector<Complex> expected = inverse.evaluate(yc);
    double scale = 1.0;
    for (const Complex& c : expected) scale = std::max(scale, std::abs(c));
    worst = std::max(worst, detail::distance(sols[0].point, expected) / scale);
  }
  ex.add("inverse.fiber_agreement", "< 1e-08 relative", worst, worst < 1e-8);

  WitnessOptions wopt;
  struct Case {
    std::string name;
    PolyMap g;
    std::string path;
    bool accept;
  };
  std::vector<Case> cases = {
      {"F3hat-lambda", drop_component(f, 3), "t, t^-2, 0", true},
      {"F2hat-gamma", drop_component(f, 2), "t^-1, t^2, t^-3", true},
      {"F1hat-delta", drop_component(f, 1), "t, t^-2, t^3", true},
      {"f1f3-delta", select_components(f, {1, 3}), "t, t^-2, t^3", false},
  };
  Json witnesses = Json::object();
  for (const Case& c : cases) {
    RabierWitness wit = check_witness(c.g, parse_path(c.path), wopt);
    witnesses[c.name] = witness_json(wit, wopt);
    if (auto cert = witness_certificate(wit)) report["certificates"].push_back(to_json(*cert));
    ex.expect("witness." + c.name + ".accepted", c.accept, wit.accepted);
    if (c.accept) {
      ex.expect("witness." + c.name + ".limit", Json{"0", "0"}, witnesses[c.name].value("limit", Json(nullptr)));
      double last = wit.nu_samples.empty() ? 1.0 : wit.nu_samples.back().nu;
      ex.add("witness." + c.name + ".final_nu", "< 0.001", last, last < wopt.tol);
      ex.expect("witness." + c.name + ".rabier_condition_claimed", false, rabier_condition_claimed({wit}));
    } else {
      ex.expect("witness." + c.name + ".rejection", "image diverges", wit.rejection);
    }
    if (c.name == "F3hat-lambda") {
      double err = 0.0;
      for (const NuSample& s : wit.nu_samples) err = std::max(err, std::abs(s.nu * s.t * s.t - 1.0));
      ex.add("witness.F3hat-lambda.nu_equals_t^-2", "<= 1e-09 relative", err, err <= 1e-9);
    }
  }
  body["witnesses"] = witnesses;
  return report;
}

inline Json x_xy(const PolyMap& f, std::uint64_t seed, Expectations& ex, Json& body) {
  AnalysisConfig cfg;
  cfg.map_source = "corpus:x-xy";
  cfg.checks = {Check::Jacobian, Check::Degree, Check::Sf, Check::Cylinder, Check::Clearance};
  cfg.seed = seed;
  cfg.hyperplane = "y1 - 1";
  Json report = run(cfg, f);
  ex.expect("jacobian.determinant", "x", at(report, "jacobian", "determinant"));
  ex.expect("degree.mu", 1, at(report, "degree", "mu"));
  ex.expect("sf.status", "hypersurface", at(report, "sf", "status"));
  ex.expect("sf.polynomial", "y1", at(report, "sf", "polynomial"));
  ex.expect("cylinder.k2", true, report["results"]["cylinder"]["axes"][1]["cylinder"]);
  ex.expect("clearance.y1-1.intersects", "no", at(report, "clearance", "intersects"));
  ex.expect("clearance.y1-1.certificate", false, at(report, "clearance", "certificate"));
  std::vector<Scalar> y{Scalar(0), Scalar(1)};
  std::size_t count = fiber_count_exact(f, y);
  body["fiber_count_at_0_1"] = count;
  ex.expect("fiber_count(0,1)", 0, count);
  return report;
}

inline Json x2_y(const PolyMap& f, std::uint64_t seed, Expectations& ex, Json& body) {
  AnalysisConfig cfg;
  cfg.map_source = "corpus:x2-y";
  cfg.checks = {Check::Jacobian, Check::Degree, Check::Sf};
  cfg.seed = seed;
  Json report = run(cfg, f);
  ex.expect("jacobian.nonsingular", false, at(report, "jacobian", "nonsingular"));
  ex.expect("degree.mu", 2, at(report, "degree", "mu"));
  ex.expect("sf.status", "empty", at(report, "sf", "status"));
  std::vector<Scalar> y{Scalar(4), Scalar(5)};
  std::size_t count = fiber_count_exact(f, y);
  body["fiber_count_at_4_5"] = count;
  ex.expect("fiber_count(4,5)", 2, count);
  return report;
}

}  // namespace detail

// Runs the fixed suite for a corpus map and compares against the stored
// expectations; every deviating field is listed under "mismatches".
inline Json corpus_run(const std::string& id, std::uint64_t seed = 0) {
  if (id == "all") {
    Json out{{"schema", kReportSchema}, {"tool", {{"name", "jacmap"}, {"version", kToolVersion}}},
             {"corpus", "all"}, {"seed", seed}};
    Json runs = Json::array();
    bool ok = true;
    for (const CorpusEntry& e : corpus()) {
      runs.push_back(corpus_run(e.id, seed));
      ok = ok && runs.back()["status"] == "pass";
    }
    out["runs"] = runs;
    out["status"] = ok ? "pass" : "fail";
    return out;
  }
  const CorpusEntry& entry = corpus_entry(id);
  PolyMap f = parse_map(entry.map_text);
  detail::Expectations ex;
  Json extra = Json::object();
  Json report;
  if (id == "example-3-6")
    report = detail::example_3_6(f, seed, ex, extra);
  else if (id == "x-xy")
    report = detail::x_xy(f, seed, ex, extra);
  else
    report = detail::x2_y(f, seed, ex, extra);
  Json out;
  out["schema"] = kReportSchema;
  out["tool"] = report["tool"];
  out["corpus"] = id;
  out["description"] = entry.description;
  out["seed"] = seed;
  out["map"] = report["map"];
  out["results"] = report["results"];
  for (const auto& [k, v] : extra.items()) out["results"][k] = v;
  out["certificates"] = report["certificates"];
  out["warnings"] = report["warnings"];
  out["expectations"] = ex.list();
  out["mismatches"] = ex.mismatches();
  out["status"] = ex.ok() ? "pass" : "fail";
  return out;
}

}  // namespace jacmap
