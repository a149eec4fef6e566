#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jacmap/certificate.hpp"
#include "jacmap/elimination.hpp"
#include "jacmap/gcd.hpp"
#include "jacmap/numlin.hpp"
#include "jacmap/polymap.hpp"
#include "jacmap/random.hpp"
#include "jacmap/solver.hpp"

namespace jacmap {

// Target-space names y1..yn, or w1..wn when the source already uses y-names.
inline Vars target_vars_for(const PolyMap& f) {
  for (const char* prefix : {"y", "w", "target"}) {
    std::vector<std::string> names;
    bool clash = false;
    for (std::size_t i = 0; i < f.target_dim(); ++i) {
      names.push_back(prefix + std::to_string(i + 1));
      if (f.vars().find(names.back())) clash = true;
    }
    if (!clash) return Vars(names);
  }
  throw DimensionError("cannot choose target variable names");
}

// S_f: empty, a hypersurface given by a squarefree monic polynomial in the
// target variables, or unknown.
struct Hypersurface {
  enum class Status { Empty, Proper, Unknown };

  Status status = Status::Unknown;
  Polynomial polynomial;  // meaningful for Proper
  std::string reason;     // meaningful for Unknown

  static Hypersurface empty() { return {Status::Empty, Polynomial(), ""}; }
  static Hypersurface proper(const Polynomial& p) {
    if (p.is_constant()) throw DomainError("a hypersurface needs a nonconstant defining polynomial");
    return {Status::Proper, monic(squarefree_part(p)), ""};
  }
  static Hypersurface unknown(std::string why) { return {Status::Unknown, Polynomial(), std::move(why)}; }

  bool is_empty() const { return status == Status::Empty; }
  bool is_proper() const { return status == Status::Proper; }
  bool is_unknown() const { return status == Status::Unknown; }
};

inline std::string describe(const Hypersurface& s) {
  switch (s.status) {
    case Hypersurface::Status::Empty: return "empty";
    case Hypersurface::Status::Proper: return "{" + format(s.polynomial) + " = 0}";
    default: return "unknown (" + s.reason + ")";
  }
}

struct SfOptions {
  std::uint64_t seed = 0;
  int degree_samples = 8;
  int validation_points = 2;
  SolveOptions solve;
};

struct CandidateFactor {
  Polynomial factor;
  bool validated = false;
  std::string method;  // "fiber-count" or "probe"
  std::string detail;
};

struct SfResult {
  Hypersurface sf;
  Vars target_vars;
  bool nonsingular = false;
  int mu = 0;
  std::vector<Polynomial> eliminants;  // phi_i(x_i, y), one per source variable
  std::vector<Polynomial> leading_coefficients;
  std::vector<CandidateFactor> candidates;
  std::vector<std::string> log;
};

enum class SfMembership { InSf, OffSf, Undetermined };

inline const char* to_string(SfMembership m) {
  switch (m) {
    case SfMembership::InSf: return "in-sf";
    case SfMembership::OffSf: return "off-sf";
    default: return "undetermined";
  }
}

struct SfDiagnostic {
  SfMembership verdict = SfMembership::Undetermined;
  std::optional<std::size_t> count;
  std::string warning;
};

// Fiber-count test y in S_f  <=>  #f^-1(y) != mu, valid for nonsingular f.
// With allow_singular the test still runs but the result carries a warning.
inline SfDiagnostic sf_sample_diagnostic(const PolyMap& f, const std::vector<Scalar>& y, int mu,
                                         const SolveOptions& opt = {}, bool allow_singular = false) {
  SfDiagnostic d;
  if (!is_nonsingular(f).nonsingular) {
    if (!allow_singular) throw DomainError("fiber-count diagnostic requires a nonsingular map");
    d.warning = "map is singular: a fiber-count drop is only a diagnostic, not nonproperness";
  }
  try {
    d.count = fiber_count_exact(f, y, opt);
    d.verdict = static_cast<int>(*d.count) != mu ? SfMembership::InSf : SfMembership::OffSf;
  } catch (const Error&) {
    d.verdict = SfMembership::Undetermined;
  }
  return d;
}

inline SfDiagnostic sf_sample_diagnostic(const PolyMap& f, std::span<const Complex> y, int mu,
                                         const SolveOptions& opt = {}, bool allow_singular = false) {
  std::vector<Scalar> exact;
  for (const Complex& z : y) exact.push_back(Scalar::from_double(z));
  return sf_sample_diagnostic(f, exact, mu, opt, allow_singular);
}

// Random point on {q = 0}: random values for all variables but one, then a
// root in the remaining variable.
inline std::optional<std::vector<Complex>> sample_on_hypersurface(const Polynomial& q, SplitMix64& rng) {
  auto occ = q.occurring_vars();
  if (occ.empty()) return std::nullopt;
  const std::size_t var = occ.front();
  detail::FloatPoly fq(q, true);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Complex> pt(q.nvars());
    for (std::size_t v = 0; v < q.nvars(); ++v)
      pt[v] = v == var ? Complex(0.0) : Complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    auto cs = fq.specialize(pt, var);
    int d = detail::effective_degree(cs);
    if (d < 1) continue;
    cs.resize(static_cast<std::size_t>(d) + 1);
    RootSet roots = univariate_roots(cs);
    pt[var] = roots[rng.below(roots.size())].value;
    return pt;
  }
  return std::nullopt;
}

struct ProbeResult {
  bool nonproper = false;
  std::vector<double> max_norms;  // largest preimage norm per radius
};

// Nonproperness probe at y: preimages of y + eps d for shrinking eps.  A
// preimage norm that grows by 10x or more while eps shrinks 100x signals an
// unbounded preimage of every small ball around y.
inline ProbeResult nonproperness_probe(const PolyMap& f, const std::vector<Complex>& y, SplitMix64& rng,
                                       const SolveOptions& opt = {}) {
  ProbeResult pr;
  std::vector<Complex> dir(y.size());
  double dn = 0.0;
  for (Complex& c : dir) {
    c = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    dn += std::norm(c);
  }
  dn = std::sqrt(dn);
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    std::vector<Complex> target(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) target[i] = y[i] + eps * dir[i] / dn;
    double m = 0.0;
    try {
      for (const FiberSolution& s : solve_fiber(f, target, opt)) {
        double nrm = 0.0;
        for (const Complex& c : s.point) nrm += std::norm(c);
        m = std::max(m, std::sqrt(nrm));
      }
    } catch (const Error&) {
      m = std::nan("");
    }
    pr.max_norms.push_back(m);
  }
  const double first = pr.max_norms.front(), last = pr.max_norms.back();
  pr.nonproper = std::isfinite(first) && std::isfinite(last) && last >= 10.0 * std::max(1.0, first);
  return pr;
}

// Nonproperness set by elimination.  For each source variable x_i the other
// source variables are eliminated from (f_j - y_j) to get phi_i(x_i, y); S_f is
// contained in the union of the zero sets of the leading coefficients of phi_i
// in x_i.  Each coprime factor of those is kept only if a point on it passes
// the fiber-count test (nonsingular f) or the nonproperness probe (otherwise).
inline SfResult sf_symbolic(const PolyMap& f, const SfOptions& opt = {}) {
  SfResult out;
  check_scale_contract(f, opt.solve);
  const std::size_t n = f.source_dim();
  out.target_vars = target_vars_for(f);
  out.nonsingular = is_nonsingular(f).nonsingular;

  try {
    out.mu = geometric_degree(f, opt.degree_samples, opt.seed, opt.solve).mu;
  } catch (const Error& e) {
    out.sf = Hypersurface::unknown(std::string("map is not dominant at desk scale: ") + e.what());
    return out;
  }

  std::vector<std::string> names = f.vars().names();
  for (const std::string& t : out.target_vars.names()) names.push_back(t);
  const Vars ext(names);
  std::vector<Polynomial> eqs;
  for (std::size_t j = 0; j < n; ++j)
    eqs.push_back(change_context(f[j], ext) - Polynomial::variable(ext, n + j));

  std::vector<Polynomial> graph_images;
  for (std::size_t v = 0; v < n; ++v) graph_images.push_back(Polynomial::variable(f.vars(), v));
  for (std::size_t j = 0; j < n; ++j) graph_images.push_back(f[j]);

  EliminationOptions eo;
  eo.mode = EliminationMode::GraphIdeal;
  eo.is_parameter.assign(2 * n, false);
  for (std::size_t j = 0; j < n; ++j) eo.is_parameter[n + j] = true;
  eo.in_ideal = [&](const Polynomial& q) { return compose(q, graph_images, f.vars()).is_zero(); };

  for (std::size_t i = 0; i < n; ++i) {
    eo.eliminable.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (v != i) eo.eliminable.push_back(v);
    EliminationResult er = eliminate(eqs, eo);
    if (er.degenerate || er.inconsistent) {
      out.sf = Hypersurface::unknown("elimination degenerated for " + f.vars()[i]);
      return out;
    }
    std::optional<Polynomial> phi;
    for (const Polynomial& p : er.remaining) {
      if (!p.involves(i)) {
        out.sf = Hypersurface::unknown("targets satisfy a relation " + format(p) + "; map is not dominant");
        return out;
      }
      if (!phi || p.degree_in(i) < phi->degree_in(i)) phi = p;
    }
    if (!phi) {
      out.sf = Hypersurface::unknown("no relation found for " + f.vars()[i]);
      return out;
    }
    Polynomial lc = change_context(leading_coefficient_in(*phi, i), out.target_vars);
    out.log.push_back("phi(" + f.vars()[i] + ") = " + format(*phi) + ", leading coefficient " + format(lc));
    out.eliminants.push_back(*phi);
    out.leading_coefficients.push_back(lc);
  }

  std::vector<Polynomial> nonconstant;
  for (const Polynomial& lc : out.leading_coefficients)
    if (!lc.is_constant()) nonconstant.push_back(lc);
  SplitMix64 rng = SplitMix64::stream(opt.seed, 0x5F);
  Polynomial product = Polynomial::constant(out.target_vars, Scalar(1));
  for (const Polynomial& factor : coprime_basis(nonconstant)) {
    CandidateFactor cand;
    cand.factor = factor;
    cand.method = out.nonsingular ? "fiber-count" : "probe";
    std::ostringstream detail;
    for (int trial = 0; trial < opt.validation_points && !cand.validated; ++trial) {
      auto pt = sample_on_hypersurface(factor, rng);
      if (!pt) continue;
      if (out.nonsingular) {
        SfDiagnostic d = sf_sample_diagnostic(f, std::span<const Complex>(*pt), out.mu, opt.solve);
        detail << (trial ? "; " : "") << "count "
               << (d.count ? std::to_string(*d.count) : std::string("?")) << " vs mu " << out.mu;
        cand.validated = d.verdict == SfMembership::InSf;
      } else {
        ProbeResult pr = nonproperness_probe(f, *pt, rng, opt.solve);
        detail << (trial ? "; " : "") << "preimage norms";
        for (double m : pr.max_norms) detail << " " << m;
        cand.validated = pr.nonproper;
      }
    }
    cand.detail = detail.str();
    out.log.push_back("candidate " + format(factor) + (cand.validated ? " kept" : " dropped") + " (" +
                      cand.method + ": " + cand.detail + ")");
    if (cand.validated) product = product * factor;
    out.candidates.push_back(std::move(cand));
  }
  out.sf = product.is_constant() ? Hypersurface::empty() : Hypersurface::proper(product);
  return out;
}

// Whether the defining polynomial is independent of y_k (1-based), i.e. S_f is
// a cylinder along the k-th target axis.
inline bool cylinder_check(const Hypersurface& s, std::size_t k) {
  if (s.is_unknown()) throw DomainError("cylinder check on an unknown hypersurface");
  if (s.is_empty()) return true;
  if (k < 1 || k > s.polynomial.nvars()) throw DimensionError("axis index out of range");
  return differentiate(s.polynomial, k - 1).is_zero();
}

enum class Intersects { Yes, No, Undetermined };

inline const char* to_string(Intersects v) {
  switch (v) {
    case Intersects::Yes: return "yes";
    case Intersects::No: return "no";
    default: return "undetermined";
  }
}

enum class ClearanceMode { Symbolic, Sampling };

struct ClearanceVerdict {
  Intersects intersects = Intersects::Undetermined;
  std::optional<Certificate> certificate;
  bool graph_type = false;
  std::string evidence;
  std::vector<std::string> warnings;
};

struct ClearanceOptions {
  ClearanceMode mode = ClearanceMode::Symbolic;
  bool assert_biregular = false;
  int sample_points = 8;
  std::uint64_t seed = 0;
  SolveOptions solve;
};

// Index of a variable in which h has degree one with a constant coefficient:
// then {h = 0} is the graph of a polynomial function of the other variables.
inline std::optional<std::size_t> graph_variable(const Polynomial& h) {
  for (std::size_t v : h.occurring_vars())
    if (h.degree_in(v) == 1 && leading_coefficient_in(h, v).is_constant()) return v;
  return std::nullopt;
}

namespace detail {

inline std::optional<std::size_t> constant_lead_variable(const Polynomial& p) {
  for (std::size_t v : p.occurring_vars())
    if (leading_coefficient_in(p, v).is_constant()) return v;
  return std::nullopt;
}

// {s = 0} and {h = 0} in C^n share a point.
inline std::pair<Intersects, std::string> intersect_symbolic(const Polynomial& s, const Polynomial& h,
                                                            SplitMix64& rng) {
  const std::size_t n = s.nvars();
  auto verdict_from_projection = [&](const Polynomial& r, const std::string& how) -> std::pair<Intersects, std::string> {
    // The projection is onto all of V(r) in C^(n-1).
    if (r.is_zero()) return {Intersects::Yes, how + " vanishes identically"};
    if (r.is_constant()) return {Intersects::No, how + " is the nonzero constant " + format(r)};
    if (n >= 2) return {Intersects::Yes, how + " = " + format(r) + " has zeros"};
    return {Intersects::No, how};
  };
  if (auto gv = graph_variable(h)) {
    // h = c y_k + p(others): substitute y_k = -p / c.
    auto coeffs = coefficients_in(h, *gv);
    Polynomial image = coeffs[0] * (Scalar(-1) / coeffs[1].constant_term());
    std::vector<Polynomial> images;
    for (std::size_t v = 0; v < n; ++v) images.push_back(v == *gv ? image : Polynomial::variable(s.vars(), v));
    return verdict_from_projection(compose(s, images, s.vars()),
                                   "S_f restricted to the graph (" + s.vars()[*gv] + " eliminated)");
  }
  if (auto v = constant_lead_variable(h))
    return verdict_from_projection(resultant(s, h, *v), "Res_" + s.vars()[*v] + "(s, h)");
  if (auto v = constant_lead_variable(s))
    return verdict_from_projection(resultant(s, h, *v), "Res_" + s.vars()[*v] + "(s, h)");

  const std::size_t var = h.occurring_vars().front();
  Polynomial r = resultant(s, h, var);
  if (r.is_zero()) return {Intersects::Yes, "common factor"};
  if (r.is_constant()) return {Intersects::No, "resultant is a nonzero constant"};
  FloatPoly fs(s, true), fh(h, true);
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto pt = sample_on_hypersurface(r, rng);
    if (!pt) continue;
    std::vector<double> ms, mh;
    auto cs = fs.specialize(*pt, var, &ms);
    auto ch = fh.specialize(*pt, var, &mh);
    int d = effective_degree(ch);
    if (d < 1) continue;
    ch.resize(static_cast<std::size_t>(d) + 1);
    for (const Root& root : univariate_roots(ch))
      if (relative_value(cs, ms, root.value) < 1e-8)
        return {Intersects::Yes, "numerical common zero found over a root of the resultant"};
  }
  return {Intersects::Undetermined, "resultant " + format(r) + " has zeros but no common point was confirmed"};
}

}  // namespace detail

// Decides whether S_f meets Z = {h = 0} (h in the target variables) and,
// for nonsingular f with Z biregular to C^(n-1), turns a "no" into an
// automorphism certificate.  Graph hypersurfaces y_k = p(others) count as
// biregular without assertion.
inline ClearanceVerdict hyperplane_clearance(const PolyMap& f, const Hypersurface& sf, const Polynomial& h,
                                             const ClearanceOptions& opt = {}) {
  if (h.is_constant()) throw DomainError("clearance needs a nonconstant hypersurface equation");
  ClearanceVerdict out;
  const bool nonsingular = is_nonsingular(f).nonsingular;
  auto graph = graph_variable(h);
  out.graph_type = graph.has_value();
  SplitMix64 rng = SplitMix64::stream(opt.seed, 0xC1);

  if (opt.mode == ClearanceMode::Symbolic) {
    if (sf.is_unknown()) {
      out.evidence = "nonproperness set unknown: " + sf.reason;
      return out;
    }
    if (sf.is_empty()) {
      out.intersects = Intersects::No;
      out.evidence = "nonproperness set is empty";
    } else {
      auto [v, why] = detail::intersect_symbolic(sf.polynomial, change_context(h, sf.polynomial.vars()), rng);
      out.intersects = v;
      out.evidence = why;
    }
  } else {
    if (!nonsingular) throw DomainError("sampling clearance requires a nonsingular map");
    int mu = geometric_degree(f, 8, opt.seed, opt.solve).mu;
    int off = 0, total = 0;
    for (int k = 0; k < opt.sample_points; ++k) {
      auto pt = sample_on_hypersurface(h, rng);
      if (!pt) continue;
      ++total;
      SfDiagnostic d = sf_sample_diagnostic(f, std::span<const Complex>(*pt), mu, opt.solve);
      if (d.verdict == SfMembership::InSf) {
        out.intersects = Intersects::Yes;
        out.evidence = "fiber count dropped at a sampled point of Z";
        break;
      }
      if (d.verdict == SfMembership::OffSf) ++off;
    }
    if (out.intersects != Intersects::Yes && total > 0 && off == total) {
      out.intersects = Intersects::No;
      out.evidence = "fiber count equals mu = " + std::to_string(mu) + " at " + std::to_string(total) +
                     " sampled points of Z";
    }
  }

  if (out.intersects == Intersects::No) {
    if (!nonsingular) {
      out.warnings.push_back("map is singular: no automorphism claim");
    } else if (graph || opt.assert_biregular) {
      Certificate c;
      c.kind = "automorphism";
      c.criterion = criteria::kHypersurfaceClearance;
      c.verified.push_back("Jacobian determinant is a nonzero constant");
      if (opt.mode == ClearanceMode::Symbolic)
        c.verified.push_back("nonproperness set misses Z (exact)");
      else
        c.asserted.push_back("nonproperness set misses Z (sampled, not exhaustive)");
      if (graph) {
        c.verified.push_back("Z is the graph of a polynomial in the coordinates other than " +
                             h.vars()[*graph] + ", hence biregular to C^(n-1) and h is a submersion");
      } else {
        c.asserted.push_back("Z is biregular to C^(n-1)");
        c.asserted.push_back("h is a nonsingular polynomial");
      }
      c.evidence = "h = " + format(h) + "; " + out.evidence;
      out.certificate = std::move(c);
    } else {
      out.warnings.push_back("Z is not a graph and biregularity was not asserted: no certificate");
    }
  }
  return out;
}

// Automorphism certificate from nonsingularity plus an empty S_f.
inline std::optional<Certificate> properness_certificate(const PolyMap& f, const SfResult& r) {
  if (!r.nonsingular || !r.sf.is_empty()) return std::nullopt;
  Certificate c;
  c.kind = "automorphism";
  c.criterion = criteria::kNonsingularProper;
  c.verified.push_back("Jacobian determinant is a nonzero constant");
  c.verified.push_back("every elimination leading coefficient is constant or rejected by sampling");
  std::string ev;
  for (const Polynomial& p : r.eliminants) ev += format(p) + "; ";
  c.evidence = ev;
  (void)f;
  return c;
}

}  // namespace jacmap
