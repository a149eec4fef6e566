#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "jacmap/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInternal = 2;
constexpr int kCorpusMismatch = 3;

int emit(const jacmap::Json& report, const std::string& format, const std::string& out) {
  std::string text = format == "text" ? jacmap::render_text(report) : report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream file(out);
  if (!file) {
    std::cerr << "jacmap: cannot write " << out << "\n";
    return kUsage;
  }
  file << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of polynomial maps C^n -> C^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", jacmap::kToolVersion);

  std::string format = "json", out;
  jacmap::AnalysisConfig cfg;
  std::string checks, mode = "symbolic";
  std::size_t drop = 0;

  auto* analyze = app.add_subcommand("analyze", "run checks on a map file");
  analyze->add_option("--map", cfg.map_source, "map file")->required();
  analyze->add_option("--checks", checks, "jacobian,degree,sf,rabier,cylinder,clearance")->required();
  analyze->add_option("--seed", cfg.seed, "sampling seed");
  analyze->add_option("--tol", cfg.tol, "solver residual tolerance");
  analyze->add_option("--nu-tol", cfg.nu_tol, "final nu bound for path witnesses");
  analyze->add_option("--t-max", cfg.t_max, "largest t on the witness grid");
  analyze->add_option("--samples", cfg.samples, "targets for the degree estimate");
  analyze->add_option("--drop", drop, "drop component k before the rabier check");
  analyze->add_option("--path", "Laurent path in t, e.g. \"t, t^-2, 0\"")->each([&](const std::string& s) { cfg.path = s; });
  analyze->add_option("--hyperplane", "hypersurface equation in y1..yn")->each([&](const std::string& s) { cfg.hyperplane = s; });
  analyze->add_flag("--assert-biregular", cfg.assert_biregular, "take {h = 0} ~ C^(n-1) as given");
  analyze->add_option("--clearance-mode", mode, "symbolic or sampling")->check(CLI::IsMember({"symbolic", "sampling"}));
  analyze->add_flag("--timing", cfg.timing, "include per-check wall times (breaks byte-identical output)");
  analyze->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze->add_option("--out", out, "write the report to a file");

  std::string corpus_id;
  std::uint64_t corpus_seed = 0;
  auto* corpus = app.add_subcommand("corpus", "run a built-in map against its stored expectations");
  corpus->add_option("id", corpus_id, "example-3-6, x-xy, x2-y or all")->required();
  corpus->add_option("--seed", corpus_seed, "sampling seed");
  corpus->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  corpus->add_option("--out", out, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (analyze->parsed()) {
      cfg.checks = jacmap::parse_checks(checks);
      if (drop) cfg.drop = drop;
      cfg.clearance_mode = mode == "sampling" ? jacmap::ClearanceMode::Sampling : jacmap::ClearanceMode::Symbolic;
      jacmap::PolyMap f = jacmap::load_map(cfg.map_source);
      return emit(jacmap::run(cfg, f), format, out);
    }
    jacmap::Json report = jacmap::corpus_run(corpus_id, corpus_seed);
    int rc = emit(report, format, out);
    if (rc != kOk) return rc;
    return report["status"] == "pass" ? kOk : kCorpusMismatch;
  } catch (const jacmap::UsageError& e) {
    std::cerr << "jacmap: " << e.what() << "\n";
    return kUsage;
  } catch (const jacmap::ParseError& e) {
    std::cerr << "jacmap: " << e.what() << "\n";
    return kUsage;
  } catch (const jacmap::Error& e) {
    std::cerr << "jacmap: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "jacmap: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
