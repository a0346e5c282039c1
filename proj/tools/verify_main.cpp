#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qepi/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of bosonic convolution inequalities"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;

  app.add_option("--config", config_path, "JSON config file (schema v1)");
  app.add_option("--out-dir", out_dir, "report output directory");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });

  CLI::App* list = app.add_subcommand("list-checks", "list available checks");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& [name, desc] : qepi::kKnownChecks)
      std::cout << name << "  -  " << desc << "\n";
    return 0;
  }

  if (config_path.empty()) {
    std::cerr << "error: --config is required (or use list-checks)\n";
    return 64;
  }

  try {
    qepi::RunConfig config = qepi::load_config(config_path);
    if (seed_set) config.seed = seed;
    if (const char* cap = std::getenv("QEPI_MAX_CUTOFF")) {
      int max_cutoff = std::atoi(cap);
      if (max_cutoff > 0 && config.cutoff > max_cutoff) {
        std::cerr << "error: config cutoff " << config.cutoff
                  << " exceeds QEPI_MAX_CUTOFF=" << max_cutoff << "\n";
        return 64;
      }
    }
    qepi::VerificationReport report = qepi::run_checks(config, jobs);
    qepi::write_report_files(report, out_dir.empty() ? config.out_dir : out_dir);
    int pass = report.count("pass"), fail = report.count("fail"),
        skip = report.count("skip");
    std::cout << "checks: " << report.rows.size() << "  pass: " << pass
              << "  fail: " << fail << "  skip: " << skip << "\n";
    for (const auto& r : report.rows) {
      if (r.status != "pass")
        std::cout << "  [" << r.status << "] " << r.check << " " << r.family
                  << " " << r.params
                  << (r.note.empty() ? "" : ("  (" + r.note + ")")) << "\n";
      if (r.trace_deficit > config.gate_trace_deficit)
        std::cout << "  [diagnostic] " << r.check << " " << r.family << " "
                  << r.params << "  trace_deficit " << r.trace_deficit
                  << " exceeds gate " << config.gate_trace_deficit << "\n";
      if (r.quad_error > config.gate_quad_error)
        std::cout << "  [diagnostic] " << r.check << " " << r.family << " "
                  << r.params << "  quadrature error " << r.quad_error
                  << " exceeds gate " << config.gate_quad_error << "\n";
    }
    return qepi::report_exit_code(report, config);
  } catch (const qepi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case qepi::ErrorCode::ConfigInvalid: return 64;
      case qepi::ErrorCode::IoError: return 74;
      default: return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
