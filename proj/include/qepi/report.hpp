#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qepi/inequalities.hpp"

namespace qepi {

// One state-family entry from the config.
struct StateSpec {
  enum class Family {
    vacuum,
    fock,
    thermal,
    coherent,
    cat,
    fock_mixture,
    random_full_support,
  };
  Family family = Family::vacuum;
  int n = 0;                    // fock
  double nbar = 0.0;            // thermal
  Complex alpha{0.0, 0.0};      // coherent / cat
  std::vector<double> weights;  // fock_mixture
  std::uint64_t seed_offset = 0;

  std::string label() const;
  DensityMatrix build(int cutoff, std::uint64_t base_seed) const;
};

struct ClassicalSpec {
  enum class Kind { gaussian, two_point };
  Kind kind = Kind::gaussian;
  double h = 1.0;
  double x = 0.5;

  std::string label() const;
  ClassicalRV build() const;
};

struct RunConfig {
  int schema_version = 1;
  int cutoff = 30;
  int lift_cutoff = 12;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;
  std::vector<StateSpec> states;
  std::vector<ClassicalSpec> classical;
  std::vector<std::string> collections;  // empty: no collection checks
  std::vector<double> eta_grid = {0.5};
  std::vector<double> t_grid = {1.0};
  int n_max = 4;
  double tol_entropy = 1e-6;
  double tol_fisher = 1e-5;
  double tol_residual = 1e-3;
  int gh_nodes = 20;
  int lift_nodes = 80;
  int max_terms = 4000;
  double gate_trace_deficit = 1e-8;
  double gate_quad_error = 1e-6;
  int max_rows = 10000;
  std::string out_dir = "out";

  std::string canonical_json() const;
};

// Throws Error(ConfigInvalid) with a message naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);  // IoError / ConfigInvalid

extern const std::vector<std::pair<std::string, std::string>> kKnownChecks;

struct CheckRow {
  std::string check;
  std::string family;
  std::string params;
  int n = 0;
  int cutoff = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string status;  // pass | fail | skip
  double trace_deficit = 0.0;
  double quad_error = 0.0;
  double wall_time = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string config_hash;
  std::vector<CheckRow> rows;

  int count(const std::string& status) const;
  std::string to_json(bool include_wall_time = true) const;
  std::string to_csv() const;
};

VerificationReport run_checks(const RunConfig& config, int jobs = 1);

// 0: all pass; 1: margin failure; 2: numerical-diagnostic failure (skips or
// gate exceedance).
int report_exit_code(const VerificationReport& report, const RunConfig& config);

void write_report_files(const VerificationReport& report,
                        const std::string& out_dir);

std::uint64_t fnv1a_hash(const std::string& data);

}  // namespace qepi
