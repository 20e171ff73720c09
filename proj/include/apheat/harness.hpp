#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apheat/mms.hpp"
#include "apheat/schemes.hpp"

namespace apheat {

enum class Experiment { converge_space, converge_time, gaussian, cn_failure, solve };

const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Initial data for the `solve` experiment.
enum class InitialData { mms, gaussian, constant };

struct ExperimentSpec {
  Experiment experiment = Experiment::solve;
  std::vector<SchemeKind> schemes{SchemeKind::E_AP};
  std::vector<double> eps{1.0};
  std::vector<double> h{0.1};      // lattice spacing 1/N
  std::vector<double> tau{1e-6};
  double tm = 1.0;
  double t_end = 1e-4;
  std::string out;                 // output path prefix; empty writes to stdout
  int grid_x = 64;                 // lattice intervals for fixed-grid experiments
  int grid_y = 64;
  bool boundary_sources = true;
  double alpha = 1.0;
  double gamma = 1.0;
  double exponent = 2.5;
  int steps = 0;                   // step budget for cn-failure (0: derived from t_end)
  std::vector<double> snapshots;   // dump times for gaussian
  InitialData initial = InitialData::mms;
  double constant_value = 1.0;     // value for InitialData::constant
  bool forcing = true;             // MMS volume forcing in `solve`

  void validate() const;
};

/// Paper-scale defaults for each experiment.
ExperimentSpec default_spec(Experiment experiment);

/// Applies `key = value` pairs; keys mirror the ExperimentSpec field names.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);
/// Reads a flat `key = value` file ('#' starts a comment).
ExperimentSpec load_config(const std::string& path, ExperimentSpec base = {});
ExperimentSpec parse_config(std::istream& in, ExperimentSpec base = {});

/// Manufactured-solution problem on a lattice with `intervals` per axis.
struct MmsProblem {
  MmsParams params;
  Grid grid;
  AnisotropyField field;
  SchemeConfig config;
  DofVector initial;
  SpaceTimeFn exact;
};

MmsProblem make_mms_problem(const MmsParams& params, int intervals_x, int intervals_y,
                            SchemeKind kind, double tau, bool boundary_sources = true);

struct TableRow {
  std::string experiment;
  SchemeKind scheme;
  double eps;
  double h;
  double tau;
  double t_end;
  std::optional<double> abs_l2;
  std::optional<double> rel_l2;
  std::optional<double> observed_order;
  std::string status;  // OK or FAILED: <reason>
  double max_residual = 0.0;
};

std::vector<TableRow> converge_space(const ExperimentSpec& spec);
std::vector<TableRow> converge_time(const ExperimentSpec& spec);

/// Fills observed_order as log(e_prev / e) / log(x_prev / x) between
/// consecutive rows sharing scheme and eps, with x = h or tau.
void fill_observed_orders(std::vector<TableRow>& rows, bool by_tau);

struct GaussianRun {
  SchemeKind scheme;
  RunDiagnostics diagnostics;
  std::vector<std::pair<double, DofVector>> snapshots;
  std::string status;
};

struct GaussianResult {
  Grid grid;
  std::vector<GaussianRun> runs;
};

GaussianResult gaussian(const ExperimentSpec& spec);

struct CnFailureCase {
  SchemeKind scheme;
  double tau;
  int steps_requested;
  int steps_completed;
  bool negative_state;
  int failed_step;      // 0 when no failure
  double failure_min;   // offending value at the failure
  std::vector<double> min_u;  // per completed step, starting with the initial state
};

std::vector<CnFailureCase> cn_failure(const ExperimentSpec& spec);

struct SolveResult {
  Grid grid;
  RunDiagnostics diagnostics;
};

SolveResult solve(const ExperimentSpec& spec);

// Output helpers.
void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows);
void write_series_csv(std::ostream& os, const std::string& scheme,
                      const std::vector<StepRecord>& records, bool header = true);
void write_cn_report_csv(std::ostream& os, const std::vector<CnFailureCase>& cases);
/// Row-major nodal values preceded by the lines "Nx n", "Ny n", "t value".
void write_field_dump(std::ostream& os, const Grid& grid, std::span<const double> u, double t);

}  // namespace apheat
