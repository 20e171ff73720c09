#pragma once

#include <functional>
#include <optional>
#include <string>

#include "apheat/assembly.hpp"
#include "apheat/block_system.hpp"

namespace apheat {

enum class SchemeKind { P, E_AP, CN_AP, RK_AP };

const char* to_string(SchemeKind kind);
SchemeKind parse_scheme(const std::string& name);

/// Weak boundary source g(t, edge, x), added as int_boundary g v ds.
using BoundarySourceFn = std::function<double(double, const BoundaryEdge&, Vec2)>;

inline const double kDirkLambda = 1.0 - 1.0 / std::sqrt(2.0);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::E_AP;
  double eps = 1.0;
  double tau = 1e-3;
  double gamma = 1.0;
  double exponent = 2.5;
  double lambda = kDirkLambda;
  ScalarField a_par = constant_field(1.0);
  TensorField a_perp = identity_tensor();
  SpaceTimeFn forcing;               // optional volume source
  BoundarySourceFn boundary_source;  // optional weak boundary source

  void validate() const;
};

struct TimeState {
  double t = 0.0;
  int step = 0;
  DofVector u_curr;
  std::optional<DofVector> u_prev;
  std::optional<DofVector> q_curr;  // restricted numbering
};

/// One-step advance operators. Owns the time-independent matrices and the
/// solver workspace; not shareable between threads.
class Stepper {
 public:
  /// `grid` must have a classified boundary.
  Stepper(const Grid& grid, const AnisotropyField& field, SchemeConfig config);

  const SchemeConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }

  TimeState step(const TimeState& state);

  TimeState step_p(const TimeState& state);
  TimeState step_e_ap(const TimeState& state);
  TimeState step_cn_ap(const TimeState& state);
  TimeState step_rk_ap(const TimeState& state);

  /// Implicit AP stage: solves
  ///   (M + dt (A_perp + gamma B)) u + dt A_par q = rhs_u
  ///   A_nl(psi) u - eps A_par q = 0,   q = 0 on inflow DOFs.
  std::pair<DofVector, DofVector> ap_stage(std::span<const double> psi, double dt,
                                           std::span<const double> rhs_u);

  /// f and boundary sources integrated against the test functions at time t.
  DofVector source(double t) const;

  const SparseMatrix& mass() const { return mass_; }
  /// Largest relative residual of all linear solves so far.
  double max_residual() const { return max_residual_; }
  int solve_count() const { return solves_; }

 private:
  std::vector<double> solve(const SparseMatrix& a, std::span<const double> rhs);
  std::pair<DofVector, DofVector> solve_blocks(BlockSystem blocks);
  SparseMatrix nonlinear(std::span<const double> psi) const;
  DofVector extrapolate(const TimeState& state, double weight) const;

  Grid grid_;
  AnisotropyField field_;
  SchemeConfig config_;
  SparseMatrix mass_, perp_, par_, robin_;
  SparseMatrix perp_robin_;  // A_perp + gamma B
  std::vector<bool> inflow_;
  LuSolver solver_;
  double max_residual_ = 0.0;
  int solves_ = 0;
};

TimeState step_p(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                 const AnisotropyField& field);
TimeState step_e_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                    const AnisotropyField& field);
TimeState step_cn_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                     const AnisotropyField& field);
TimeState step_rk_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                     const AnisotropyField& field);

struct StepRecord {
  int step;
  double t;
  double min_u;
  double max_u;
  double l2;
  std::optional<double> abs_error;
};

struct RunDiagnostics {
  std::vector<StepRecord> records;
  std::optional<double> final_abs_l2;
  std::optional<double> final_rel_l2;
  double wall_seconds = 0.0;
  double max_residual = 0.0;
  TimeState final_state;
};

struct RunCallbacks {
  SpaceTimeFn exact;                               // enables error tracking
  std::function<void(const TimeState&)> on_step;   // called after every step
};

/// A step failed; carries the 1-based step index.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, int step, bool negative_state, double min_value)
      : Error(what), step(step), negative_state(negative_state), min_value(min_value) {}

  int step;
  bool negative_state;
  double min_value;  // offending value for negative-state failures
};

/// Advances `initial` from t = 0 to t_end = k tau. Multi-level schemes start
/// from u^{-1} := u^0.
RunDiagnostics run(const DofVector& initial, const SchemeConfig& config, const Grid& grid,
                   const AnisotropyField& field, double t_end,
                   const RunCallbacks& callbacks = {});

/// Same as `run` with an explicit step count.
RunDiagnostics run_steps(const DofVector& initial, const SchemeConfig& config,
                         const Grid& grid, const AnisotropyField& field, int steps,
                         const RunCallbacks& callbacks = {});

/// Number of steps k with |k tau - t_end| <= 1e-12 max(1, t_end); throws otherwise.
int step_count(double t_end, double tau);

}  // namespace apheat
