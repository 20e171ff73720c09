#include "apheat/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>

namespace apheat {

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::P: return "P";
    case SchemeKind::E_AP: return "E_AP";
    case SchemeKind::CN_AP: return "CN_AP";
    default: return "RK_AP";
  }
}

SchemeKind parse_scheme(const std::string& name) {
  std::string n;
  for (char c : name) n += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (n == "P") return SchemeKind::P;
  if (n == "E_AP" || n == "EAP" || n == "E") return SchemeKind::E_AP;
  if (n == "CN_AP" || n == "CNAP" || n == "CN") return SchemeKind::CN_AP;
  if (n == "RK_AP" || n == "RKAP" || n == "RK") return SchemeKind::RK_AP;
  throw Error("unknown scheme '" + name + "' (expected P, E_AP, CN_AP or RK_AP)");
}

void SchemeConfig::validate() const {
  if (!(tau > 0.0)) throw Error("SchemeConfig: tau must be positive");
  if (!(eps > 0.0)) throw Error("SchemeConfig: eps must be positive");
  if (gamma < 0.0) throw Error("SchemeConfig: gamma must be nonnegative");
  if (kind == SchemeKind::RK_AP && std::abs(lambda - kDirkLambda) > 1e-15)
    throw Error("SchemeConfig: RK_AP requires lambda = 1 - 1/sqrt(2)");
}

namespace {

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

Stepper::Stepper(const Grid& grid, const AnisotropyField& field, SchemeConfig config)
    : grid_(grid), field_(field), config_(std::move(config)) {
  config_.validate();
  if (!grid_.classified()) throw Error("Stepper: grid boundary must be classified");
  mass_ = assemble_mass(grid_);
  perp_ = assemble_perp(grid_, field_, config_.a_perp);
  par_ = assemble_par(grid_, field_, config_.a_par);
  robin_ = assemble_robin(grid_, config_.gamma);
  const std::pair<double, const SparseMatrix*> terms[] = {{1.0, &perp_}, {1.0, &robin_}};
  perp_robin_ = combine(terms);
  inflow_ = grid_.inflow_mask();
}

DofVector Stepper::source(double t) const {
  DofVector s(grid_.num_dofs(), 0.0);
  if (config_.forcing) s = assemble_load(grid_, config_.forcing, t);
  if (config_.boundary_source) {
    const auto g = assemble_boundary_load(
        grid_, [&](const BoundaryEdge& e, Vec2 x) { return config_.boundary_source(t, e, x); });
    axpy(1.0, g, s);
  }
  return s;
}

SparseMatrix Stepper::nonlinear(std::span<const double> psi) const {
  return assemble_par_nl(grid_, field_, config_.a_par, psi, config_.exponent);
}

std::vector<double> Stepper::solve(const SparseMatrix& a, std::span<const double> rhs) {
  solver_.factorize(a);
  auto x = solver_.solve(rhs);
  max_residual_ = std::max(max_residual_, relative_residual(a, x, rhs));
  ++solves_;
  return x;
}

std::pair<DofVector, DofVector> Stepper::solve_blocks(BlockSystem blocks) {
  blocks.q_essential = inflow_;
  const auto sys = compose(blocks);
  const auto x = solve(sys.matrix, sys.rhs);
  return split_solution(sys, inflow_, x);
}

DofVector Stepper::extrapolate(const TimeState& state, double weight) const {
  // u^n + weight (u^n - u^{n-1}); u^{-1} defaults to u^n.
  DofVector out = state.u_curr;
  if (state.u_prev) {
    const auto& prev = *state.u_prev;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * (out[i] - prev[i]);
  }
  return out;
}

std::pair<DofVector, DofVector> Stepper::ap_stage(std::span<const double> psi, double dt,
                                                  std::span<const double> rhs_u) {
  const std::pair<double, const SparseMatrix*> uu_terms[] = {{1.0, &mass_},
                                                             {dt, &perp_robin_}};
  BlockSystem b;
  b.uu = combine(uu_terms);
  b.uq = par_.scaled(dt);
  b.qu = nonlinear(psi);
  b.qq = par_.scaled(-config_.eps);
  b.rhs_u.assign(rhs_u.begin(), rhs_u.end());
  b.rhs_q.assign(grid_.num_dofs(), 0.0);
  return solve_blocks(std::move(b));
}

TimeState Stepper::step(const TimeState& state) {
  switch (config_.kind) {
    case SchemeKind::P: return step_p(state);
    case SchemeKind::E_AP: return step_e_ap(state);
    case SchemeKind::CN_AP: return step_cn_ap(state);
    default: return step_rk_ap(state);
  }
}

namespace {

TimeState advanced(const TimeState& state, double tau, DofVector u, std::optional<DofVector> q) {
  TimeState next;
  next.t = state.t + tau;
  next.step = state.step + 1;
  next.u_prev = state.u_curr;
  next.u_curr = std::move(u);
  next.q_curr = std::move(q);
  return next;
}

}  // namespace

TimeState Stepper::step_p(const TimeState& state) {
  const double tau = config_.tau;
  const auto nl = nonlinear(state.u_curr);
  const std::pair<double, const SparseMatrix*> terms[] = {
      {1.0, &mass_}, {tau, &perp_robin_}, {tau / config_.eps, &nl}};
  const auto a = combine(terms);
  auto rhs = mass_.multiply(state.u_curr);
  axpy(tau, source(state.t + tau), rhs);
  return advanced(state, tau, solve(a, rhs), std::nullopt);
}

TimeState Stepper::step_e_ap(const TimeState& state) {
  const double tau = config_.tau;
  auto rhs = mass_.multiply(state.u_curr);
  axpy(tau, source(state.t + tau), rhs);
  auto [u, q] = ap_stage(state.u_curr, tau, rhs);
  return advanced(state, tau, std::move(u), std::move(q));
}

TimeState Stepper::step_cn_ap(const TimeState& state) {
  const double tau = config_.tau;
  const auto mid = extrapolate(state, 0.5);
  const auto nl = nonlinear(mid);

  const std::pair<double, const SparseMatrix*> lhs_terms[] = {{1.0, &mass_},
                                                              {0.5 * tau, &perp_robin_}};
  BlockSystem b;
  b.uu = combine(lhs_terms);
  b.uq = par_.scaled(tau);
  b.qu = nl.scaled(0.5);
  b.qq = par_.scaled(-config_.eps);

  b.rhs_u = mass_.multiply(state.u_curr);
  axpy(-0.5 * tau, perp_robin_.multiply(state.u_curr), b.rhs_u);
  const auto s0 = source(state.t);
  const auto s1 = source(state.t + tau);
  axpy(0.5 * tau, s0, b.rhs_u);
  axpy(0.5 * tau, s1, b.rhs_u);
  b.rhs_q = nl.multiply(state.u_curr);
  for (double& v : b.rhs_q) v *= -0.5;

  auto [u, q] = solve_blocks(std::move(b));
  const auto low = min_at_quadrature(grid_, u);
  if (!(low.value > 0.0)) {
    std::ostringstream os;
    os << "NEGATIVE_STATE: u_h = " << low.value << " at (" << low.location.x << ", "
       << low.location.y << ")";
    throw NegativeStateError(os.str(), low.location, low.value);
  }
  return advanced(state, tau, std::move(u), std::move(q));
}

TimeState Stepper::step_rk_ap(const TimeState& state) {
  const double tau = config_.tau;
  const double lam = config_.lambda;
  const auto& un = state.u_curr;
  const auto mun = mass_.multiply(un);

  const auto psi1 = extrapolate(state, lam);
  auto rhs1 = mun;
  axpy(tau * lam, source(state.t + lam * tau), rhs1);
  const auto [u1, q1] = ap_stage(psi1, tau * lam, rhs1);

  const auto psi2 = extrapolate(state, 1.0);
  DofVector diff(un.size());
  for (std::size_t i = 0; i < un.size(); ++i) diff[i] = u1[i] - un[i];
  auto rhs2 = mun;
  axpy((1.0 - lam) / lam, mass_.multiply(diff), rhs2);
  axpy(tau * lam, source(state.t + tau), rhs2);
  auto [u2, q2] = ap_stage(psi2, tau * lam, rhs2);
  return advanced(state, tau, std::move(u2), std::move(q2));
}

TimeState step_p(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                 const AnisotropyField& field) {
  return Stepper(grid, field, config).step_p(state);
}

TimeState step_e_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                    const AnisotropyField& field) {
  return Stepper(grid, field, config).step_e_ap(state);
}

TimeState step_cn_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                     const AnisotropyField& field) {
  return Stepper(grid, field, config).step_cn_ap(state);
}

TimeState step_rk_ap(const TimeState& state, const SchemeConfig& config, const Grid& grid,
                     const AnisotropyField& field) {
  return Stepper(grid, field, config).step_rk_ap(state);
}

int step_count(double t_end, double tau) {
  if (!(tau > 0.0) || t_end < 0.0) throw Error("step_count: need tau > 0 and t_end >= 0");
  const double k = std::round(t_end / tau);
  if (std::abs(k * tau - t_end) > 1e-12 * std::max(1.0, t_end)) {
    std::ostringstream os;
    os << "t_end = " << t_end << " is not an integer multiple of tau = " << tau;
    throw Error(os.str());
  }
  return static_cast<int>(k);
}

namespace {

StepRecord record(const Grid& grid, const TimeState& s, const RunCallbacks& cb) {
  const auto [lo, hi] = std::minmax_element(s.u_curr.begin(), s.u_curr.end());
  StepRecord r{s.step, s.t, *lo, *hi, l2_norm(grid, s.u_curr), std::nullopt};
  if (cb.exact) r.abs_error = l2_norm_error(grid, s.u_curr, cb.exact, s.t, ErrorMode::absolute);
  return r;
}

}  // namespace

RunDiagnostics run_steps(const DofVector& initial, const SchemeConfig& config,
                         const Grid& grid, const AnisotropyField& field, int steps,
                         const RunCallbacks& callbacks) {
  if (static_cast<int>(initial.size()) != grid.num_dofs())
    throw Error("run: initial vector has wrong length");
  const auto start = std::chrono::steady_clock::now();
  Stepper stepper(grid, field, config);

  RunDiagnostics diag;
  TimeState state;
  state.u_curr = initial;
  diag.records.push_back(record(grid, state, callbacks));

  for (int n = 1; n <= steps; ++n) {
    try {
      state = stepper.step(state);
    } catch (const NegativeStateError& e) {
      throw StepFailure("step " + std::to_string(n) + ": " + e.what(), n, true, e.value);
    } catch (const Error& e) {
      throw StepFailure("step " + std::to_string(n) + ": " + e.what(), n, false, 0.0);
    }
    state.t = n * config.tau;
    diag.records.push_back(record(grid, state, callbacks));
    if (callbacks.on_step) callbacks.on_step(state);
  }

  if (callbacks.exact) {
    diag.final_abs_l2 =
        l2_norm_error(grid, state.u_curr, callbacks.exact, state.t, ErrorMode::absolute);
    diag.final_rel_l2 =
        l2_norm_error(grid, state.u_curr, callbacks.exact, state.t, ErrorMode::relative);
  }
  diag.max_residual = stepper.max_residual();
  diag.final_state = std::move(state);
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return diag;
}

RunDiagnostics run(const DofVector& initial, const SchemeConfig& config, const Grid& grid,
                   const AnisotropyField& field, double t_end, const RunCallbacks& callbacks) {
  return run_steps(initial, config, grid, field, step_count(t_end, config.tau), callbacks);
}

}  // namespace apheat
