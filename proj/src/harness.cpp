#include "apheat/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace apheat {

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::converge_space: return "converge-space";
    case Experiment::converge_time: return "converge-time";
    case Experiment::gaussian: return "gaussian";
    case Experiment::cn_failure: return "cn-failure";
    default: return "solve";
  }
}

Experiment parse_experiment(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '_', '-');
  for (auto e : {Experiment::converge_space, Experiment::converge_time, Experiment::gaussian,
                 Experiment::cn_failure, Experiment::solve})
    if (n == to_string(e)) return e;
  throw Error("unknown experiment '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (schemes.empty()) throw Error("schemes must not be empty");
  if (eps.empty()) throw Error("eps must not be empty");
  if (tau.empty()) throw Error("tau must not be empty");
  if (experiment == Experiment::converge_space && h.empty()) throw Error("h must not be empty");
  for (double e : eps)
    if (!(e > 0.0)) throw Error("eps values must be positive");
  for (double t : tau)
    if (!(t > 0.0)) throw Error("tau values must be positive");
  for (double v : h)
    if (!(v > 0.0)) throw Error("h values must be positive");
  if (!(tm > 0.0)) throw Error("tm must be positive");
  if (grid_x < 2 || grid_y < 2 || grid_x % 2 || grid_y % 2)
    throw Error("grid must have even interval counts >= 2");
  // Memory budget: the coupled system has two unknowns per lattice node.
  constexpr long kMaxNodes = 2'000'000;
  const auto nodes = [](long n) { return (n + 1) * (n + 1); };
  if (static_cast<long>(grid_x + 1) * (grid_y + 1) > kMaxNodes)
    throw Error("grid exceeds the memory budget");
  for (double v : h)
    if (nodes(std::lround(1.0 / v)) > kMaxNodes) throw Error("h sweep exceeds the memory budget");
}

ExperimentSpec default_spec(Experiment experiment) {
  ExperimentSpec s;
  s.experiment = experiment;
  switch (experiment) {
    case Experiment::converge_space:
      s.schemes = {SchemeKind::P, SchemeKind::E_AP, SchemeKind::RK_AP};
      s.eps = {1.0, 1e-10};
      s.h = {0.1, 0.05, 0.025};
      s.tau = {1e-6};
      s.t_end = 1e-4;
      break;
    case Experiment::converge_time:
      s.schemes = {SchemeKind::P, SchemeKind::E_AP, SchemeKind::RK_AP};
      s.eps = {1.0, 1e-10};
      s.tau = {0.1, 0.05, 0.025, 0.0125};
      s.t_end = 0.1;
      s.grid_x = s.grid_y = 64;
      break;
    case Experiment::gaussian:
      s.schemes = {SchemeKind::E_AP, SchemeKind::RK_AP};
      s.eps = {1.0};
      s.tau = {0.01};
      s.tm = 1e5;
      s.t_end = 15.0;
      s.grid_x = s.grid_y = 50;
      s.snapshots = {0.0, 0.01, 4.5, 4.75, 5.0, 6.0};
      break;
    case Experiment::cn_failure:
      s.schemes = {SchemeKind::CN_AP};
      s.eps = {1.0};
      s.tau = {0.1, 1e-16};
      s.tm = 1e5;
      s.grid_x = s.grid_y = 50;
      s.steps = 100;
      break;
    case Experiment::solve:
      s.schemes = {SchemeKind::E_AP};
      s.tau = {1e-3};
      s.t_end = 1e-2;
      s.grid_x = s.grid_y = 20;
      break;
  }
  return s;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error("setting '" + key + "': '" + v + "' is not a number");
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error("setting '" + key + "': '" + v + "' is not a boolean");
}

}  // namespace

void apply_setting(ExperimentSpec& spec, const std::string& raw_key, const std::string& raw) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw);
  if (key == "experiment") {
    spec.experiment = parse_experiment(v);
  } else if (key == "schemes" || key == "scheme") {
    spec.schemes.clear();
    for (const auto& s : split_list(v)) spec.schemes.push_back(parse_scheme(s));
  } else if (key == "eps") {
    spec.eps = to_doubles(key, v);
  } else if (key == "h") {
    spec.h = to_doubles(key, v);
  } else if (key == "tau") {
    spec.tau = to_doubles(key, v);
  } else if (key == "tm") {
    spec.tm = to_double(key, v);
  } else if (key == "t_end" || key == "tend") {
    spec.t_end = to_double(key, v);
  } else if (key == "out") {
    spec.out = v;
  } else if (key == "grid") {
    const auto x = v.find_first_of("xX");
    try {
      if (x == std::string::npos) {
        spec.grid_x = spec.grid_y = std::stoi(v);
      } else {
        spec.grid_x = std::stoi(v.substr(0, x));
        spec.grid_y = std::stoi(v.substr(x + 1));
      }
    } catch (const std::exception&) {
      throw Error("setting 'grid': expected NxM, got '" + v + "'");
    }
  } else if (key == "boundary_sources") {
    spec.boundary_sources = to_bool(key, v);
  } else if (key == "alpha") {
    spec.alpha = to_double(key, v);
  } else if (key == "gamma") {
    spec.gamma = to_double(key, v);
  } else if (key == "exponent") {
    spec.exponent = to_double(key, v);
  } else if (key == "steps") {
    spec.steps = static_cast<int>(to_double(key, v));
  } else if (key == "snapshots") {
    spec.snapshots = to_doubles(key, v);
  } else if (key == "initial") {
    if (v == "mms") spec.initial = InitialData::mms;
    else if (v == "gaussian") spec.initial = InitialData::gaussian;
    else if (v == "constant") spec.initial = InitialData::constant;
    else throw Error("setting 'initial': expected mms, gaussian or constant");
  } else if (key == "constant_value") {
    spec.constant_value = to_double(key, v);
  } else if (key == "forcing") {
    spec.forcing = to_bool(key, v);
  } else {
    throw Error("unknown setting '" + key + "'");
  }
}

ExperimentSpec parse_config(std::istream& in, ExperimentSpec base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentSpec load_config(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

MmsProblem make_mms_problem(const MmsParams& params, int intervals_x, int intervals_y,
                            SchemeKind kind, double tau, bool boundary_sources) {
  auto exact = std::make_shared<const ExactSolution>(params);
  const auto& field = exact->field();
  Grid grid = classify_boundary(grid_from_lattice(intervals_x, intervals_y), field);

  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.eps = params.eps;
  cfg.tau = tau;
  cfg.gamma = params.gamma;
  cfg.exponent = params.exponent;
  cfg.a_par = constant_field(params.a_par);
  const double ap = params.a_perp;
  cfg.a_perp = [ap](Vec2) { return Mat2{ap, 0.0, 0.0, ap}; };
  cfg.forcing = [exact](double t, Vec2 x) { return exact->forcing(t, x); };
  if (boundary_sources) {
    cfg.boundary_source = [exact](double t, const BoundaryEdge& e, Vec2 x) {
      return exact->boundary_residual(t, x, e.normal, e.tag);
    };
  }
  auto initial = interpolate(grid, [exact](Vec2 x) { return exact->u(0.0, x).v; });
  SpaceTimeFn u = [exact](double t, Vec2 x) { return exact->u(t, x).v; };
  return MmsProblem{params, std::move(grid), field, std::move(cfg), std::move(initial),
                    std::move(u)};
}

namespace {

MmsParams mms_params(const ExperimentSpec& spec, double eps) {
  MmsParams p;
  p.alpha = spec.alpha;
  p.tm = spec.tm;
  p.eps = eps;
  p.gamma = spec.gamma;
  p.exponent = spec.exponent;
  return p;
}

TableRow mms_row(const ExperimentSpec& spec, SchemeKind scheme, double eps, int intervals_x,
                 int intervals_y, double tau) {
  TableRow row{to_string(spec.experiment), scheme, eps, 1.0 / intervals_x, tau, spec.t_end,
               std::nullopt, std::nullopt, std::nullopt, "OK"};
  try {
    const auto prob = make_mms_problem(mms_params(spec, eps), intervals_x, intervals_y, scheme,
                                       tau, spec.boundary_sources);
    RunCallbacks cb;
    cb.exact = prob.exact;
    const auto diag = run(prob.initial, prob.config, prob.grid, prob.field, spec.t_end, cb);
    row.abs_l2 = diag.final_abs_l2;
    row.rel_l2 = diag.final_rel_l2;
    row.max_residual = diag.max_residual;
  } catch (const Error& e) {
    row.status = std::string("FAILED: ") + e.what();
  }
  return row;
}

}  // namespace

void fill_observed_orders(std::vector<TableRow>& rows, bool by_tau) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].observed_order.reset();
    for (std::size_t j = i; j-- > 0;) {
      if (rows[j].scheme != rows[i].scheme || rows[j].eps != rows[i].eps) continue;
      const double x0 = by_tau ? rows[j].tau : rows[j].h;
      const double x1 = by_tau ? rows[i].tau : rows[i].h;
      if (rows[j].abs_l2 && rows[i].abs_l2 && *rows[i].abs_l2 > 0.0 && x0 != x1)
        rows[i].observed_order = std::log(*rows[j].abs_l2 / *rows[i].abs_l2) / std::log(x0 / x1);
      break;
    }
  }
}

std::vector<TableRow> converge_space(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<TableRow> rows;
  for (auto scheme : spec.schemes)
    for (double eps : spec.eps)
      for (double h : spec.h) {
        const int n = static_cast<int>(std::lround(1.0 / h));
        if (n % 2 != 0 || std::abs(n * h - 1.0) > 1e-9)
          throw Error("converge-space: 1/h must be an even integer");
        rows.push_back(mms_row(spec, scheme, eps, n, n, spec.tau.front()));
      }
  fill_observed_orders(rows, false);
  return rows;
}

std::vector<TableRow> converge_time(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<TableRow> rows;
  for (auto scheme : spec.schemes)
    for (double eps : spec.eps)
      for (double tau : spec.tau)
        rows.push_back(mms_row(spec, scheme, eps, spec.grid_x, spec.grid_y, tau));
  fill_observed_orders(rows, true);
  return rows;
}

namespace {

struct GaussianSetup {
  Grid grid;
  AnisotropyField field;
  DofVector initial;
};

GaussianSetup gaussian_setup(const ExperimentSpec& spec) {
  auto field = AnisotropyField::mms(spec.alpha);
  auto grid = classify_boundary(grid_from_lattice(spec.grid_x, spec.grid_y), field);
  const double tm = spec.tm;
  auto initial = interpolate(grid, [tm](Vec2 x) { return gaussian_initial(tm, x); });
  return {std::move(grid), std::move(field), std::move(initial)};
}

SchemeConfig plain_config(const ExperimentSpec& spec, SchemeKind kind, double eps, double tau) {
  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.eps = eps;
  cfg.tau = tau;
  cfg.gamma = spec.gamma;
  cfg.exponent = spec.exponent;
  return cfg;
}

}  // namespace

GaussianResult gaussian(const ExperimentSpec& spec) {
  spec.validate();
  auto setup = gaussian_setup(spec);
  GaussianResult result{setup.grid, {}};
  const double tau = spec.tau.front();
  for (auto scheme : spec.schemes) {
    GaussianRun r{scheme, {}, {}, "OK"};
    for (double ts : spec.snapshots)
      if (std::abs(ts) < 0.5 * tau) r.snapshots.emplace_back(0.0, setup.initial);
    RunCallbacks cb;
    cb.on_step = [&](const TimeState& s) {
      for (double ts : spec.snapshots)
        if (ts > 0.5 * tau && std::abs(s.t - ts) < 0.5 * tau) r.snapshots.emplace_back(s.t, s.u_curr);
    };
    try {
      r.diagnostics = run(setup.initial, plain_config(spec, scheme, spec.eps.front(), tau),
                          setup.grid, setup.field, spec.t_end, cb);
    } catch (const Error& e) {
      r.status = std::string("FAILED: ") + e.what();
    }
    result.runs.push_back(std::move(r));
  }
  return result;
}

std::vector<CnFailureCase> cn_failure(const ExperimentSpec& spec) {
  spec.validate();
  auto setup = gaussian_setup(spec);
  std::vector<CnFailureCase> cases;

  auto run_case = [&](SchemeKind scheme, double tau) {
    const int steps = spec.steps > 0 ? spec.steps : step_count(spec.t_end, tau);
    CnFailureCase c{scheme, tau, steps, 0, false, 0, 0.0, {}};
    const auto [lo, hi] = std::minmax_element(setup.initial.begin(), setup.initial.end());
    (void)hi;
    c.min_u.push_back(*lo);
    RunCallbacks cb;
    cb.on_step = [&](const TimeState& s) {
      c.steps_completed = s.step;
      c.min_u.push_back(*std::min_element(s.u_curr.begin(), s.u_curr.end()));
    };
    try {
      run_steps(setup.initial, plain_config(spec, scheme, spec.eps.front(), tau), setup.grid,
                setup.field, steps, cb);
    } catch (const StepFailure& f) {
      c.negative_state = f.negative_state;
      c.failed_step = f.step;
      c.failure_min = f.min_value;
    }
    cases.push_back(std::move(c));
  };

  for (auto scheme : spec.schemes)
    for (double tau : spec.tau) run_case(scheme, tau);
  // Control: the L-stable Euler scheme under the largest time step.
  run_case(SchemeKind::E_AP, *std::max_element(spec.tau.begin(), spec.tau.end()));
  return cases;
}

SolveResult solve(const ExperimentSpec& spec) {
  spec.validate();
  const auto scheme = spec.schemes.front();
  const double tau = spec.tau.front();
  const double eps = spec.eps.front();
  if (spec.initial == InitialData::mms) {
    auto prob = make_mms_problem(mms_params(spec, eps), spec.grid_x, spec.grid_y, scheme, tau,
                                 spec.boundary_sources);
    if (!spec.forcing) prob.config.forcing = nullptr;
    RunCallbacks cb;
    cb.exact = prob.exact;
    auto diag = run(prob.initial, prob.config, prob.grid, prob.field, spec.t_end, cb);
    return {prob.grid, std::move(diag)};
  }
  auto field = AnisotropyField::mms(spec.alpha);
  auto grid = classify_boundary(grid_from_lattice(spec.grid_x, spec.grid_y), field);
  DofVector initial;
  if (spec.initial == InitialData::gaussian) {
    const double tm = spec.tm;
    initial = interpolate(grid, [tm](Vec2 x) { return gaussian_initial(tm, x); });
  } else {
    initial.assign(grid.num_dofs(), spec.constant_value);
  }
  auto diag = run(initial, plain_config(spec, scheme, eps, tau), grid, field, spec.t_end);
  return {grid, std::move(diag)};
}

namespace {

std::string num(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string opt(const std::optional<double>& v, int digits = 17) {
  return v ? num(*v, digits) : std::string();
}

}  // namespace

void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "experiment,scheme,eps,h,tau,t_end,abs_l2,rel_l2,observed_order,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << r.experiment << ',' << to_string(r.scheme) << ',' << num(r.eps, 10) << ','
       << num(r.h, 10) << ',' << num(r.tau, 10) << ',' << num(r.t_end, 10) << ','
       << opt(r.abs_l2) << ',' << opt(r.rel_l2) << ',' << opt(r.observed_order, 6) << ','
       << status << '\n';
  }
}

void write_series_csv(std::ostream& os, const std::string& scheme,
                      const std::vector<StepRecord>& records, bool header) {
  if (header) os << "scheme,step,t,min_u,max_u,l2,abs_error\n";
  for (const auto& r : records)
    os << scheme << ',' << r.step << ',' << num(r.t, 12) << ',' << num(r.min_u) << ','
       << num(r.max_u) << ',' << num(r.l2) << ',' << opt(r.abs_error) << '\n';
}

void write_cn_report_csv(std::ostream& os, const std::vector<CnFailureCase>& cases) {
  os << "scheme,tau,step,min_u,status\n";
  for (const auto& c : cases) {
    for (std::size_t n = 0; n < c.min_u.size(); ++n)
      os << to_string(c.scheme) << ',' << num(c.tau, 10) << ',' << n << ',' << num(c.min_u[n])
         << ",OK\n";
    if (c.failed_step > 0)
      os << to_string(c.scheme) << ',' << num(c.tau, 10) << ',' << c.failed_step << ','
         << num(c.failure_min) << ',' << (c.negative_state ? "NEGATIVE_STATE" : "FAILED")
         << '\n';
  }
}

void write_field_dump(std::ostream& os, const Grid& grid, std::span<const double> u, double t) {
  os << "Nx " << grid.nx() << '\n' << "Ny " << grid.ny() << '\n' << "t " << num(t) << '\n';
  const int lx = grid.lattice_nx();
  for (int j = 0; j < grid.lattice_ny(); ++j) {
    for (int i = 0; i < lx; ++i) os << (i ? " " : "") << num(u[grid.dof(i, j)]);
    os << '\n';
  }
}

}  // namespace apheat
