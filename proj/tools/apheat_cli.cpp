#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "apheat/harness.hpp"

using namespace apheat;

namespace {

struct Options {
  std::string config;
  std::string scheme, eps, h, tau, tm, tend, out, grid;
  bool no_boundary_sources = false;
  std::vector<std::string> settings;
};

ExperimentSpec build_spec(Experiment experiment, const Options& o) {
  ExperimentSpec spec = default_spec(experiment);
  if (!o.config.empty()) spec = load_config(o.config, spec);
  spec.experiment = experiment;
  const std::pair<const char*, const std::string*> flags[] = {
      {"schemes", &o.scheme}, {"eps", &o.eps},   {"h", &o.h},       {"tau", &o.tau},
      {"tm", &o.tm},          {"t_end", &o.tend}, {"out", &o.out},   {"grid", &o.grid}};
  for (const auto& [key, value] : flags)
    if (!value->empty()) apply_setting(spec, key, *value);
  if (o.no_boundary_sources) spec.boundary_sources = false;
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + s + "'");
    apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
  }
  spec.validate();
  return spec;
}

// Writes to `path`, or to stdout when the path is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_dump(const std::string& path, const Grid& grid, std::span<const double> u, double t) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_field_dump(os, grid, u, t);
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

int execute(Experiment experiment, const Options& o) {
  const auto spec = build_spec(experiment, o);
  Output out(spec.out);
  switch (experiment) {
    case Experiment::converge_space:
      write_table_csv(out.stream(), converge_space(spec));
      break;
    case Experiment::converge_time:
      write_table_csv(out.stream(), converge_time(spec));
      break;
    case Experiment::gaussian: {
      const auto res = gaussian(spec);
      bool header = true;
      int failed = 0;
      for (const auto& run : res.runs) {
        write_series_csv(out.stream(), to_string(run.scheme), run.diagnostics.records, header);
        header = false;
        if (run.status != "OK") {
          std::cerr << to_string(run.scheme) << ": " << run.status << '\n';
          ++failed;
        }
        if (!spec.out.empty())
          for (const auto& [t, u] : run.snapshots)
            write_dump(spec.out + "." + to_string(run.scheme) + ".t" + time_tag(t) + ".dump",
                       res.grid, u, t);
      }
      return failed ? 1 : 0;
    }
    case Experiment::cn_failure:
      write_cn_report_csv(out.stream(), cn_failure(spec));
      break;
    case Experiment::solve: {
      const auto res = solve(spec);
      const auto& d = res.diagnostics;
      write_series_csv(out.stream(), to_string(spec.schemes.front()), d.records);
      if (!spec.out.empty())
        write_dump(spec.out + ".dump", res.grid, d.final_state.u_curr, d.final_state.t);
      else
        write_field_dump(std::cerr, res.grid, d.final_state.u_curr, d.final_state.t);
      if (d.final_abs_l2)
        std::cerr << "abs_l2 " << *d.final_abs_l2 << " rel_l2 " << d.final_rel_l2.value_or(0.0)
                  << '\n';
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic nonlinear heat equation solver and experiment harness"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  const std::pair<Experiment, const char*> commands[] = {
      {Experiment::converge_space, "Spatial convergence table for the manufactured solution"},
      {Experiment::converge_time, "Temporal convergence table for the manufactured solution"},
      {Experiment::gaussian, "Gaussian initial data: min/max/L2 series and field dumps"},
      {Experiment::cn_failure, "Positivity breakdown of CN_AP with an E_AP control run"},
      {Experiment::solve, "Single run with diagnostics and a final field dump"}};
  std::vector<std::pair<CLI::App*, Experiment>> subs;
  for (const auto& [e, help] : commands) {
    auto* sub = app.add_subcommand(to_string(e), help);
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--scheme", o.scheme, "scheme list: P, E_AP, CN_AP, RK_AP");
    sub->add_option("--eps", o.eps, "comma-separated eps values");
    sub->add_option("--h", o.h, "comma-separated lattice spacings");
    sub->add_option("--tau", o.tau, "comma-separated time steps");
    sub->add_option("--tm", o.tm, "amplitude T_m");
    sub->add_option("--tend", o.tend, "final time");
    sub->add_option("--out", o.out, "output path (stdout when omitted)");
    sub->add_option("--grid", o.grid, "lattice intervals NxM");
    sub->add_flag("--no-boundary-sources", o.no_boundary_sources,
                  "drop the manufactured boundary source terms");
    sub->add_option("--set", o.settings, "extra key=value setting (repeatable)");
    subs.emplace_back(sub, e);
  }

  CLI11_PARSE(app, argc, argv);
  try {
    for (const auto& [sub, e] : subs)
      if (sub->parsed()) return execute(e, o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
