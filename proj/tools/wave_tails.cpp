// wave-tails: simulate, perturb, theory, fit and reproduce from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavetails/wavetails.hpp"

namespace fs = std::filesystem;
using namespace wavetails;

namespace {

struct Overrides {
  std::optional<double> dr;
  std::optional<double> t_max;

  void apply(ModelConfig& c) const {
    if (dr) c.grid.dr = *dr;
    if (t_max) c.grid.t_max = *t_max;
    if (dr || t_max) {
      // Keep roughly ten samples per unit time and let r_max follow t_max.
      c.grid.series_stride = std::max(1, static_cast<int>(std::lround(0.1 / c.grid.dt())));
      if (t_max) c.grid.r_max = 0.0;
    }
  }
  nlohmann::json json() const {
    nlohmann::json j = nlohmann::json::object();
    if (dr) j["dr"] = *dr;
    if (t_max) j["t_max"] = *t_max;
    return j;
  }
};

nlohmann::json grid_json(const GridSpec& g) {
  return {{"dr", g.dr},
          {"mesh_ratio", g.mesh_ratio},
          {"dt", g.dt()},
          {"r_max", g.r_max},
          {"t_max", g.t_max},
          {"r_obs", g.r_obs},
          {"series_stride", g.series_stride},
          {"precision", g.precision == Precision::Extended ? "extended" : "double"}};
}

void note_support(RunManifest& m, const CauchyData& d) {
  m.doc()["support_radius"] = d.R;
  if (d.effective_support) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "data truncated at effective support R = %.4f; dropped |h| contribution %.3g", d.R,
                  d.truncation);
    m.warn(buf);
  }
}

/// Loads and resolves a config; also returns the scaled Cauchy data.
std::pair<ModelConfig, CauchyData> prepare(const std::string& path, const Overrides& ov, RunManifest& m) {
  ModelConfig c = load_config(path);
  ov.apply(c);
  const CauchyData data = make_cauchy_data(c.data, c.nonlinearity ? c.nonlinearity->epsilon : 1.0);
  resolve_grid(c, data.R);
  m.doc()["config_path"] = path;
  m.doc()["config"] = format_config(c);
  m.doc()["overrides"] = ov.json();
  m.doc()["grid"] = grid_json(c.grid);
  note_support(m, data);
  c.validate(data.R);
  return {c, data};
}

int cmd_simulate(const std::string& config, const Overrides& ov, RunManifest& m) {
  auto [c, data] = prepare(config, ov, m);
  const EvolutionResult res = evolve_full(c, data);
  write_series(m.output("series.csv"), res.series);
  if (c.grid.field_stride > 0) write_field(m.output("field.csv"), res.field);
  m.doc()["max_abs_u"] = res.max_abs_u;
  m.doc()["steps"] = res.steps;
  std::printf("simulate: %zu samples at r = %g, max|u| = %.4g\n", res.series.size(), c.grid.r_obs, res.max_abs_u);
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int cmd_perturb(const std::string& config, int n_max, const std::string& times, double step, const Overrides& ov,
                RunManifest& m) {
  auto [c, data] = prepare(config, ov, m);
  const double r = c.grid.r_obs;
  if (!(r > 0.0)) throw Error(ErrorKind::ConfigError, "perturb needs r_obs > 0");
  std::vector<double> ts = times.empty() ? std::vector<double>{} : parse_list(times);
  if (ts.empty())
    for (double t = 10.0; t <= c.grid.t_max * 0.9; t *= 1.5) ts.push_back(t);
  std::vector<Probe> probes;
  for (double t : ts) {
    if (t > c.grid.t_max) throw Error(ErrorKind::DomainError, "probe t = " + std::to_string(t) + " beyond t_max");
    probes.push_back({t, r});
  }

  // The series runs in powers of epsilon, so the hierarchy sees unscaled data.
  const CauchyData unscaled = make_cauchy_data(c.data);
  HierarchyOptions opt;
  opt.step = step;
  const PerturbationStack st = build_hierarchy(c, unscaled, n_max, probes, opt);
  // Full solution plus a 2 dr run: their difference bounds the discretization
  // error, which the analytic remainder bound does not see.
  ModelConfig fine = c, coarse = c;
  fine.grid.series_stride = coarse.grid.series_stride = 1;
  coarse.grid.dr = 2.0 * c.grid.dr;
  const EvolutionResult full = evolve_full(fine, data);
  const TimeSeries rough = evolve_full(coarse, data).series;
  m.doc()["scheme"] = to_string(st.scheme);
  m.doc()["null_step"] = step;

  {
    // Each order enters the solution as scale^n v_n; that is what gets written.
    CsvWriter w(m.output("orders.csv"), "order,t,r,value");
    for (int n = st.first_order; n <= n_max; ++n)
      for (std::size_t q = 0; q < probes.size(); ++q)
        w.row(n, probes[q].t, probes[q].r, std::pow(st.scale(), n) * st.values[n][q]);
  }

  std::optional<DataNorms> norms;
  std::string bound_note;
  if (st.scheme == Scheme::Linear) {
    norms = data_norms(data, c.potential->k);
  } else {
    bound_note = "remainder bound covers the linear scheme only";
  }
  CsvWriter w(m.output("remainder.csv"), "order,t,r,full,partial_sum,abs_diff,bound,numerical_error,satisfied");
  int violations = 0;
  for (int n = st.first_order; n <= n_max; ++n) {
    for (const auto& pr : probes) {
      const double u = full.series.at(pr.t);
      const double num = std::abs(u - rough.at(pr.t));
      const double ps = partial_sum(st, n, pr.t, pr.r);
      double bound = NAN;
      std::string ok = "n/a";
      if (norms) {
        try {
          bound = remainder_bound(n, c.potential->lambda, c.potential->k, norms->f0, norms->f1, norms->g0, pr.t, pr.r);
          ok = std::abs(u - ps) <= bound + num ? "yes" : "no";
          if (ok == "no") ++violations;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::CouplingTooLarge) throw;
          bound_note = e.what();
        }
      }
      w.row(n, pr.t, pr.r, u, ps, std::abs(u - ps), bound, num, ok);
    }
  }
  if (!bound_note.empty()) m.warn(bound_note);
  m.doc()["remainder_violations"] = violations;
  std::printf("perturb: %s scheme, orders %d..%d at %zu probes, %d remainder violations\n", to_string(st.scheme).c_str(),
              st.first_order, n_max, probes.size(), violations);
  return violations == 0 ? 0 : 1;
}

void theory_row(CsvWriter& w, const ModelConfig& c) {
  const TailPrediction tp = predict_tail(c, unit_h(c));
  const double k = c.potential ? c.potential->k : NAN;
  const double lv0 = c.potential ? c.potential->lambda * c.potential->V0 : 0.0;
  const double p = c.nonlinearity ? c.nonlinearity->p : NAN;
  const double eps = c.nonlinearity ? c.nonlinearity->epsilon : NAN;
  w.row(k, p, lv0, eps, tp.exponent, tp.amplitude, to_string(tp.branch));
}

int cmd_theory(const std::string& config, RunManifest& m) {
  CsvWriter w(m.output("theory.csv"), "k,p,lambda_V0,epsilon,q,amplitude,branch");
  if (!config.empty()) {
    ModelConfig c = load_config(config);
    m.doc()["config_path"] = config;
    m.doc()["config"] = format_config(c);
    theory_row(w, c);
    return 0;
  }
  // Without a config: the theory columns of both tables.
  for (const auto& r : rows::table1()) theory_row(w, r.config);
  for (const auto& r : rows::table2()) theory_row(w, r.config);
  return 0;
}

int cmd_fit(const std::string& series_path, std::optional<double> t1, std::optional<double> t2, double r_obs,
            double support, bool extended, RunManifest& m) {
  const TimeSeries s = read_series(series_path);
  m.doc()["series"] = series_path;
  const FitOptions fo = FitOptions::for_precision(extended ? Precision::Extended : Precision::Double);
  FitWindow win;
  if (t1 && t2) {
    win = {*t1, *t2};
  } else {
    win = auto_window(s, r_obs, support, fo);
    if (t1) win.t1 = *t1;
    if (t2) win.t2 = *t2;
  }
  const TailEstimate est = fit_power_law(s, win, fo);
  {
    CsvWriter w(m.output("fit.csv"), "exponent,amplitude,t1,t2,residual");
    w.row(est.exponent, est.amplitude, est.t1, est.t2, est.residual);
  }
  write_slope(m.output("slope.csv"), piecewise_slope(s, std::max(s.t.front(), 1e-3), fo));
  if (est.short_window) m.warn("fit window spans less than one decade");
  std::printf("fit: exponent %.6f, amplitude %.6e over [%g, %g]\n", est.exponent, est.amplitude, est.t1, est.t2);
  return 0;
}

int report(const std::vector<NamedVerdict>& verdicts, RunManifest& m) {
  bool all = true;
  auto& list = m.doc()["verdicts"] = nlohmann::json::array();
  for (const auto& v : verdicts) {
    std::printf("%-48s %s  %s\n", v.name.c_str(), to_string(v.verdict).c_str(), v.detail.c_str());
    list.push_back({{"case", v.name}, {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
    if (v.verdict == Verdict::Fail) all = false;
  }
  return all ? 0 : 1;
}

int cmd_reproduce(const std::string& which, const Overrides& ov, RunManifest& m) {
  m.doc()["table"] = which;
  m.doc()["overrides"] = ov.json();
  m.doc()["workers"] = worker_count();
  auto adjust = [&](ModelConfig& c) { ov.apply(c); };
  std::vector<NamedVerdict> all;
  auto add = [&](std::vector<NamedVerdict> v) { all.insert(all.end(), v.begin(), v.end()); };
  if (which == "table1" || which == "all") add(reproduce_table(m, "table1", rows::table1(), adjust));
  if (which == "table2" || which == "all") add(reproduce_table(m, "table2", rows::table2(), adjust));
  if (which == "crossover" || which == "all") add(reproduce_crossover(m, CrossoverSpec{}, adjust).verdicts);
  if (all.empty()) throw Error(ErrorKind::ConfigError, "unknown table '" + which + "'");
  {
    CsvWriter w(m.output("verdicts.csv"), "case,verdict");
    for (const auto& v : all) w.row(v.name, to_string(v.verdict));
  }
  return report(all, m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Late-time tails of spherically symmetric waves with a potential and a power nonlinearity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config, out = "out", series_path, times, table;
  Overrides ov;
  int n_max = 3;
  double step = 0.1, r_obs = 1.0, support = 0.0;
  std::optional<double> t1, t2;
  bool extended = false;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "configuration file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--dr", ov.dr, "override grid.dr")->check(CLI::PositiveNumber);
    sub->add_option("--tmax", ov.t_max, "override grid.t_max")->check(CLI::PositiveNumber);
  };

  auto* sim = app.add_subcommand("simulate", "evolve the full equation and write the series at r_obs");
  common(sim, true);

  auto* per = app.add_subcommand("perturb", "perturbation orders at probes on r = r_obs, with the remainder check");
  common(per, true);
  per->add_option("--n-max", n_max, "highest order")->capture_default_str();
  per->add_option("--times", times, "comma separated probe times");
  per->add_option("--step", step, "null grid spacing")->capture_default_str();

  auto* th = app.add_subcommand("theory", "closed-form tail exponent and amplitude");
  th->add_option("--config", config, "configuration file (default: every table row)")->check(CLI::ExistingFile);
  th->add_option("--out", out, "output directory")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "power-law fit of a t,u series");
  fit->add_option("--series", series_path, "input CSV with header t,u")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", out, "output directory")->capture_default_str();
  fit->add_option("--t1", t1, "window start");
  fit->add_option("--t2", t2, "window end");
  fit->add_option("--r-obs", r_obs, "observation radius for the automatic window")->capture_default_str();
  fit->add_option("--support", support, "data support radius for the automatic window (default: the Gaussian data)");
  fit->add_flag("--extended", extended, "series came from an extended-precision run");

  auto* rep = app.add_subcommand("reproduce", "run a table or the crossover and judge it");
  rep->add_option("table", table, "table1, table2, crossover or all")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "crossover", "all"}));
  rep->add_option("--out", out, "output directory")->capture_default_str();
  rep->add_option("--dr", ov.dr, "override grid.dr")->check(CLI::PositiveNumber);
  rep->add_option("--tmax", ov.t_max, "override grid.t_max")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    fs::create_directories(out);
  } catch (const std::exception& e) {
    std::cerr << "IoError: cannot create " << out << ": " << e.what() << "\n";
    return 2;
  }
  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);
  RunManifest manifest(out, cmdline);
  manifest.doc()["subcommand"] = name;
  try {
    int rc = 0;
    if (name == "simulate") rc = cmd_simulate(config, ov, manifest);
    if (name == "perturb") rc = cmd_perturb(config, n_max, times, step, ov, manifest);
    if (name == "theory") rc = cmd_theory(config, manifest);
    if (name == "fit") {
      if (support <= 0.0) support = data_family::paper_gaussian(1.0).R;
      rc = cmd_fit(series_path, t1, t2, r_obs, support, extended, manifest);
    }
    if (name == "reproduce") rc = cmd_reproduce(table, ov, manifest);
    manifest.finish(rc == 0 ? "ok" : "failed");
    return rc;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    manifest.finish("error", e.what());
    return 2;
  }
}
