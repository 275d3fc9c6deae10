#include "schedrisk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "schedrisk/control.hpp"
#include "schedrisk/cpm.hpp"
#include "schedrisk/csv.hpp"
#include "schedrisk/error.hpp"
#include "schedrisk/indices.hpp"
#include "schedrisk/montecarlo.hpp"
#include "schedrisk/project_file.hpp"
#include "schedrisk/reports.hpp"
#include "schedrisk/stats.hpp"
#include "schedrisk/svg.hpp"

namespace schedrisk {

namespace {

struct Options {
  std::string project;
  std::size_t runs = kDefaultRuns;
  std::uint64_t seed = 42;
  std::size_t grid = kDefaultTrajectoryGrid;
  std::string out;
  std::size_t threads = 0;
  std::string isa = "auto";
  std::string observe;
  double percentile = 90.0;
  std::string dimension;
  std::size_t neighbors = 0;
  std::string estimator = "knn";
  std::vector<double> interval{5.0, 95.0};
  std::string correlation = "pearson";
  std::size_t points = kDefaultBaselineGrid;
  double band = kDefaultTriadBand;
  std::string kind;
  std::size_t bins = 30;
  std::string matrix;
  std::string output;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::ConfigError, msg);
}

ControlObservation parse_observe(const std::string& text) {
  if (text.empty()) config_error("--observe t=<v>,ev=<v>,ac=<v> is required");
  std::map<std::string, double, std::less<>> kv;
  std::size_t from = 0;
  while (from <= text.size()) {
    const auto comma = text.find(',', from);
    const std::string part =
        text.substr(from, comma == std::string::npos ? std::string::npos : comma - from);
    const auto eq = part.find('=');
    double v = 0.0;
    if (eq == std::string::npos) config_error("--observe: expected key=value, got '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string val = part.substr(eq + 1);
    const auto [end, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || end != val.data() + val.size())
      config_error("--observe: '" + val + "' is not a number");
    if (key != "t" && key != "ev" && key != "ac") config_error("--observe: unknown key '" + key + "'");
    if (!kv.emplace(key, v).second) config_error("--observe: '" + key + "' given twice");
    if (comma == std::string::npos) break;
    from = comma + 1;
  }
  for (const char* k : {"t", "ev", "ac"})
    if (!kv.contains(k)) config_error(std::string("--observe: missing '") + k + "'");
  return {kv["t"], kv["ac"], kv["ev"]};
}

class Session {
 public:
  Session(const Options& opt, std::ostream& out, std::ostream& err)
      : opt_(opt), out_(out), err_(err) {}

  const ValidatedNetwork& network() {
    if (!network_) {
      if (opt_.project.empty()) config_error("--project is required");
      network_ = validate(parse_project(opt_.project));
    }
    return *network_;
  }

  const Ensemble& ensemble() {
    if (!ensemble_) {
      SimConfig cfg;
      cfg.runs = opt_.runs;
      cfg.seed = opt_.seed;
      cfg.trajectory_grid = opt_.grid;
      cfg.threads = opt_.threads;
      cfg.isa = isa();
      ensemble_ = run_ensemble(network(), cfg);
    }
    return *ensemble_;
  }

  std::optional<kernels::Isa> isa() const {
    if (opt_.isa == "auto") return std::nullopt;
    if (opt_.isa == "scalar") return kernels::Isa::scalar;
    if (opt_.isa == "avx2") return kernels::Isa::avx2;
    config_error("--isa must be auto, scalar or avx2");
  }

  RiskBaseline baseline() {
    try {
      return risk_baselines(ensemble(), opt_.points);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateProject) throw;
      err_ << "note: deterministic project, risk baselines are zero\n";
      return RiskBaseline::zero(ensemble().planned(), opt_.points);
    }
  }

  bool to_files() const { return !opt_.out.empty(); }

  std::filesystem::path out_path(const std::string& file) const {
    std::error_code ec;
    std::filesystem::create_directories(opt_.out, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + opt_.out + ": " + ec.message(), opt_.out);
    return std::filesystem::path(opt_.out) / file;
  }

  /// Writes `out/name.csv`; without --out the primary table goes to stdout.
  void table(const std::string& name, const CsvTable& t, bool primary) {
    if (to_files())
      write_csv(t, out_path(name + ".csv"));
    else if (primary)
      out_ << to_csv(t);
  }

  void summary(const std::string& line) {
    if (to_files()) out_ << line << "\n";
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<ValidatedNetwork> network_;
  std::optional<Ensemble> ensemble_;
};

std::string fmt(double v) { return csv_number(v); }

Dimension dimension_of(const std::string& name) {
  if (name == "cost") return Dimension::cost;
  if (name == "duration") return Dimension::duration;
  config_error("--dimension must be cost or duration");
}

void cmd_validate(Session& s, std::ostream& out) {
  const auto& net = s.network();
  std::size_t activities = 0, risks = 0;
  for (const auto& n : net.nodes()) (n.kind == NodeKind::activity ? activities : risks)++;
  out << "nodes " << net.size() << "\n";
  out << "activities " << activities << "\n";
  out << "duration_risks " << risks << "\n";
  out << "cost_risks " << net.cost_risks().size() << "\n";
  try {
    out << "paths " << enumerate_paths(net).size() << "\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PathExplosion) throw;
    out << "paths >" << kDefaultPathCap << "\n";
  }
  out << "order";
  for (const auto& n : net.nodes()) out << " " << n.id;
  out << "\n";
}

void cmd_cpm(Session& s) {
  const auto& net = s.network();
  const CpmResult cpm = plan(net);
  s.summary("planned_duration " + fmt(cpm.duration));
  s.summary("budget " + fmt(cpm.budget));
  std::string crit = "critical";
  for (auto i : cpm.critical_set()) crit += " " + net.node(i).id;
  s.summary(crit);
  s.table("cpm", cpm_table(net, cpm), true);
  s.table("pv", pv_table(planned_value_curve(net, cpm)), false);
}

void cmd_paths(Session& s) {
  const auto& net = s.network();
  const PathMatrix paths = enumerate_paths(net);
  s.summary("paths " + std::to_string(paths.size()));
  s.table("paths", paths_table(net, paths), true);
}

void cmd_simulate(Session& s, const Options& opt) {
  const auto& e = s.ensemble();
  s.summary("runs " + std::to_string(e.runs()));
  s.summary("seed " + std::to_string(opt.seed));
  s.summary("planned_duration " + fmt(e.planned_duration()));
  s.summary("budget " + fmt(e.budget()));
  s.summary("mean_duration " + fmt(sample_mean(e.project_durations())));
  s.summary("sd_duration " + fmt(sample_sd(e.project_durations())));
  s.summary("mean_cost " + fmt(sample_mean(e.project_costs())));
  s.summary("sd_cost " + fmt(sample_sd(e.project_costs())));
  s.table("percentiles", percentile_table(e), true);
  s.table("runs", runs_table(e), false);
  s.table("histogram_duration", histogram_table(histogram_and_cdf(e.project_durations(), opt.bins)),
          false);
  s.table("histogram_cost", histogram_table(histogram_and_cdf(e.project_costs(), opt.bins)), false);
  s.table("risks", risk_table(e), false);
}

void cmd_indices(Session& s, const Options& opt) {
  Correlation method = Correlation::pearson;
  if (opt.correlation == "spearman")
    method = Correlation::spearman;
  else if (opt.correlation != "pearson")
    config_error("--correlation must be pearson or spearman");
  const SensitivityReport report = sensitivity_report(s.ensemble(), method);
  s.summary("sd_duration " + fmt(report.sigma_duration));
  s.table("sensitivity", sensitivity_table(report), true);
}

void cmd_contingency(Session& s, const Options& opt) {
  if (!(opt.percentile >= 0.0 && opt.percentile <= 100.0))
    config_error("--percentile must lie in [0, 100]");
  const Dimension dim = dimension_of(opt.dimension.empty() ? "cost" : opt.dimension);
  const auto& e = s.ensemble();
  const bool cost = dim == Dimension::cost;
  const double planned = cost ? e.budget() : e.planned_duration();
  const double reserve = contingency_reserve(e, opt.percentile, dim);
  s.summary("reserve " + fmt(reserve));
  s.table("contingency",
          {{"dimension", "percentile", "planned", "percentile_value", "reserve"},
           {{cost ? "cost" : "duration", fmt(opt.percentile), fmt(planned), fmt(planned + reserve),
             fmt(reserve)}}},
          true);
}

void cmd_baseline(Session& s) {
  const RiskBaseline b = s.baseline();
  s.summary("sd_duration " + fmt(b.sigma_duration));
  s.summary("sd_cost " + fmt(b.sigma_cost));
  s.table("baseline", baseline_table(b), true);
  s.table("ari", ari_table(activity_risk_index(b, s.network())), false);
}

void cmd_control(Session& s, const Options& opt) {
  const ControlObservation obs = parse_observe(opt.observe);
  const auto& e = s.ensemble();
  check_observation(obs, e.budget());
  const TriadReport tr = triad(obs, e, opt.band);
  const RiskBaseline b = s.baseline();
  const ControlIndices idx =
      control_indices(obs, b, planned_value_curve(e.network(), e.planned(), opt.points));
  s.summary("scoi " + fmt(idx.scoi));
  s.summary("ccoi " + fmt(idx.ccoi));
  s.summary("schedule_status " + std::string(to_string(tr.schedule_status)));
  s.summary("cost_status " + std::string(to_string(tr.cost_status)));
  s.table("control", control_table(obs, idx), true);
  s.table("triad", triad_table(obs, tr), false);
}

SevmOptions sevm_options(const Options& opt) {
  SevmOptions so;
  so.neighbors = opt.neighbors;
  so.interval_percentiles = opt.interval;
  if (opt.estimator == "linear")
    so.estimator = Estimator::linear;
  else if (opt.estimator != "knn")
    config_error("--estimator must be knn or linear");
  return so;
}

void cmd_forecast(Session& s, const Options& opt) {
  const ControlObservation obs = parse_observe(opt.observe);
  const SevmForecast f = sevm_forecast(obs, s.ensemble(), sevm_options(opt));
  s.summary("eac_duration " + fmt(f.duration_estimate));
  s.summary("eac_cost " + fmt(f.cost_estimate));
  s.summary("p_late " + fmt(f.probability_late));
  s.summary("p_overrun " + fmt(f.probability_overrun));
  s.table("forecast", forecast_table(f), true);
  s.table("neighbors", neighbors_table(f), false);
}

void cmd_plot(Session& s, const Options& opt, std::ostream& out) {
  const auto kind = plot_kind_from(opt.kind);
  if (!kind) config_error("--kind must be one of pv, pdfcdf, scatter, ci_bars, srb_crb, triad, sevm");
  Chart chart;
  switch (*kind) {
    case PlotKind::pv: {
      const CpmResult cpm = plan(s.network());
      chart = pv_chart(planned_value_curve(s.network(), cpm, opt.points));
      break;
    }
    case PlotKind::pdfcdf: {
      const auto& e = s.ensemble();
      const bool cost = dimension_of(opt.dimension.empty() ? "duration" : opt.dimension) ==
                        Dimension::cost;
      chart = pdfcdf_chart(
          histogram_and_cdf(cost ? e.project_costs() : e.project_durations(), opt.bins),
          cost ? "cost" : "duration");
      break;
    }
    case PlotKind::scatter:
      chart = scatter_chart(s.ensemble().project_durations(), s.ensemble().project_costs(),
                            opt.bins);
      break;
    case PlotKind::ci_bars: chart = ci_bars_chart(sensitivity_report(s.ensemble())); break;
    case PlotKind::srb_crb: chart = srb_crb_chart(s.baseline()); break;
    case PlotKind::triad: {
      const ControlObservation obs = parse_observe(opt.observe);
      const auto& e = s.ensemble();
      triad(obs, e, opt.band);  // same preconditions as the report
      chart = triad_chart(cross_section(e, std::min(obs.earned_value / e.budget(), 1.0)), obs);
      break;
    }
    case PlotKind::sevm: {
      const ControlObservation obs = parse_observe(opt.observe);
      chart = sevm_chart(sevm_forecast(obs, s.ensemble(), sevm_options(opt)), obs);
      break;
    }
  }
  const std::string svg = render_svg(chart);
  if (s.to_files())
    write_text_file(s.out_path(std::string(to_string(*kind)) + ".svg"), svg);
  else
    out << svg;
}

void cmd_convert(const Options& opt, std::ostream& out) {
  if (opt.matrix.empty()) config_error("--matrix is required");
  const PrecedenceMatrix m = parse_matrix_csv(read_text_file(opt.matrix), opt.matrix);
  ProjectSpec spec;
  if (!opt.project.empty()) spec = parse_project(opt.project);
  apply_matrix(spec, m);
  const std::string text = render_project(spec);
  if (opt.output.empty())
    out << text;
  else
    write_text_file(opt.output, text);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Monte Carlo schedule and cost risk analysis for activity networks", "schedrisk"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto project = [&](CLI::App* c) { c->add_option("--project", opt.project, "Project file"); };
  auto output = [&](CLI::App* c) {
    c->add_option("--out", opt.out, "Directory for CSV/SVG output (default: standard output)");
  };
  auto simulation = [&](CLI::App* c) {
    project(c);
    output(c);
    c->add_option("--runs", opt.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
    c->add_option("--seed", opt.seed, "Random seed");
    c->add_option("--grid", opt.grid, "Trajectory grid points")->check(CLI::Range(2, 1000000));
    c->add_option("--threads", opt.threads, "Worker threads (0: all cores)");
    c->add_option("--isa", opt.isa, "Kernel variant: auto, scalar or avx2");
  };
  auto observe = [&](CLI::App* c) {
    c->add_option("--observe", opt.observe, "Control state t=<time>,ev=<earned value>,ac=<cost>");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a project and print its shape");
  project(validate_cmd);
  auto* cpm_cmd = app.add_subcommand("cpm", "Deterministic schedule with expected durations");
  project(cpm_cmd);
  output(cpm_cmd);
  auto* paths_cmd = app.add_subcommand("paths", "Path matrix of the network");
  project(paths_cmd);
  output(paths_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "Run the simulation and tabulate percentiles");
  simulation(sim_cmd);
  sim_cmd->add_option("--bins", opt.bins, "Histogram bins")->check(CLI::PositiveNumber);
  auto* idx_cmd = app.add_subcommand("indices", "Criticality, cruciality and sensitivity indices");
  simulation(idx_cmd);
  idx_cmd->add_option("--correlation", opt.correlation, "pearson or spearman");
  auto* cont_cmd = app.add_subcommand("contingency", "Contingency reserve at a percentile");
  simulation(cont_cmd);
  cont_cmd->add_option("--percentile", opt.percentile, "Confidence percentile");
  cont_cmd->add_option("--dimension", opt.dimension, "cost or duration");
  auto* base_cmd = app.add_subcommand("baseline", "Schedule and cost risk baselines");
  simulation(base_cmd);
  base_cmd->add_option("--points", opt.points, "Baseline grid points")->check(CLI::Range(2, 1000000));
  auto* ctl_cmd = app.add_subcommand("control", "Control indices and Triad report");
  simulation(ctl_cmd);
  observe(ctl_cmd);
  ctl_cmd->add_option("--band", opt.band, "Triad 'on' band in percentile points");
  ctl_cmd->add_option("--points", opt.points, "Baseline grid points")->check(CLI::Range(2, 1000000));
  auto* fc_cmd = app.add_subcommand("forecast", "Nearest-neighbour forecast of final duration and cost");
  simulation(fc_cmd);
  observe(fc_cmd);
  fc_cmd->add_option("--neighbors", opt.neighbors, "Neighbours (0: min(500, 5% of runs))");
  fc_cmd->add_option("--estimator", opt.estimator, "knn or linear");
  fc_cmd->add_option("--interval", opt.interval, "Interval percentiles")->delimiter(',');
  auto* plot_cmd = app.add_subcommand("plot", "Write an SVG chart");
  simulation(plot_cmd);
  observe(plot_cmd);
  plot_cmd->add_option("--kind", opt.kind, "pv, pdfcdf, scatter, ci_bars, srb_crb, triad or sevm")
      ->required();
  plot_cmd->add_option("--dimension", opt.dimension, "pdfcdf quantity: duration or cost");
  plot_cmd->add_option("--bins", opt.bins, "Histogram bins")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--neighbors", opt.neighbors, "Neighbours for sevm");
  plot_cmd->add_option("--estimator", opt.estimator, "knn or linear");
  plot_cmd->add_option("--band", opt.band, "Triad band");
  plot_cmd->add_option("--points", opt.points, "Grid points for pv/srb_crb")
      ->check(CLI::Range(2, 1000000));
  auto* conv_cmd =
      app.add_subcommand("convert-matrix", "Import a CSV precedence matrix into a project file");
  conv_cmd->add_option("--matrix", opt.matrix, "CSV matrix")->required();
  conv_cmd->add_option("--project", opt.project, "Project whose precedence is replaced");
  conv_cmd->add_option("--output", opt.output, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return 3;
  }

  try {
    Session s(opt, out, err);
    if (*validate_cmd) cmd_validate(s, out);
    else if (*cpm_cmd) cmd_cpm(s);
    else if (*paths_cmd) cmd_paths(s);
    else if (*sim_cmd) cmd_simulate(s, opt);
    else if (*idx_cmd) cmd_indices(s, opt);
    else if (*cont_cmd) cmd_contingency(s, opt);
    else if (*base_cmd) cmd_baseline(s);
    else if (*ctl_cmd) cmd_control(s, opt);
    else if (*fc_cmd) cmd_forecast(s, opt);
    else if (*plot_cmd) cmd_plot(s, opt, out);
    else if (*conv_cmd) cmd_convert(opt, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace schedrisk
