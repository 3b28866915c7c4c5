#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "delaygain/consensus.hpp"
#include "delaygain/curves.hpp"
#include "delaygain/dde_sim.hpp"
#include "delaygain/delay_analysis.hpp"
#include "delaygain/errors.hpp"
#include "delaygain/io.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

std::string read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw delaygain::ValidationError("parse-error", "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json provenance(const std::string& input_bytes) {
  return json{{"input_hash", delaygain::fnv1a_hex(input_bytes)},
              {"version", kVersion},
              {"tolerances",
               {{"root", delaygain::tolerances().root},
                {"eig_residual", delaygain::tolerances().eig_residual}}}};
}

json report_json(const delaygain::SystemDelayAnalysis& a,
                 const std::string& input_bytes) {
  json modes = json::array();
  for (const auto& m : a.modes) {
    modes.push_back({{"re", m.alpha.real()},
                     {"im", m.alpha.imag()},
                     {"tau_bar", m.tau_bar},
                     {"tau_star", m.tau_star},
                     {"tau_tilde", m.tau_tilde},
                     {"eta", m.eta},
                     {"in_cone", m.in_cone}});
  }
  auto one_based = [](const std::vector<int>& v) {
    json out = json::array();
    for (int i : v) out.push_back(i + 1);
    return out;
  };
  return json{
      {"schema", "1"},
      {"provenance", provenance(input_bytes)},
      {"tau_bar", a.tau_bar},
      {"rho0", a.rho0},
      {"classification",
       {{"i1", one_based(a.classification.i1)},
        {"i_in", one_based(a.classification.i_in)},
        {"i_out", one_based(a.classification.i_out)},
        {"can_accelerate", a.classification.can_accelerate}}},
      {"tau_tilde", a.tau_tilde},
      {"tau_star_bracket",
       {{"lo", a.tau_star_bracket.lo}, {"hi", a.tau_star_bracket.hi}}},
      {"tau_star", a.tau_star},
      {"rho_star", a.rho_star},
      {"candidates", a.candidates},
      {"rho_bound_exceeded", a.rho_bound_exceeded},
      {"modes", modes}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw delaygain::ValidationError("parse-error", "cannot open " + path);
  f << text;
}

std::string trajectory_csv(const delaygain::Trajectory& t) {
  std::ostringstream out;
  out << "t";
  for (int j = 1; j <= t.dimension; ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    out << delaygain::format_double(t.times[i]);
    for (int j = 0; j < t.dimension; ++j)
      out << "," << delaygain::format_double(t.states[i][j]);
    out << "\n";
  }
  return out.str();
}

int cmd_analyze(const std::string& input_path) {
  std::string bytes = read_source(input_path);
  delaygain::Spectrum s =
      delaygain::spectrum_of_document(delaygain::parse_input_document(bytes));
  std::cout << report_json(delaygain::analyze(s), bytes).dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& input_path, double tau_max, int samples) {
  std::string bytes = read_source(input_path);
  delaygain::Spectrum s =
      delaygain::spectrum_of_document(delaygain::parse_input_document(bytes));
  auto profile = delaygain::rate_profile(s, tau_max, samples);
  double rho0 = profile.rho[0];
  std::cout << "tau,rho,rho_over_rho0";
  for (std::size_t i = 1; i <= profile.per_mode_rho.size(); ++i)
    std::cout << ",rho_" << i;
  std::cout << "\n";
  for (std::size_t j = 0; j < profile.taus.size(); ++j) {
    std::cout << delaygain::format_double(profile.taus[j]) << ","
              << delaygain::format_double(profile.rho[j]) << ","
              << delaygain::format_double(profile.rho[j] / rho0);
    for (const auto& row : profile.per_mode_rho)
      std::cout << "," << delaygain::format_double(row[j]);
    std::cout << "\n";
  }
  return 0;
}

int cmd_curves(const std::string& curve, double c, int samples) {
  delaygain::CurveSamples cs;
  if (curve == "lambda") {
    cs = delaygain::lambda_curve(samples);
  } else if (curve == "c0") {
    cs = delaygain::c0_curve(samples);
  } else if (c == 0.0) {
    cs = delaygain::c0_curve(samples);
  } else {
    cs = delaygain::level_set(c, samples);
  }
  std::cout << "x,y\n";
  for (const auto& [x, y] : cs.points)
    std::cout << delaygain::format_double(x) << ","
              << delaygain::format_double(y) << "\n";
  return 0;
}

int cmd_simulate(const std::string& input_path, double tau, double horizon,
                 int steps, const std::vector<double>& phi,
                 const std::string& traj_out) {
  std::string bytes = read_source(input_path);
  auto doc = delaygain::parse_input_document(bytes);
  if (!doc.matrix)
    throw delaygain::ValidationError("parse-error",
                                     "simulate needs a matrix document");
  const Eigen::MatrixXd& a = *doc.matrix;
  if (static_cast<Eigen::Index>(phi.size()) != a.rows())
    throw delaygain::ValidationError("domain-error",
                                     "--phi length must match the matrix");
  Eigen::VectorXd x0 =
      Eigen::Map<const Eigen::VectorXd>(phi.data(), phi.size());

  if (horizon <= 0.0) {
    double rho0 = 1.0;
    try {
      rho0 = std::abs(delaygain::Spectrum::of_matrix(a)[0].real());
    } catch (const std::exception&) {
    }
    horizon = std::max(20.0 / rho0, 10.0 * std::max(tau, 1e-3));
  }

  delaygain::Trajectory traj =
      tau == 0.0
          ? delaygain::simulate_ode(a, x0, horizon,
                                    std::max(steps, 4) * 50)
          : delaygain::simulate(a, tau, delaygain::PreShape::constant(x0),
                                horizon, steps);

  json summary{{"schema", "1"},
               {"provenance", provenance(bytes)},
               {"tau", tau},
               {"horizon", horizon},
               {"beyond_critical", traj.beyond_critical}};
  try {
    summary["empirical_rate"] = delaygain::estimate_decay_rate(traj, 0.5);
  } catch (const std::exception& e) {
    summary["empirical_rate"] = nullptr;
    summary["rate_note"] = e.what();
  }
  try {
    delaygain::Spectrum s = delaygain::Spectrum::of_matrix(a);
    if (tau < delaygain::critical_delay(s))
      summary["analytic_rate"] = delaygain::rate_of_convergence(s, tau).first;
  } catch (const std::exception&) {
  }

  write_text(traj_out, trajectory_csv(traj));
  // Keep stdout single-format: the summary moves to stderr when the CSV
  // already occupies stdout.
  (traj_out == "-" ? std::cerr : std::cout) << summary.dump(2) << "\n";
  return 0;
}

int cmd_consensus(const std::string& digraph_path,
                  const std::vector<double>& refs, const std::string& tau_arg,
                  double horizon, const std::string& traj_out) {
  std::string bytes = read_source(digraph_path);
  delaygain::Digraph g = delaygain::load_digraph(bytes);
  Eigen::VectorXd r =
      Eigen::Map<const Eigen::VectorXd>(refs.data(), refs.size());

  double tau;
  if (tau_arg == "auto") {
    delaygain::Spectrum s = delaygain::Spectrum::of_matrix(
        delaygain::reduce(delaygain::laplacian(g)).reduced);
    tau = delaygain::optimize_rate(s).first;
  } else {
    try {
      std::size_t pos = 0;
      tau = std::stod(tau_arg, &pos);
      if (pos != tau_arg.size()) throw std::invalid_argument(tau_arg);
    } catch (const std::exception&) {
      throw delaygain::ValidationError("parse-error",
                                       "--tau must be a number or 'auto'");
    }
  }

  auto [traj, report] = delaygain::consensus_run(g, r, tau, horizon);
  json out{{"schema", "1"},
           {"provenance", provenance(bytes)},
           {"tau", report.tau},
           {"consensus_value", report.consensus_value},
           {"empirical_rate", report.empirical_rate},
           {"analytic_rate", report.analytic_rate},
           {"analysis", report_json(report.analysis, bytes)}};
  write_text(traj_out, trajectory_csv(traj));
  (traj_out == "-" ? std::cerr : std::cout) << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-rate analysis of linear time-delayed systems"};
  app.require_subcommand(1);

  double tol_root = delaygain::tolerances().root;
  double tol_eig = delaygain::tolerances().eig_residual;
  app.add_option("--tol-root", tol_root, "Root-finding tolerance");
  app.add_option("--tol-eig", tol_eig, "Eigenpair residual tolerance");

  std::string input = "-";
  auto* analyze = app.add_subcommand(
      "analyze", "Full delay analysis of a matrix or spectrum");
  analyze->add_option("input", input, "JSON document path or -");

  std::string sweep_input = "-";
  double tau_max = 1.0;
  int sweep_samples = 101;
  auto* sweep = app.add_subcommand("sweep", "Rate-vs-delay CSV sweep");
  sweep->add_option("input", sweep_input, "JSON document path or -");
  sweep->add_option("--tau-max", tau_max, "Largest delay in the sweep");
  sweep->add_option("--samples", sweep_samples, "Number of grid points");

  std::string curve = "lambda";
  double level_c = 1.0;
  int curve_samples = 201;
  auto* curves = app.add_subcommand("curves", "Sampled geometric curves");
  curves->add_option("--curve", curve, "lambda, c0, or cc")
      ->check(CLI::IsMember({"lambda", "c0", "cc"}));
  curves->add_option("--c", level_c, "Level value for --curve cc");
  curves->add_option("--samples", curve_samples, "Number of samples");

  std::string sim_input = "-";
  double sim_tau = 0.0, sim_horizon = 0.0;
  int sim_steps = 200;
  std::vector<double> sim_phi;
  std::string sim_traj_out = "-";
  auto* simulate = app.add_subcommand("simulate", "Time-domain integration");
  simulate->add_option("input", sim_input, "JSON matrix document path or -");
  simulate->add_option("--tau", sim_tau, "Constant delay")->required();
  simulate->add_option("--horizon", sim_horizon, "Final time (auto if <= 0)");
  simulate->add_option("--steps", sim_steps, "Integration steps per delay");
  simulate->add_option("--phi", sim_phi, "Constant preshape vector")
      ->required();
  simulate->add_option("--traj-out", sim_traj_out,
                       "Trajectory CSV destination (- for stdout)");

  std::string digraph_path = "-";
  std::vector<double> refs;
  std::string cons_tau = "0";
  double cons_horizon = 0.0;
  std::string cons_traj_out = "-";
  auto* consensus =
      app.add_subcommand("consensus", "Delayed Laplacian agreement run");
  consensus->add_option("digraph", digraph_path, "Digraph JSON path or -");
  consensus->add_option("--refs", refs, "Reference value per node")
      ->required();
  consensus->add_option("--tau", cons_tau, "Delay, or 'auto' for the optimum");
  consensus->add_option("--horizon", cons_horizon, "Final time (auto if <= 0)");
  consensus->add_option("--traj-out", cons_traj_out,
                        "Trajectory CSV destination (- for stdout)");

  CLI11_PARSE(app, argc, argv);

  delaygain::tolerances().root = tol_root;
  delaygain::tolerances().eig_residual = tol_eig;

  try {
    if (*analyze) return cmd_analyze(input);
    if (*sweep) return cmd_sweep(sweep_input, tau_max, sweep_samples);
    if (*curves) return cmd_curves(curve, level_c, curve_samples);
    if (*simulate)
      return cmd_simulate(sim_input, sim_tau, sim_horizon, sim_steps, sim_phi,
                          sim_traj_out);
    if (*consensus)
      return cmd_consensus(digraph_path, refs, cons_tau, cons_horizon,
                           cons_traj_out);
  } catch (const delaygain::ValidationError& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"detail", e.what()}}
                     .dump()
              << "\n";
    return 2;
  } catch (const delaygain::NumericalError& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"detail", e.what()}}
                     .dump()
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"detail", e.what()}}
                     .dump()
              << "\n";
    return 3;
  }
  return 0;
}
