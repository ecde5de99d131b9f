#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pla/design.hpp"
#include "pla/io.hpp"
#include "pla/response.hpp"
#include "pla/sequence.hpp"
#include "pla/simulate.hpp"

namespace pla::cli {

struct CommonOptions {
  double rabi = default_rabi;      // rad/s, used for catalog-name inputs
  double rms_ratio = 1.21e-2;      // sigma_beta / Omega
  std::uint64_t seed = 0;
  int threads = 0;                 // 0 = all hardware threads
  std::string out;                 // empty = stdout
  bool degrees = false;

  int resolved_threads() const {
    if (const char* env = std::getenv("PLA_FORGE_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) return n;
    }
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }
};

namespace detail {

inline void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

inline void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--rabi", opt.rabi, "Rabi frequency in rad/s");
  cmd->add_option("--rms-ratio", opt.rms_ratio, "RMS error over Rabi frequency");
  cmd->add_option("--seed", opt.seed, "RNG seed");
  cmd->add_option("--threads", opt.threads,
                  "worker threads (0 = all; PLA_FORGE_THREADS overrides)");
  cmd->add_option("--out", opt.out, "output path (default stdout)");
  cmd->add_flag("--degrees", opt.degrees,
                "interpret input phases as degrees (conversion on input only)");
}

inline int auto_points(double lo, double hi) {
  // 20 points per decade on log grids
  return std::max(2, static_cast<int>(std::lround(
                         20.0 * std::log10(hi / lo))) + 1);
}

}  // namespace detail

/// Dispatches one invocation; returns the process exit code.
/// 0 = success, 1 = invalid configuration or input, 2 = solver found nothing.
inline int run(const std::vector<std::string>& args) {
  CLI::App app{"composite pulse-train design and noise response toolkit"};
  app.require_subcommand(1);

  CommonOptions opt;

  // catalog
  auto* cmd_catalog = app.add_subcommand("catalog", "list built-in sequences");
  detail::add_common(cmd_catalog, opt);

  // design
  auto* cmd_design =
      app.add_subcommand("design", "solve the drift-suppression criteria");
  int design_n = 1;
  int design_pulses = 5;
  int design_restarts = 64;
  double design_tol = 1e-9;
  cmd_design->add_option("--n", design_n, "criteria order")->required();
  cmd_design->add_option("--pulses", design_pulses, "pulse count (odd)")
      ->required();
  cmd_design->add_option("--restarts", design_restarts, "solver restarts");
  cmd_design->add_option("--tol", design_tol, "residual threshold");
  detail::add_common(cmd_design, opt);

  // verify
  auto* cmd_verify =
      app.add_subcommand("verify", "report criteria residuals of a sequence");
  std::string verify_input;
  int verify_n = 1;
  double verify_tol = 1e-9;
  cmd_verify->add_option("input", verify_input, "sequence JSON or catalog name")
      ->required();
  cmd_verify->add_option("--n", verify_n, "criteria order")->required();
  cmd_verify->add_option("--tol", verify_tol, "pass/fail threshold");
  detail::add_common(cmd_verify, opt);

  // filter
  auto* cmd_filter =
      app.add_subcommand("filter", "tabulate the amplitude filter function");
  std::string filter_input;
  double fmin = 0.0, fmax = 0.0;
  int fpoints = 0;
  cmd_filter->add_option("input", filter_input, "sequence JSON or catalog name")
      ->required();
  cmd_filter->add_option("--fmin", fmin, "lowest frequency in Hz");
  cmd_filter->add_option("--fmax", fmax, "highest frequency in Hz");
  cmd_filter->add_option("--points", fpoints, "sample count (default 20/decade)");
  detail::add_common(cmd_filter, opt);

  // theory
  auto* cmd_theory = app.add_subcommand(
      "theory", "perturbative infidelity prediction across a band scan");
  std::string theory_input;
  double th_fc_start = 0.0, th_fc_stop = 0.0;
  int th_fc_points = 20;
  cmd_theory->add_option("input", theory_input, "sequence JSON or catalog name")
      ->required();
  cmd_theory->add_option("--fc-start", th_fc_start, "first band center in Hz");
  cmd_theory->add_option("--fc-stop", th_fc_stop, "last band center in Hz");
  cmd_theory->add_option("--fc-points", th_fc_points, "band centers");
  detail::add_common(cmd_theory, opt);

  // simulate
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo frequency scan of the average infidelity");
  std::string sim_input;
  double sim_fc_start = 0.0, sim_fc_stop = 0.0;
  int sim_fc_points = 20;
  int sim_trials = 2000;
  int sim_steps = 256;
  double sim_band = 2.0;
  int sim_bins = 16;
  cmd_sim->add_option("input", sim_input, "sequence JSON or catalog name")
      ->required();
  cmd_sim->add_option("--fc-start", sim_fc_start, "first band center in Hz");
  cmd_sim->add_option("--fc-stop", sim_fc_stop, "last band center in Hz");
  cmd_sim->add_option("--fc-points", sim_fc_points, "band centers");
  cmd_sim->add_option("--trials", sim_trials, "ensemble size per point");
  cmd_sim->add_option("--steps-per-pulse", sim_steps, "integrator steps per pulse");
  cmd_sim->add_option("--band", sim_band, "noise bandwidth in Hz");
  cmd_sim->add_option("--bins", sim_bins, "spectral bins per band");
  detail::add_common(cmd_sim, opt);

  // regime
  auto* cmd_regime = app.add_subcommand(
      "regime", "infidelity-ratio map and analytic regime boundaries");
  std::string regime_ref = "F1", regime_alt = "PLA2_1", regime_grid = "64x64";
  // default window covers the asymptotic regime the boundary formulas model
  double sigma_min = 1e-4, sigma_max = 1e-1, nu_min = 1e-3, nu_max = 0.3;
  cmd_regime->add_option("--ref", regime_ref, "reference sequence");
  cmd_regime->add_option("--alt", regime_alt, "alternative sequence");
  cmd_regime->add_option("--grid", regime_grid, "grid size WxH");
  cmd_regime->add_option("--sigma-min", sigma_min, "lowest sigma/Omega");
  cmd_regime->add_option("--sigma-max", sigma_max, "highest sigma/Omega");
  cmd_regime->add_option("--nu-min", nu_min, "lowest omega/Omega");
  cmd_regime->add_option("--nu-max", nu_max, "highest omega/Omega");
  detail::add_common(cmd_regime, opt);

  std::vector<const char*> argv;
  argv.push_back("pla-forge");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (cmd_catalog->parsed()) {
      io::json arr = io::json::array();
      for (const auto& seq : catalog(opt.rabi)) {
        arr.push_back(io::sequence_to_json(seq));
      }
      detail::write_output(arr.dump(2) + "\n", opt.out);
      return 0;
    }

    if (cmd_design->parsed()) {
      SolverConfig cfg;
      cfg.n = design_n;
      cfg.pulses = design_pulses;
      cfg.restarts = design_restarts;
      cfg.tol = design_tol;
      cfg.seed = opt.seed;
      const auto found = solve_pla(cfg, opt.rabi);
      if (!found) {
        std::cerr << "error: no solution found after " << cfg.restarts
                  << " restarts (does not prove non-existence)\n";
        return 2;
      }
      detail::write_output(io::sequence_to_json(*found).dump(2) + "\n",
                           opt.out);
      return 0;
    }

    if (cmd_verify->parsed()) {
      const PulseSequence seq =
          io::resolve_sequence(verify_input, opt.rabi, opt.degrees);
      const ConstraintReport rep = check_pla(seq, verify_n);
      detail::write_output(
          io::report_to_json(seq.name(), rep, verify_tol).dump(2) + "\n",
          opt.out);
      return 0;
    }

    if (cmd_filter->parsed()) {
      const PulseSequence seq =
          io::resolve_sequence(filter_input, opt.rabi, opt.degrees);
      const double lo = fmin > 0.0 ? fmin : 1e-4 * seq.rabi() / two_pi;
      const double hi = fmax > 0.0 ? fmax : 10.0 * seq.rabi() / two_pi;
      const int pts = fpoints > 1 ? fpoints : detail::auto_points(lo, hi);
      io::CsvWriter csv("f_hz,h");
      for (double f : log_space(lo, hi, pts)) {
        csv.row({f, filter_function(seq, f)});
      }
      detail::write_output(csv.str(), opt.out);
      return 0;
    }

    if (cmd_theory->parsed()) {
      const PulseSequence seq =
          io::resolve_sequence(theory_input, opt.rabi, opt.degrees);
      const double lo =
          th_fc_start > 0.0 ? th_fc_start : 1e-3 * seq.rabi() / two_pi;
      const double hi = th_fc_stop > 0.0 ? th_fc_stop : seq.rabi() / two_pi;
      NoiseModel model;
      model.rms = opt.rms_ratio * seq.rabi();
      model.seed = opt.seed;
      io::CsvWriter csv("f_hz,first_order,dc2,dc_quad,total");
      for (double fc : log_space(lo, hi, th_fc_points)) {
        const TheoryPrediction p = theory_curve(seq, model.at_center(fc));
        csv.row({fc, p.first_order, p.dc_second_order, p.dc_quadrature,
                 p.total});
      }
      detail::write_output(csv.str(), opt.out);
      return 0;
    }

    if (cmd_sim->parsed()) {
      const PulseSequence seq =
          io::resolve_sequence(sim_input, opt.rabi, opt.degrees);
      const double lo =
          sim_fc_start > 0.0 ? sim_fc_start : 1e-3 * seq.rabi() / two_pi;
      const double hi = sim_fc_stop > 0.0 ? sim_fc_stop : seq.rabi() / two_pi;
      NoiseModel model;
      model.rms = opt.rms_ratio * seq.rabi();
      model.f_band = sim_band;
      model.bins = sim_bins;
      model.seed = opt.seed;
      const auto centers = log_space(lo, hi, sim_fc_points);
      const ScanResult scan = mc_scan(seq, model, centers, sim_trials,
                                      sim_steps, opt.resolved_threads());
      io::CsvWriter csv("fc_hz,omega_over_Omega,mean_infidelity,stderr,trials");
      for (const auto& row : scan.rows) {
        csv.row({row.f_center, two_pi * row.f_center / seq.rabi(), row.mean,
                 row.standard_error, static_cast<double>(row.trials)});
      }
      detail::write_output(csv.str(), opt.out);
      return 0;
    }

    if (cmd_regime->parsed()) {
      const PulseSequence ref = io::resolve_sequence(regime_ref, opt.rabi);
      const PulseSequence alt = io::resolve_sequence(regime_alt, opt.rabi);
      const auto sep = regime_grid.find('x');
      if (sep == std::string::npos) {
        throw std::invalid_argument("regime: --grid must look like 64x64");
      }
      const int w = std::stoi(regime_grid.substr(0, sep));
      const int h = std::stoi(regime_grid.substr(sep + 1));
      if (w < 2 || h < 2) {
        throw std::invalid_argument("regime: grid must be at least 2x2");
      }
      const auto nu_grid = log_space(nu_min, nu_max, w);
      const auto sigma_grid = log_space(sigma_min, sigma_max, h);
      const auto ratios = regime_map(ref, alt, nu_grid, sigma_grid);

      io::CsvWriter matrix("sigma_over_Omega,omega_over_Omega,ratio");
      for (size_t i = 0; i < sigma_grid.size(); ++i) {
        for (size_t j = 0; j < nu_grid.size(); ++j) {
          matrix.row({sigma_grid[i], nu_grid[j], ratios[i][j]});
        }
      }
      io::CsvWriter boundary(
          "sigma_over_Omega,omega_lower_over_Omega,omega_upper_over_Omega,"
          "empty");
      for (double s : sigma_grid) {
        const RegimeBounds b = regime_boundaries(ref, alt, s);
        boundary.row({s, b.lower_nu, b.upper_nu, b.empty() ? 1.0 : 0.0});
      }
      if (opt.out.empty()) {
        std::cout << matrix.str() << '\n' << boundary.str();
      } else {
        detail::write_output(matrix.str(), opt.out);
        std::string bpath = opt.out;
        const auto dot = bpath.rfind(".csv");
        if (dot != std::string::npos && dot == bpath.size() - 4) {
          bpath = bpath.substr(0, dot);
        }
        detail::write_output(boundary.str(), bpath + ".boundary.csv");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}

}  // namespace pla::cli
