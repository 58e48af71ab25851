// mfbm: batch CLI for the mixed fractional Brownian motion toolkit.
//
// Subcommands: constants, solve, simulate, filter, estimate, montecarlo,
// diagnose.  Every output embeds (version, seed, H, n, T) so a run can be
// replayed exactly.  Exit codes: 0 success, 2 input/domain error, 3 numerical
// failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "mfbm/errors.hpp"
#include "mfbm/estimation.hpp"
#include "mfbm/filtering.hpp"
#include "mfbm/io.hpp"
#include "mfbm/kernel_family.hpp"
#include "mfbm/paths.hpp"

namespace {

using nlohmann::json;

std::string out_dir() {
  if (const char* env = std::getenv("MFBM_OUTDIR")) return env;
  return ".";
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void emit_gnuplot(const std::string& dir, const std::string& name,
                  const std::string& csv, const std::string& plot_expr) {
  std::string script = "set datafile separator ','\nset key autotitle columnhead\n";
  script += "plot '" + csv + "' " + plot_expr + "\n";
  mfbm::io::write_text(join(dir, name), script);
}

int run(int argc, char** argv) {
  CLI::App app{"mixed fractional Brownian motion toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string dir = out_dir();
  app.add_option("--out", dir, "output directory (default MFBM_OUTDIR or '.')");

  // --- constants ---
  auto* c_cmd = app.add_subcommand("constants", "dump c_H, lambda_H, beta_H as JSON");
  double c_H = 0.5;
  c_cmd->add_option("--H", c_H, "Hurst exponent in (0,1]")->required();

  // --- solve ---
  auto* s_cmd = app.add_subcommand("solve", "solve the kernel family, write CSV+JSON");
  double s_H = 0.7, s_T = 1.0;
  std::size_t s_n = 128;
  bool s_deriv = true, s_tilde = false;
  std::string s_name = "kernel";
  s_cmd->add_option("--H", s_H)->required();
  s_cmd->add_option("--t", s_T, "horizon t_end");
  s_cmd->add_option("--n", s_n, "grid panels (>= 8)");
  s_cmd->add_flag("--derivatives,!--no-derivatives", s_deriv,
                  "build or skip the g_dot/R/G fields (default on)");
  s_cmd->add_flag("--tilde", s_tilde, "solve the tilde family (H < 1/2)");
  s_cmd->add_option("--name", s_name, "output base name");

  // --- simulate ---
  auto* m_cmd = app.add_subcommand("simulate", "exact path simulation, write CSV+JSON");
  double m_H = 0.7, m_T = 1.0;
  std::size_t m_n = 256, m_paths = 1;
  std::uint64_t m_seed = 1;
  std::optional<double> m_theta;
  std::string m_name = "paths";
  m_cmd->add_option("--H", m_H)->required();
  m_cmd->add_option("--T", m_T);
  m_cmd->add_option("--n", m_n);
  m_cmd->add_option("--paths", m_paths);
  m_cmd->add_option("--seed", m_seed);
  double m_theta_value = 0.0;
  auto* m_theta_opt = m_cmd->add_option("--theta", m_theta_value, "drift (adds Y columns)");
  m_cmd->add_option("--name", m_name);

  // --- filter ---
  auto* f_cmd = app.add_subcommand("filter", "martingale/innovation/density of a path");
  double f_H = 0.85, f_T = 1.0;
  std::size_t f_n = 256;
  std::uint64_t f_seed = 1;
  std::string f_density = "auto", f_input, f_name = "filter";
  f_cmd->add_option("--H", f_H)->required();
  f_cmd->add_option("--T", f_T);
  f_cmd->add_option("--n", f_n);
  f_cmd->add_option("--seed", f_seed, "seed used when no --input is given");
  f_cmd->add_option("--density", f_density, "wiener | fractional | auto");
  f_cmd->add_option("--input", f_input, "paths CSV to read X from (first path used)");
  f_cmd->add_option("--name", f_name);

  // --- estimate ---
  auto* e_cmd = app.add_subcommand("estimate", "drift MLE on one observed path");
  double e_H = 0.7, e_T = 1.0;
  std::size_t e_n = 256;
  std::uint64_t e_seed = 1;
  double e_theta = 1.0;
  std::string e_input, e_name = "estimate";
  e_cmd->add_option("--H", e_H)->required();
  e_cmd->add_option("--T", e_T);
  e_cmd->add_option("--n", e_n);
  e_cmd->add_option("--seed", e_seed);
  e_cmd->add_option("--theta", e_theta, "true drift for the self-generated path");
  e_cmd->add_option("--input", e_input, "paths CSV with Y columns");
  e_cmd->add_option("--name", e_name);

  // --- montecarlo ---
  auto* mc_cmd = app.add_subcommand("montecarlo", "replicated MLE experiment");
  double mc_H = 0.7, mc_theta = 1.0;
  std::vector<double> mc_T{1.0};
  std::size_t mc_n = 256, mc_reps = 200;
  std::uint64_t mc_seed = 1;
  std::string mc_name = "montecarlo";
  bool mc_gnuplot = false;
  mc_cmd->add_option("--H", mc_H)->required();
  mc_cmd->add_option("--theta", mc_theta);
  mc_cmd->add_option("--T", mc_T, "one or more horizons");
  mc_cmd->add_option("--n", mc_n);
  mc_cmd->add_option("--reps", mc_reps);
  mc_cmd->add_option("--seed", mc_seed);
  mc_cmd->add_option("--name", mc_name);
  mc_cmd->add_flag("--emit-gnuplot", mc_gnuplot, "write a companion gnuplot script");

  // --- diagnose ---
  auto* d_cmd = app.add_subcommand("diagnose", "p-variation sums over dyadic levels");
  double d_H = 0.7, d_T = 1.0, d_p = 2.0;
  std::size_t d_paths = 1;
  int d_level = 8;
  std::uint64_t d_seed = 1;
  std::string d_process = "X", d_name = "variation";
  d_cmd->add_option("--H", d_H)->required();
  d_cmd->add_option("--T", d_T);
  d_cmd->add_option("--p", d_p, "variation order (default 2)");
  d_cmd->add_option("--max-level", d_level);
  d_cmd->add_option("--paths", d_paths, "average over this many paths");
  d_cmd->add_option("--seed", d_seed);
  d_cmd->add_option("--process", d_process, "X | BH | B");
  d_cmd->add_option("--name", d_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*c_cmd) {
    const json j = mfbm::io::constants_json(mfbm::constants(c_H));
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (*s_cmd) {
    mfbm::FamilyOptions opts;
    opts.derivatives = s_deriv;
    const mfbm::KernelFamily fam = s_tilde
                                       ? mfbm::solve_g_tilde_family(s_H, s_T, s_n, opts)
                                       : mfbm::solve_g_family(s_H, s_T, s_n, opts);
    const std::string csv = join(dir, s_name + ".csv");
    mfbm::io::write_kernel_csv(fam, csv);
    mfbm::io::write_text(join(dir, s_name + ".json"),
                         mfbm::io::kernel_header_json(fam).dump(2) + "\n");
    std::cout << "wrote " << csv << "\n";
    return 0;
  }

  if (*m_cmd) {
    if (*m_theta_opt) m_theta = m_theta_value;
    const mfbm::Grid grid = mfbm::Grid::uniform(m_n, m_T);
    const mfbm::PathSample sample = mfbm::simulate(m_H, grid, m_paths, m_seed, m_theta);
    const std::string csv = join(dir, m_name + ".csv");
    mfbm::io::write_paths_csv(sample, csv);
    mfbm::io::write_text(join(dir, m_name + ".json"),
                         mfbm::io::paths_sidecar_json(sample).dump(2) + "\n");
    std::cout << "wrote " << csv << "\n";
    return 0;
  }

  if (*f_cmd) {
    const mfbm::Grid grid = mfbm::Grid::uniform(f_n, f_T);
    std::string route = f_density;
    if (route == "auto") {
      route = (f_H < 0.25) ? "fractional" : "wiener";
    }
    if (route != "wiener" && route != "fractional") {
      throw CLI::ValidationError("--density", "must be wiener, fractional or auto");
    }
    if (route == "wiener" && !(f_H == 0.5 || f_H > 0.75)) {
      throw mfbm::UnsupportedRegimeError(
          "filter: the Wiener density needs H = 1/2 or H > 3/4; measures are "
          "singular for 1/4 <= H <= 3/4 (H != 1/2)");
    }
    if (route == "fractional" && !(f_H < 0.25)) {
      throw mfbm::UnsupportedRegimeError(
          "filter: the fractional density needs H < 1/4; measures are singular "
          "for 1/4 <= H <= 3/4 (H != 1/2)");
    }
    Eigen::VectorXd X;
    if (!f_input.empty()) {
      X = mfbm::io::read_paths_csv(f_input, "X", grid).row(0).transpose();
    } else {
      X = mfbm::simulate(f_H, grid, 1, f_seed).X.row(0).transpose();
    }
    const mfbm::KernelFamily fam =
        (route == "fractional") ? mfbm::solve_g_tilde_family(f_H, f_T, f_n)
                                : mfbm::solve_g_family(f_H, f_T, f_n);
    const mfbm::Filter filter(fam);
    const mfbm::FilterOutput out = filter.run(X);
    const std::string csv = join(dir, f_name + ".csv");
    mfbm::io::write_filter_csv(out, csv);
    json j = mfbm::io::filter_json(out, f_seed);
    if (f_H == 0.5) {
      // diagnostic: with g = 1/2 the martingale is exactly half the path
      double dev = 0.0;
      for (Eigen::Index i = 0; i < X.size(); ++i) {
        dev = std::max(dev, std::abs(out.M(i) - 0.5 * X(i)));
      }
      j["diag_max_abs_M_minus_halfX"] = dev;
    }
    mfbm::io::write_text(join(dir, f_name + ".json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (*e_cmd) {
    const mfbm::Grid grid = mfbm::Grid::uniform(e_n, e_T);
    Eigen::VectorXd Y;
    if (!e_input.empty()) {
      Y = mfbm::io::read_paths_csv(e_input, "Y", grid).row(0).transpose();
    } else {
      Y = mfbm::simulate(e_H, grid, 1, e_seed, e_theta).Y.row(0).transpose();
    }
    mfbm::FamilyOptions opts;
    opts.derivatives = false;
    const mfbm::KernelFamily fam = mfbm::solve_g_family(e_H, e_T, e_n, opts);
    const mfbm::EstimatorReport rep = mfbm::mle_theta(fam, Y);
    const json j = mfbm::io::estimator_json(rep, e_seed);
    mfbm::io::write_text(join(dir, e_name + ".json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (*mc_cmd) {
    std::string rows;
    json all = json::array();
    bool header = true;
    for (double T : mc_T) {
      const mfbm::MonteCarloReport rep =
          mfbm::monte_carlo_mle(mc_H, mc_theta, T, mc_n, mc_reps, mc_seed);
      rows += mfbm::io::montecarlo_csv_row(rep, header);
      header = false;
      all.push_back(mfbm::io::montecarlo_json(rep));
    }
    const std::string csv = join(dir, mc_name + ".csv");
    mfbm::io::write_text(csv, rows);
    mfbm::io::write_text(join(dir, mc_name + ".json"), all.dump(2) + "\n");
    if (mc_gnuplot) {
      emit_gnuplot(dir, mc_name + ".gp", mc_name + ".csv",
                   "using 2:12 with linespoints title 'scaled variance'");
    }
    std::cout << all.dump(2) << "\n";
    return 0;
  }

  if (*d_cmd) {
    const std::size_t n = std::size_t{1} << static_cast<unsigned>(d_level + 2);
    const mfbm::Grid grid = mfbm::Grid::uniform(n, d_T);
    const mfbm::PathSample sample = mfbm::simulate(d_H, grid, d_paths, d_seed);
    const Eigen::MatrixXd& proc = (d_process == "BH")  ? sample.BH
                                  : (d_process == "B") ? sample.B
                                                       : sample.X;
    std::vector<double> mean_sums;
    std::vector<int> levels;
    for (std::size_t p = 0; p < d_paths; ++p) {
      const mfbm::VariationReport rep = mfbm::variation_diagnostic(
          grid, proc.row(static_cast<Eigen::Index>(p)).transpose(), d_p, d_level);
      if (p == 0) {
        levels = rep.levels;
        mean_sums.assign(rep.sums.size(), 0.0);
      }
      for (std::size_t k = 0; k < rep.sums.size(); ++k) mean_sums[k] += rep.sums[k];
    }
    for (double& v : mean_sums) v /= static_cast<double>(d_paths);
    json j = mfbm::io::meta(d_H, n, d_T, d_seed);
    j["p"] = d_p;
    j["process"] = d_process;
    j["levels"] = levels;
    j["mean_sums"] = mean_sums;
    mfbm::io::write_text(join(dir, d_name + ".json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const mfbm::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
