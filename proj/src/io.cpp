#include "mfbm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfbm::io {

namespace {

void append_double(std::string& out, double v) { out += format_double(v); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json meta(double H, std::size_t n, double T, std::uint64_t seed) {
  return nlohmann::json{{"version", kVersion},
                        {"H", H},
                        {"n", n},
                        {"T", T},
                        {"seed", seed},
                        {"solver", {{"mesh_grading", 3.0}, {"quad_tol", 1e-11}}}};
}

nlohmann::json constants_json(const HurstParams& p) {
  return nlohmann::json{
      {"H", p.H}, {"c_H", p.c_H}, {"lambda_H", p.lambda_H}, {"beta_H", p.beta_H}};
}

nlohmann::json kernel_header_json(const KernelFamily& fam) {
  nlohmann::json j = meta(fam.params().H, fam.grid().n, fam.grid().t_end, 0);
  j["bracket_T"] = fam.bracket(fam.grid().n);
  j["has_derivatives"] = fam.has_derivatives();
  const char* kind = "kappa";
  switch (fam.kind()) {
    case KernelId::zero: kind = "closed_form_half"; break;
    case KernelId::kappa: kind = "kappa"; break;
    case KernelId::kappa_bar_scaled: kind = "kappa_bar"; break;
    case KernelId::kappa_tilde: kind = "kappa_tilde"; break;
  }
  j["kernel"] = kind;
  return j;
}

void write_kernel_csv(const KernelFamily& fam, const std::string& csv_path) {
  const Grid& grid = fam.grid();
  std::string out = "s,t,g,g_dot,R,G\r\n";
  const bool deriv = fam.has_derivatives() && fam.kind() != KernelId::kappa_bar_scaled;
  const bool with_G =
      fam.closed_form_half() || (deriv && fam.kind() == KernelId::kappa);
  for (std::size_t j = 0; j <= grid.n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const double s = grid.nodes[i];
      const double t = grid.nodes[j];
      append_double(out, s);
      out += ',';
      append_double(out, t);
      out += ',';
      append_double(out, (i == j) ? fam.g_diag(j) : fam.g_at(j, s));
      out += ',';
      if (deriv && i < j && j > 0) {
        append_double(out, fam.g_dot_at(j, s));
        out += ',';
        append_double(out, fam.R_at(j, s));
      } else {
        out += ',';
      }
      out += ',';
      if (with_G) append_double(out, fam.G_at(j, s));
      out += "\r\n";
    }
  }
  write_text(csv_path, out);
}

void write_paths_csv(const PathSample& sample, const std::string& csv_path) {
  const auto np = sample.n_paths();
  std::string out = "t";
  for (std::size_t p = 0; p < np; ++p) {
    const std::string idx = std::to_string(p);
    out += ",B_" + idx + ",BH_" + idx + ",X_" + idx;
    if (sample.theta) out += ",Y_" + idx;
  }
  out += "\r\n";
  for (std::size_t i = 0; i <= sample.grid.n; ++i) {
    append_double(out, sample.grid.nodes[i]);
    for (std::size_t p = 0; p < np; ++p) {
      const auto pi = static_cast<Eigen::Index>(p);
      const auto ii = static_cast<Eigen::Index>(i);
      out += ',';
      append_double(out, sample.B(pi, ii));
      out += ',';
      append_double(out, sample.BH(pi, ii));
      out += ',';
      append_double(out, sample.X(pi, ii));
      if (sample.theta) {
        out += ',';
        append_double(out, sample.Y(pi, ii));
      }
    }
    out += "\r\n";
  }
  write_text(csv_path, out);
}

nlohmann::json paths_sidecar_json(const PathSample& sample) {
  nlohmann::json j = meta(sample.H, sample.grid.n, sample.grid.t_end, sample.seed);
  j["n_paths"] = sample.n_paths();
  if (sample.theta) {
    j["theta"] = *sample.theta;
  } else {
    j["theta"] = nullptr;
  }
  j["processes"] = sample.theta ? nlohmann::json::array({"B", "BH", "X", "Y"})
                                : nlohmann::json::array({"B", "BH", "X"});
  return j;
}

Eigen::MatrixXd read_paths_csv(const std::string& csv_path, const std::string& process,
                               const Grid& grid) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("read_paths_csv: cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_paths_csv: empty file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  std::vector<std::size_t> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    std::size_t c = 0;
    const std::string prefix = process + "_";
    while (std::getline(ss, tok, ',')) {
      if (tok.rfind(prefix, 0) == 0) cols.push_back(c);
      ++c;
    }
  }
  if (cols.empty()) {
    throw std::invalid_argument("read_paths_csv: no '" + process + "' columns found");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(cols.size()),
                      static_cast<Eigen::Index>(grid.n + 1));
  std::size_t row = 0;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (row > grid.n) throw std::invalid_argument("read_paths_csv: too many rows for grid");
    std::stringstream ss(line);
    std::string tok;
    std::size_t c = 0, k = 0;
    while (std::getline(ss, tok, ',')) {
      if (k < cols.size() && c == cols[k]) {
        out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(row)) = std::stod(tok);
        ++k;
      }
      ++c;
    }
    if (k != cols.size()) throw std::invalid_argument("read_paths_csv: short row");
    ++row;
  }
  if (row != grid.n + 1) throw std::invalid_argument("read_paths_csv: row count does not match grid");
  return out;
}

void write_filter_csv(const FilterOutput& out, const std::string& csv_path) {
  std::string text = "t,M,W,phi\r\n";
  for (std::size_t i = 0; i <= out.grid.n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    append_double(text, out.grid.nodes[i]);
    text += ',';
    append_double(text, out.M(ii));
    text += ',';
    append_double(text, out.W(ii));
    text += ',';
    append_double(text, out.phi(ii));
    text += "\r\n";
  }
  write_text(csv_path, text);
}

nlohmann::json filter_json(const FilterOutput& out, std::uint64_t seed) {
  nlohmann::json j = meta(out.H, out.grid.n, out.grid.t_end, seed);
  j["route"] = out.route;
  j["log_density"] = out.log_density;
  if (std::abs(out.log_density) < 30.0) {
    j["density"] = std::exp(out.log_density);
  } else {
    j["density"] = nullptr;  // reported only as a log to avoid under/overflow
  }
  return j;
}

nlohmann::json estimator_json(const EstimatorReport& rep, std::uint64_t seed) {
  nlohmann::json j = meta(rep.H, rep.n, rep.T, seed);
  j["theta_hat"] = rep.theta_hat;
  j["exact_variance"] = rep.exact_variance;
  j["ci95"] = {rep.ci95[0], rep.ci95[1]};
  return j;
}

nlohmann::json montecarlo_json(const MonteCarloReport& rep) {
  nlohmann::json j = meta(rep.H, rep.n, rep.T, rep.seed);
  j["theta"] = rep.theta;
  j["n_reps"] = rep.n_reps;
  j["bias"] = rep.bias;
  j["bias_se"] = rep.bias_se;
  j["empirical_variance"] = rep.empirical_variance;
  j["empirical_variance_se"] = rep.empirical_variance_se;
  j["theoretical_variance"] = rep.theoretical_variance;
  j["scaled_variance"] = rep.scaled_variance;
  j["asymptotic_constant"] = rep.asymptotic_constant;
  return j;
}

std::string montecarlo_csv_row(const MonteCarloReport& rep, bool with_header) {
  std::string out;
  if (with_header) {
    out +=
        "H,T,n,n_reps,seed,theta,bias,bias_se,empirical_variance,"
        "empirical_variance_se,theoretical_variance,scaled_variance,"
        "asymptotic_constant\r\n";
  }
  append_double(out, rep.H);
  out += ',';
  append_double(out, rep.T);
  out += ',' + std::to_string(rep.n) + ',' + std::to_string(rep.n_reps) + ',' +
         std::to_string(rep.seed) + ',';
  append_double(out, rep.theta);
  for (double v : {rep.bias, rep.bias_se, rep.empirical_variance,
                   rep.empirical_variance_se, rep.theoretical_variance,
                   rep.scaled_variance, rep.asymptotic_constant}) {
    out += ',';
    append_double(out, v);
  }
  out += "\r\n";
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

}  // namespace mfbm::io
