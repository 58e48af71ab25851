#ifndef MFBM_IO_HPP
#define MFBM_IO_HPP

#include <string>

#include "mfbm/estimation.hpp"
#include "mfbm/filtering.hpp"
#include "mfbm/hurst.hpp"
#include "mfbm/kernel_family.hpp"
#include "mfbm/paths.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace mfbm::io {

inline constexpr const char* kVersion = "0.1.0";

// Shared metadata block embedded in every output for exact replay.
nlohmann::json meta(double H, std::size_t n, double T, std::uint64_t seed);

std::string format_double(double v);  // shortest repr that round-trips

nlohmann::json constants_json(const HurstParams& p);

// Kernel family: columnar CSV (s, t, g, g_dot, R, G) over the lower triangle
// plus a JSON header with the solver description.
void write_kernel_csv(const KernelFamily& fam, const std::string& csv_path);
nlohmann::json kernel_header_json(const KernelFamily& fam);

// Paths: one row per grid node, one column per process and path, plus a JSON
// sidecar carrying (seed, H, theta, n, T) for replay.
void write_paths_csv(const PathSample& sample, const std::string& csv_path);
nlohmann::json paths_sidecar_json(const PathSample& sample);

// Reads a path matrix back from write_paths_csv output; returns the column
// whose header matches `process` ("X" or "Y"), one row per path.
Eigen::MatrixXd read_paths_csv(const std::string& csv_path, const std::string& process,
                               const Grid& grid);

void write_filter_csv(const FilterOutput& out, const std::string& csv_path);
nlohmann::json filter_json(const FilterOutput& out, std::uint64_t seed);

nlohmann::json estimator_json(const EstimatorReport& rep, std::uint64_t seed);
nlohmann::json montecarlo_json(const MonteCarloReport& rep);
std::string montecarlo_csv_row(const MonteCarloReport& rep, bool with_header);

void write_text(const std::string& path, const std::string& text);

}  // namespace mfbm::io

#endif
