#ifndef MFBM_ERRORS_HPP
#define MFBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mfbm {

// Thrown when a density/filtering operation is requested in a Hurst regime
// where the underlying measures are singular (1/4 <= H <= 3/4, H != 1/2).
class UnsupportedRegimeError : public std::domain_error {
 public:
  explicit UnsupportedRegimeError(const std::string& msg) : std::domain_error(msg) {}
};

// Numerical failure inside a factorization or linear solve.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mfbm

#endif
