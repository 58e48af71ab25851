#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mfbm/errors.hpp"
#include "mfbm/second_kind.hpp"

using namespace mfbm;

TEST_CASE("zero kernel with eps = 1 is the identity") {
  SecondKindProblem prob;
  prob.kernel_id = KernelId::zero;
  prob.H = 0.7;
  prob.eps = 1.0;
  prob.rhs = [](double u) { return std::cos(3.0 * u); };
  prob.n = 32;
  const Eigen::VectorXd x = solve_second_kind(prob);
  const std::vector<double> mesh = unit_mesh(32);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    CHECK(x(static_cast<Eigen::Index>(i)) ==
          doctest::Approx(std::cos(3.0 * mesh[i])).epsilon(1e-14));
  }
}

TEST_CASE("H = 1 constant kernel, eps = 1, rhs = 1 gives 1/2") {
  SecondKindProblem prob;
  prob.kernel_id = KernelId::kappa;
  prob.H = 1.0;
  prob.eps = 1.0;
  prob.rhs = [](double) { return 1.0; };
  prob.n = 64;
  const Eigen::VectorXd x = solve_second_kind(prob);
  CHECK((x.array() - 0.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("self-convergence against a refined solve, H = 0.7") {
  auto solve_at = [](std::size_t n) {
    SecondKindProblem prob;
    prob.kernel_id = KernelId::kappa;
    prob.H = 0.7;
    prob.eps = 1.0;
    prob.rhs = [](double) { return 1.0; };
    prob.n = n;
    return solve_second_kind(prob);
  };
  const Eigen::VectorXd coarse = solve_at(128);
  const Eigen::VectorXd fine = solve_at(512);
  const std::vector<double> mc = unit_mesh(128);
  const std::vector<double> mf = unit_mesh(512);
  // graded meshes share every 4th node (same grading, nested index ratio)
  double max_rel = 0.0;
  for (std::size_t i = 0; i <= 128; ++i) {
    const double a = coarse(static_cast<Eigen::Index>(i));
    const double b = fine(static_cast<Eigen::Index>(4 * i));
    REQUIRE(mc[i] == doctest::Approx(mf[4 * i]).epsilon(1e-13));
    max_rel = std::max(max_rel, std::abs(a - b) / std::abs(b));
  }
  CHECK(max_rel <= 1e-3);
}

TEST_CASE("shifted solver matches a direct LU solve") {
  const std::vector<double> mesh = unit_mesh(64);
  UnitKernelOperator op(KernelId::kappa, 0.8, mesh);
  ShiftedOperatorSolver shifted(op.matrix());
  const auto m = static_cast<Eigen::Index>(mesh.size());
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = std::sin(static_cast<double>(i));
  for (double eps : {3.0, 1.0, 0.05}) {
    Eigen::MatrixXd A = op.matrix();
    A.diagonal().array() += eps;
    const Eigen::VectorXd direct = A.partialPivLu().solve(b);
    const Eigen::VectorXd fast = shifted.solve(eps, b);
    CHECK((direct - fast).cwiseAbs().maxCoeff() <= 1e-10 * direct.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("problem validation") {
  SecondKindProblem prob;
  prob.kernel_id = KernelId::kappa;
  prob.H = 0.7;
  prob.eps = 0.0;
  prob.rhs = [](double) { return 1.0; };
  CHECK_THROWS_AS(solve_second_kind(prob), std::invalid_argument);
  prob.eps = 1.0;
  prob.rhs = nullptr;
  CHECK_THROWS_AS(solve_second_kind(prob), std::invalid_argument);
  prob.rhs = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(solve_second_kind(prob), std::invalid_argument);
}

TEST_CASE("weight rows integrate the kernel mass correctly") {
  // sum of the row = int_0^1 k(x,v) dv; for kappa this is
  // H[(x)^{2H-1} + (1-x)^{2H-1}] at interior x
  const double H = 0.75;
  const std::vector<double> mesh = unit_mesh(128);
  UnitKernelOperator op(KernelId::kappa, H, mesh);
  for (double x : {0.25, 0.5, 0.8}) {
    const double mass = op.weight_row(x).sum();
    const double exact = H * (std::pow(x, 2.0 * H - 1.0) + std::pow(1.0 - x, 2.0 * H - 1.0));
    CHECK(mass == doctest::Approx(exact).epsilon(1e-12));
  }
}
