#include "stbem/mot_solver.h"

#include <cmath>
#include <string>

namespace stbem {

mot_solver::mot_solver(const std::vector<Eigen::MatrixXd>& blocks)
    : blocks_(&blocks) {
  if (blocks.empty()) throw solver_error("empty block family");
  const Eigen::MatrixXd& s0 = blocks.front();
  if (s0.rows() != s0.cols() || s0.rows() == 0) {
    throw solver_error("lag-0 block must be square and non-empty");
  }
  dim_ = static_cast<std::size_t>(s0.rows());
  for (const auto& s : blocks) {
    if (s.rows() != s0.rows() || s.cols() != s0.cols()) {
      throw solver_error("inconsistent block dimensions");
    }
  }
  lu_.compute(s0);
  const double rcond = lu_.rcond();
  if (!(rcond > 1e-14)) {
    throw solver_error("lag-0 block numerically singular (rcond = " +
                       std::to_string(rcond) + ")");
  }
}

std::vector<Eigen::VectorXd> mot_solver::solve(
    const std::vector<Eigen::VectorXd>& rhs) const {
  const std::vector<Eigen::MatrixXd>& s = *blocks_;
  const std::size_t n = rhs.size();
  if (n > s.size()) {
    throw solver_error("more right-hand sides than lag blocks");
  }
  std::vector<Eigen::VectorXd> x(n);
  std::vector<Eigen::VectorXd> products;
  for (std::size_t l = 0; l < n; ++l) {
    if (rhs[l].size() != static_cast<Eigen::Index>(dim_)) {
      throw solver_error("right-hand side dimension mismatch");
    }
    Eigen::VectorXd defect = rhs[l];
    const std::size_t hist = l;
    products.assign(hist, Eigen::VectorXd());
#pragma omp parallel for schedule(static)
    for (long j = 1; j <= static_cast<long>(hist); ++j) {
      products[j - 1].noalias() = s[j] * x[l - j];
    }
    for (std::size_t j = 0; j < hist; ++j) defect -= products[j];
    x[l] = lu_.solve(defect);
    const double residual = (s[0] * x[l] - defect).norm();
    if (!(residual < 1e-10 * (rhs[l].norm() + 1.0))) {
      throw solver_error("step " + std::to_string(l) +
                         " residual too large (" + std::to_string(residual) +
                         ")");
    }
  }
  return x;
}

std::vector<Eigen::VectorXd> dense_solve(
    const std::vector<Eigen::MatrixXd>& blocks,
    const std::vector<Eigen::VectorXd>& rhs) {
  if (blocks.empty()) throw solver_error("empty block family");
  const std::size_t d = static_cast<std::size_t>(blocks.front().rows());
  const std::size_t n = rhs.size();
  if (n * d > 4000) {
    throw solver_error("dense reference solve limited to 4000 unknowns");
  }
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n * d, n * d);
  Eigen::VectorXd stacked(n * d);
  for (std::size_t l = 0; l < n; ++l) {
    stacked.segment(l * d, d) = rhs[l];
    for (std::size_t j = 0; j <= l; ++j) {
      if (l - j >= blocks.size()) continue;
      full.block(l * d, j * d, d, d) = blocks[l - j];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(full);
  if (!(lu.rcond() > 1e-14)) {
    throw solver_error("dense space-time matrix numerically singular");
  }
  const Eigen::VectorXd sol = lu.solve(stacked);
  std::vector<Eigen::VectorXd> x(n);
  for (std::size_t l = 0; l < n; ++l) x[l] = sol.segment(l * d, d);
  return x;
}

}  // namespace stbem
