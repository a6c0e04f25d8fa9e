// Marching-on-in-time solution of the block lower-triangular Toeplitz
// system: one cached pivoted LU factorization of the lag-0 block, then
// per step a history convolution defect and a back-substitution,
//   S[0] X_l = F_l - sum_{j=1}^{l} S[j] X_{l-j}.
// The convolution products are computed in parallel and reduced in a
// fixed order, so results do not depend on the thread count.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stbem {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class mot_solver {
 public:
  // Keeps a reference to the blocks; they must outlive the solver.
  // Throws solver_error when the lag-0 block is numerically singular.
  explicit mot_solver(const std::vector<Eigen::MatrixXd>& blocks);

  std::size_t dim() const { return dim_; }
  std::size_t steps() const { return blocks_->size(); }

  // rhs may be shorter than the block family; one solution slice per
  // rhs entry is returned.  Throws solver_error when a step residual
  // exceeds 1e-10 * (|F_l| + 1).
  std::vector<Eigen::VectorXd> solve(
      const std::vector<Eigen::VectorXd>& rhs) const;

 private:
  const std::vector<Eigen::MatrixXd>* blocks_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::size_t dim_ = 0;
};

// Reference path: assembles the full space-time matrix and solves it in
// one shot.  Guarded to steps * dim <= 4000 unknowns.
std::vector<Eigen::VectorXd> dense_solve(
    const std::vector<Eigen::MatrixXd>& blocks,
    const std::vector<Eigen::VectorXd>& rhs);

}  // namespace stbem
