#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "plsgeom/geometry.hpp"

namespace plsgeom {

// Lawson-Hanson active-set non-negative least squares.
VectorXd nnls(const MatrixXd& A, const VectorXd& b, int max_iter, double tol) {
  const int ncol = static_cast<int>(A.cols());
  if (A.rows() != b.size())
    fail(ErrorKind::DimensionMismatch, "nnls dimensions disagree");
  if (max_iter <= 0) max_iter = 10 * ncol + 50;
  VectorXd x = VectorXd::Zero(ncol);
  std::vector<bool> passive(ncol, false);
  VectorXd w = A.transpose() * b;
  double scale = std::max(1.0, w.cwiseAbs().maxCoeff());

  auto solve_passive = [&](const std::vector<int>& idx) {
    MatrixXd Ap(A.rows(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) Ap.col(j) = A.col(idx[j]);
    return VectorXd(Ap.colPivHouseholderQr().solve(b));
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    w = A.transpose() * (b - A * x);
    int best = -1;
    double best_w = tol * scale;
    for (int j = 0; j < ncol; ++j)
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < ncol; ++j)
        if (passive[j]) idx.push_back(j);
      VectorXd s = solve_passive(idx);
      double smin = s.minCoeff();
      if (smin > 0.0) {
        x.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) x(idx[j]) = s(j);
        break;
      }
      double step = 1.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (s(j) <= 0.0) {
          double t = x(idx[j]) / (x(idx[j]) - s(j));
          step = std::min(step, t);
        }
      }
      for (std::size_t j = 0; j < idx.size(); ++j) {
        x(idx[j]) += step * (s(j) - x(idx[j]));
        if (x(idx[j]) <= tol * scale) {
          x(idx[j]) = 0.0;
          passive[idx[j]] = false;
        }
      }
    }
  }
  return x;
}

}  // namespace plsgeom
