#include "plsgeom/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace plsgeom {

MatrixXd exp_correlation(int m, double rate) {
  if (m < 2) fail(ErrorKind::InvalidDimension, "exp_correlation needs m >= 2");
  if (!(rate > 0.0))
    fail(ErrorKind::InvalidArgument, "correlation decay rate must be positive");
  MatrixXd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = std::exp(-rate * std::abs(i - j));
  return G;
}

EigenSpectrum spectrum_from_gram(const MatrixXd& G, double sym_tol,
                                 double distinct_tol) {
  if (G.rows() != G.cols() || G.rows() < 2)
    fail(ErrorKind::InvalidDimension, "Gram matrix must be square, m >= 2");
  double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    fail(ErrorKind::NonSymmetric, "Gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::SingularSystem, "eigendecomposition failed");
  VectorXd ev = es.eigenvalues();  // ascending
  if (ev(0) <= sym_tol * scale)
    fail(ErrorKind::NotPositiveDefinite, "Gram matrix is not positive definite");
  VectorXd lambda = ev.reverse();
  for (int i = 0; i + 1 < lambda.size(); ++i) {
    if (lambda(i) - lambda(i + 1) < distinct_tol * lambda(i))
      fail(ErrorKind::RepeatedEigenvalue,
           "Gram matrix has (numerically) repeated eigenvalues");
  }
  return EigenSpectrum(lambda, distinct_tol);
}

MatrixXd vandermonde(const EigenSpectrum& spectrum, int n) {
  const int m = spectrum.m();
  if (n < 1 || n > m)
    fail(ErrorKind::InvalidDimension, "vandermonde needs 1 <= n <= m");
  MatrixXd V(m, n);
  V.col(0).setOnes();
  for (int k = 1; k < n; ++k)
    V.col(k) = V.col(k - 1).cwiseProduct(spectrum.lambda());
  return V;
}

MatrixXd krylov_matrix(const EigenSpectrum& spectrum, const VectorXd& y,
                       int n) {
  const int m = spectrum.m();
  if (y.size() != m) fail(ErrorKind::DimensionMismatch, "y has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "krylov_matrix needs 1 <= n < m");
  return y.asDiagonal() * vandermonde(spectrum, n);
}

PlsFit pls_fit(const EigenSpectrum& spectrum, const ObservationVector& y,
               int n, const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (y.y.size() != m) fail(ErrorKind::DimensionMismatch, "y has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "pls_fit needs 1 <= n < m");
  if (y.cardinality() < n)
    fail(ErrorKind::SingularKrylovSystem,
         "support below direction count: the Krylov system is singular");
  MatrixXd K = krylov_matrix(spectrum, y.y, n);
  MatrixXd LK = spectrum.lambda().asDiagonal() * K;
  // K' Lambda K factors as B'B with B = Lambda^{1/2} K, so the Galerkin
  // coefficients and (K' Lambda K)^{-1} K' are least-squares solves with B;
  // QR on the column-scaled factor keeps the forward error at kappa(B)
  // instead of kappa(B)^2.
  VectorXd sqrt_lam = spectrum.lambda().cwiseSqrt();
  MatrixXd B = sqrt_lam.asDiagonal() * K;
  VectorXd cscale(n);
  for (int k = 0; k < n; ++k) {
    double s = B.col(k).norm();
    cscale(k) = (s > 0.0) ? 1.0 / s : 1.0;
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(B * cscale.asDiagonal());
  VectorXd u = y.y.cwiseQuotient(sqrt_lam);
  VectorXd coef = cscale.asDiagonal() * qr.solve(u);
  coef += cscale.asDiagonal() * qr.solve(u - B * coef);
  MatrixXd A = K.transpose() * LK;
  VectorXd b = K.transpose() * y.y;
  double resid = (A * coef - b).norm();
  double denom = A.norm() * coef.norm() + b.norm();
  if (!(resid <= cfg.solve_tol * std::max(denom, 1e-300)))
    fail(ErrorKind::SingularKrylovSystem,
         "Krylov normal equations are numerically rank-deficient");
  MatrixXd Lmh = MatrixXd(sqrt_lam.cwiseInverse().asDiagonal());
  MatrixXd X = cscale.asDiagonal() * qr.solve(Lmh);
  X += cscale.asDiagonal() * qr.solve(Lmh - B * X);
  PlsFit fit;
  fit.beta_hat = K * coef;
  fit.projection = LK * X;
  fit.y_hat = LK * coef;
  fit.residual = y.y - fit.y_hat;
  return fit;
}

}  // namespace plsgeom
