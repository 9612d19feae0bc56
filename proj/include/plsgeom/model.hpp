#pragma once

#include "plsgeom/types.hpp"

namespace plsgeom {

// Correlation matrix with entries exp(-rate * |i-j|).
MatrixXd exp_correlation(int m, double rate);

// Eigenvalues of a symmetric positive definite matrix, sorted strictly
// decreasing; rejects repeated eigenvalues under the relative gap tolerance.
EigenSpectrum spectrum_from_gram(const MatrixXd& G, double sym_tol = 1e-10,
                                 double distinct_tol = 1e-10);

// m x n matrix whose k-th column (k = 0..n-1) is lambda to the k-th power
// elementwise; built by repeated multiplication for determinism.
MatrixXd vandermonde(const EigenSpectrum& spectrum, int n);

// K = (y, Lambda y, ..., Lambda^{n-1} y) = diag(y) * vandermonde(lambda, n).
MatrixXd krylov_matrix(const EigenSpectrum& spectrum, const VectorXd& y,
                       int n);

struct PlsFit {
  VectorXd beta_hat;
  VectorXd y_hat;
  VectorXd residual;
  MatrixXd projection;  // P = Lambda K (K' Lambda K)^{-1} K'
};

// Baseline PLS fit: beta = K (K' Lambda K)^{-1} K' y, y_hat = P y.
PlsFit pls_fit(const EigenSpectrum& spectrum, const ObservationVector& y,
               int n, const PlsConfig& cfg);

}  // namespace plsgeom
