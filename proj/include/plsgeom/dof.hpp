#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "plsgeom/types.hpp"

namespace plsgeom {

struct DofReport {
  double gdof_hat = 0.0;     // trace of the Jacobian
  double gdof_dp_hat = 0.0;  // trace of 2J - J'J
  MatrixXd jacobian;
  double fd_error = 0.0;     // max abs deviation from central differences
};

// J = (I - 2P) Omega + 2P, verified against central finite differences with
// step 1e-6 (1 + |y_j|); gross disagreement raises FdMismatch.
DofReport prediction_jacobian(const EigenSpectrum& spectrum,
                              const ObservationVector& y, int n,
                              const PlsConfig& cfg);

// (gdof_hat, gdof_dp_hat) via the trace formulas; at |support| = n these
// reduce to n + sum_{i not in tau} omega_i and m - sum (1-omega_i)^2.
std::pair<double, double> gdof_estimators(const EigenSpectrum& spectrum,
                                          const ObservationVector& y, int n,
                                          const PlsConfig& cfg);

struct McConfig {
  VectorXd beta;
  double sigma = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
  int n = 0;
};

struct McResult {
  double mean_gdof = 0.0;
  double mc_se = 0.0;  // NaN when fewer than 2 usable replicates
  double prob_negative = 0.0;
  std::vector<double> gdof;          // per replicate, replicate order
  std::vector<double> gdof_dp;       // per replicate, replicate order
  std::vector<double> gdof_sorted;
  std::vector<double> gdof_dp_sorted;
  std::vector<int> excluded;         // replicate indices that failed
};

// Monte Carlo experiment: per replicate draw u_i = sigma sqrt(lambda_i) N(0,1)
// from the counter generator, set y = Lambda beta + u, evaluate both
// estimators.  Deterministic for a fixed seed.
McResult mc_gdof(const EigenSpectrum& spectrum, const McConfig& mc,
                 const PlsConfig& cfg);

}  // namespace plsgeom
