#pragma once

#include <utility>
#include <vector>

#include "plsgeom/types.hpp"

namespace plsgeom {

// omega from the normal equations (V' Psi Lambda V) alpha = V' psi,
// omega = Lambda V alpha, z = 1 - omega.
ShrinkageTriple shrinkage_direct(const EigenSpectrum& spectrum,
                                 const SquaredObservation& psi, int n,
                                 const PlsConfig& cfg);

// Corner vector omega_(tau) for |tau| = n: closed product formula
// z_i = prod_{j in tau} (1 - lambda_i/lambda_j), cross-checked against the
// matrix solve (S' Lambda V) alpha = 1.
ShrinkageTriple corner_shrinkage(const EigenSpectrum& spectrum,
                                 const IndexSubset& tau,
                                 const PlsConfig& cfg = {});

// pi_tau = lambda^tau * prod_{j<i in tau} (lambda_i - lambda_j)^2, with its
// log computed by summing logs; cross-checked against the determinant product
// det(S'V) det(S'LambdaV) on small instances.
CornerWeight corner_weight(const EigenSpectrum& spectrum,
                           const IndexSubset& tau);

struct AverageResult {
  ShrinkageTriple triple;
  std::vector<IndexSubset> taus;  // lexicographic
  std::vector<double> weights;    // p_tau, aligned with taus
};

// omega as the convex combination sum_tau p_tau omega_(tau) with
// p_tau proportional to psi^tau pi_tau; weights evaluated in log space and
// the average accumulated with compensated summation.
AverageResult shrinkage_average(const EigenSpectrum& spectrum,
                                const SquaredObservation& psi, int n,
                                const PlsConfig& cfg);

// k-th coordinate of alpha_(tau) (k = 1..n) as a ratio of determinants of
// column-deleted rectangular Vandermonde blocks.
double alpha_corner_det(const EigenSpectrum& spectrum, const IndexSubset& tau,
                        int k);

struct MarginalSegment {
  VectorXd endpoint_zero;  // z at psi with psi_k := 0
  VectorXd endpoint_inf;   // limit of z as psi_k -> infinity
  double t = 1.0;          // barycentric weight of endpoint_zero
  double g_k = 0.0;
};

// Decomposition of z(psi) along the psi_k axis:
// z = t * endpoint_zero + (1-t) * endpoint_inf, t = 1/(1 + psi_k g_k).
// k is 0-based.
MarginalSegment marginal_segment(const EigenSpectrum& spectrum,
                                 const SquaredObservation& psi, int n, int k,
                                 const PlsConfig& cfg);

struct ExtremeBound {
  IndexSubset tau_tail;  // {m-n+1,...,m} in 1-based terms
  double bound = 0.0;    // 1 -+ (c-1)^n depending on parity of n
  double c = 0.0;        // lambda_{m-n} / lambda_{m-n+1}
  int side = 0;          // -1: omega_i <= bound (n even), +1: omega_i >= bound
};

// Bound satisfied by every off-support entry of the tail corner vector.
ExtremeBound extreme_bound(const EigenSpectrum& spectrum, int n);

}  // namespace plsgeom
