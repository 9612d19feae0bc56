#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "plsgeom/error.hpp"

namespace plsgeom {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Numerical knobs shared by all operations.
struct PlsConfig {
  double distinct_tol = 1e-10;     // minimum relative gap between eigenvalues
  double zero_rel_tol = 1e-12;     // zero threshold, relative to max |y_i|
  double solve_tol = 1e-8;         // relative residual bound for linear solves
  std::int64_t enum_cap = 2000000; // largest C(m,n) enumerated
};

// Sorted set of indices in {0,...,m-1}.  All public I/O is 1-based; the
// conversion happens at the parse/print boundary only.
class IndexSubset {
 public:
  IndexSubset() = default;
  IndexSubset(std::vector<int> indices, int m);

  const std::vector<int>& indices() const noexcept { return idx_; }
  int m() const noexcept { return m_; }
  int size() const noexcept { return static_cast<int>(idx_.size()); }
  bool contains(int i) const noexcept;
  IndexSubset complement() const;

 private:
  std::vector<int> idx_;
  int m_ = 0;
};

// Eigenvalues of the rotated Gram matrix: strictly positive, strictly
// decreasing, pairwise relative gaps at least distinct_tol.
class EigenSpectrum {
 public:
  explicit EigenSpectrum(VectorXd lambda, double distinct_tol = 1e-10);

  int m() const noexcept { return static_cast<int>(lambda_.size()); }
  const VectorXd& lambda() const noexcept { return lambda_; }
  double operator[](int i) const { return lambda_(i); }

 private:
  VectorXd lambda_;
};

// Rotated response y together with its zero-pattern bookkeeping.
struct ObservationVector {
  VectorXd y;
  double zero_tol = 0.0;  // absolute threshold actually used

  static ObservationVector make(VectorXd y, const PlsConfig& cfg);
  int cardinality() const;
  std::vector<int> support() const;
};

// psi = y squared elementwise, with its support under the same threshold
// convention (psi_i is zero iff |y_i| was below tolerance).
struct SquaredObservation {
  VectorXd psi;
  std::vector<int> support;

  static SquaredObservation from_psi(VectorXd psi, const PlsConfig& cfg);
  static SquaredObservation from_y(const ObservationVector& y);
  int cardinality() const noexcept { return static_cast<int>(support.size()); }
};

// Jointly consistent shrinkage data: omega = Lambda V alpha, z = 1 - omega.
struct ShrinkageTriple {
  VectorXd omega;
  VectorXd z;
  VectorXd alpha;
};

struct CornerWeight {
  IndexSubset tau;
  double pi = 0.0;
  double log_pi = 0.0;
};

}  // namespace plsgeom
