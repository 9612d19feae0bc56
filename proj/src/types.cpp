#include "plsgeom/types.hpp"

#include <algorithm>
#include <cmath>

namespace plsgeom {

const char* kind_name(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SubsetSizeMismatch: return "SubsetSizeMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::InadmissibleSignature: return "InadmissibleSignature";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularKrylovSystem: return "SingularKrylovSystem";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::CrossCheckFailure: return "CrossCheckFailure";
    case ErrorKind::FdMismatch: return "FdMismatch";
    case ErrorKind::StallDetected: return "StallDetected";
    case ErrorKind::NotInCone: return "NotInCone";
    case ErrorKind::InsufficientSupport: return "InsufficientSupport";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::PositivityFailure: return "PositivityFailure";
  }
  return "UnknownError";
}

int exit_code(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::NonSymmetric:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::RepeatedEigenvalue:
    case ErrorKind::InvalidDimension:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::SubsetSizeMismatch:
    case ErrorKind::ZeroVector:
    case ErrorKind::InadmissibleSignature:
    case ErrorKind::NonPositiveWeight:
    case ErrorKind::CapExceeded:
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::SingularKrylovSystem:
    case ErrorKind::SingularSystem:
    case ErrorKind::CrossCheckFailure:
    case ErrorKind::FdMismatch:
    case ErrorKind::StallDetected:
    case ErrorKind::NotInCone:
    case ErrorKind::InsufficientSupport:
      return 3;
    case ErrorKind::EnumerationCapExceeded:
      return 4;
    case ErrorKind::PositivityFailure:
      return 5;
  }
  return 1;
}

IndexSubset::IndexSubset(std::vector<int> indices, int m)
    : idx_(std::move(indices)), m_(m) {
  if (m_ < 1) fail(ErrorKind::InvalidDimension, "ambient dimension must be positive");
  std::sort(idx_.begin(), idx_.end());
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 0 || idx_[i] >= m_)
      fail(ErrorKind::InvalidArgument, "subset index out of range");
    if (i > 0 && idx_[i] == idx_[i - 1])
      fail(ErrorKind::InvalidArgument, "subset indices must be distinct");
  }
}

bool IndexSubset::contains(int i) const noexcept {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

IndexSubset IndexSubset::complement() const {
  std::vector<int> out;
  out.reserve(m_ - size());
  for (int i = 0; i < m_; ++i)
    if (!contains(i)) out.push_back(i);
  return IndexSubset(std::move(out), m_);
}

EigenSpectrum::EigenSpectrum(VectorXd lambda, double distinct_tol)
    : lambda_(std::move(lambda)) {
  const int m = static_cast<int>(lambda_.size());
  if (m < 2) fail(ErrorKind::InvalidDimension, "need at least two eigenvalues");
  for (int i = 0; i < m; ++i) {
    if (!(lambda_(i) > 0.0))
      fail(ErrorKind::NotPositiveDefinite, "eigenvalues must be positive");
  }
  for (int i = 0; i + 1 < m; ++i) {
    double gap = lambda_(i) - lambda_(i + 1);
    if (gap <= 0.0 || gap < distinct_tol * lambda_(i))
      fail(ErrorKind::RepeatedEigenvalue,
           "eigenvalues must be strictly decreasing with relative gaps above tolerance");
  }
}

ObservationVector ObservationVector::make(VectorXd y, const PlsConfig& cfg) {
  if (y.size() < 2) fail(ErrorKind::InvalidDimension, "observation needs m >= 2");
  ObservationVector out;
  out.zero_tol = cfg.zero_rel_tol * y.cwiseAbs().maxCoeff();
  out.y = std::move(y);
  return out;
}

int ObservationVector::cardinality() const {
  int c = 0;
  for (int i = 0; i < y.size(); ++i)
    if (std::abs(y(i)) > zero_tol) ++c;
  return c;
}

std::vector<int> ObservationVector::support() const {
  std::vector<int> s;
  for (int i = 0; i < y.size(); ++i)
    if (std::abs(y(i)) > zero_tol) s.push_back(i);
  return s;
}

SquaredObservation SquaredObservation::from_psi(VectorXd psi,
                                                const PlsConfig& cfg) {
  if (psi.size() < 2) fail(ErrorKind::InvalidDimension, "psi needs m >= 2");
  for (int i = 0; i < psi.size(); ++i)
    if (psi(i) < 0.0)
      fail(ErrorKind::InvalidArgument, "psi entries must be non-negative");
  // threshold matches the y-space convention: |y_i| <= tol  <=>  psi_i <= tol^2
  double ytol = cfg.zero_rel_tol * std::sqrt(psi.maxCoeff());
  SquaredObservation out;
  out.psi = std::move(psi);
  for (int i = 0; i < out.psi.size(); ++i) {
    if (out.psi(i) > ytol * ytol)
      out.support.push_back(i);
    else
      out.psi(i) = 0.0;  // snap sub-threshold mass so monomials vanish exactly
  }
  return out;
}

SquaredObservation SquaredObservation::from_y(const ObservationVector& y) {
  SquaredObservation out;
  out.psi = y.y.cwiseProduct(y.y);
  for (int i = 0; i < y.y.size(); ++i) {
    if (std::abs(y.y(i)) > y.zero_tol)
      out.support.push_back(i);
    else
      out.psi(i) = 0.0;
  }
  return out;
}

}  // namespace plsgeom
