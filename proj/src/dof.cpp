#include "plsgeom/dof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plsgeom/model.hpp"
#include "plsgeom/rng.hpp"
#include "plsgeom/shrinkage.hpp"

namespace plsgeom {

namespace {

// J = (I - 2P) Omega + 2P without the finite-difference audit.
MatrixXd jacobian_core(const EigenSpectrum& spectrum,
                       const ObservationVector& y, int n,
                       const PlsConfig& cfg) {
  const int m = spectrum.m();
  PlsFit fit = pls_fit(spectrum, y, n, cfg);
  ShrinkageTriple tr =
      shrinkage_direct(spectrum, SquaredObservation::from_y(y), n, cfg);
  MatrixXd I = MatrixXd::Identity(m, m);
  return (I - 2.0 * fit.projection) * tr.omega.asDiagonal() +
         2.0 * fit.projection;
}

}  // namespace

DofReport prediction_jacobian(const EigenSpectrum& spectrum,
                              const ObservationVector& y, int n,
                              const PlsConfig& cfg) {
  const int m = spectrum.m();
  DofReport out;
  out.jacobian = jacobian_core(spectrum, y, n, cfg);
  out.gdof_hat = out.jacobian.trace();
  out.gdof_dp_hat = (2.0 * out.jacobian -
                     out.jacobian.transpose() * out.jacobian).trace();

  // central-difference audit of the analytic formula
  double fd_error = 0.0;
  for (int j = 0; j < m; ++j) {
    double h = 1e-6 * (1.0 + std::abs(y.y(j)));
    ObservationVector yp = y, ym = y;
    yp.y(j) += h;
    ym.y(j) -= h;
    VectorXd col = (pls_fit(spectrum, yp, n, cfg).y_hat -
                    pls_fit(spectrum, ym, n, cfg).y_hat) /
                   (2.0 * h);
    fd_error = std::max(fd_error,
                        (col - out.jacobian.col(j)).cwiseAbs().maxCoeff());
  }
  out.fd_error = fd_error;
  if (!(fd_error < 1e-2 * std::max(1.0, out.jacobian.cwiseAbs().maxCoeff())))
    fail(ErrorKind::FdMismatch,
         "analytic Jacobian disagrees grossly with finite differences");
  return out;
}

std::pair<double, double> gdof_estimators(const EigenSpectrum& spectrum,
                                          const ObservationVector& y, int n,
                                          const PlsConfig& cfg) {
  MatrixXd J = jacobian_core(spectrum, y, n, cfg);
  double gdof = J.trace();
  double gdof_dp = (2.0 * J - J.transpose() * J).trace();
  return {gdof, gdof_dp};
}

McResult mc_gdof(const EigenSpectrum& spectrum, const McConfig& mc,
                 const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (mc.beta.size() != m)
    fail(ErrorKind::DimensionMismatch, "beta has wrong length");
  if (mc.replications < 1)
    fail(ErrorKind::InvalidArgument, "need at least one replication");
  if (!(mc.sigma > 0.0))
    fail(ErrorKind::InvalidArgument, "sigma must be positive");
  if (mc.n < 1 || mc.n >= m)
    fail(ErrorKind::InvalidDimension, "mc needs 1 <= n < m");

  const VectorXd& lam = spectrum.lambda();
  VectorXd mean_y = lam.cwiseProduct(mc.beta);
  VectorXd sd = mc.sigma * lam.cwiseSqrt();

  McResult out;
  out.gdof.reserve(mc.replications);
  out.gdof_dp.reserve(mc.replications);
  long neg = 0;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < mc.replications; ++r) {
    VectorXd yv(m);
    for (int i = 0; i < m; ++i)
      yv(i) = mean_y(i) + sd(i) * counter_normal(mc.seed, r, i);
    try {
      ObservationVector ob = ObservationVector::make(yv, cfg);
      auto [g, gdp] = gdof_estimators(spectrum, ob, mc.n, cfg);
      out.gdof.push_back(g);
      out.gdof_dp.push_back(gdp);
      sum += g;
      sumsq += g * g;
      if (g < 0.0) ++neg;
    } catch (const Error&) {
      out.excluded.push_back(r);
    }
  }
  const double R = static_cast<double>(out.gdof.size());
  if (R == 0.0)
    fail(ErrorKind::SingularSystem, "every replicate failed");
  out.mean_gdof = sum / R;
  if (R >= 2.0) {
    double var = (sumsq - sum * sum / R) / (R - 1.0);
    out.mc_se = std::sqrt(std::max(var, 0.0) / R);
  } else {
    out.mc_se = std::numeric_limits<double>::quiet_NaN();
  }
  out.prob_negative = static_cast<double>(neg) / R;
  out.gdof_sorted = out.gdof;
  out.gdof_dp_sorted = out.gdof_dp;
  std::sort(out.gdof_sorted.begin(), out.gdof_sorted.end());
  std::sort(out.gdof_dp_sorted.begin(), out.gdof_dp_sorted.end());
  return out;
}

}  // namespace plsgeom
