#include "plsgeom/shrinkage.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "plsgeom/model.hpp"
#include "plsgeom/subsets.hpp"

namespace plsgeom {

namespace {

// Compensated (Kahan) accumulator for one double.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double t = v - c;
    double s = sum + t;
    c = (s - sum) - t;
    sum = s;
  }
};

// log(psi^tau) or -inf when tau leaves the support.
double log_monomial(const VectorXd& psi, const std::vector<int>& tau) {
  double s = 0.0;
  for (int i : tau) {
    if (psi(i) <= 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(psi(i));
  }
  return s;
}

double log_pi_of(const VectorXd& lambda, const std::vector<int>& tau) {
  double s = 0.0;
  for (std::size_t a = 0; a < tau.size(); ++a) {
    s += std::log(lambda(tau[a]));
    for (std::size_t b = a + 1; b < tau.size(); ++b)
      s += 2.0 * std::log(std::abs(lambda(tau[a]) - lambda(tau[b])));
  }
  return s;
}

}  // namespace

ShrinkageTriple shrinkage_direct(const EigenSpectrum& spectrum,
                                 const SquaredObservation& psi, int n,
                                 const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (psi.psi.size() != m)
    fail(ErrorKind::DimensionMismatch, "psi has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "shrinkage needs 1 <= n < m");
  if (psi.cardinality() < n)
    fail(ErrorKind::SingularSystem,
         "support below direction count: the Gram system is singular");
  MatrixXd V = vandermonde(spectrum, n);
  MatrixXd LV = spectrum.lambda().asDiagonal() * V;
  // The normal matrix V' Psi Lambda V factors as W'W with
  // W = diag(sqrt(psi lambda)) V, so alpha is the solution of the
  // least-squares problem min |W alpha - sqrt(psi/lambda)|.  Solving that
  // form by QR keeps the forward error at kappa(W) instead of kappa(W)^2;
  // unit column scaling (which commutes with the solve) tames the spread
  // of the Vandermonde powers.
  VectorXd w = (psi.psi.array() * spectrum.lambda().array()).sqrt();
  MatrixXd W = w.asDiagonal() * V;
  VectorXd u = (psi.psi.array() / spectrum.lambda().array()).sqrt();
  VectorXd cscale(n);
  for (int k = 0; k < n; ++k) {
    double s = W.col(k).norm();
    cscale(k) = (s > 0.0) ? 1.0 / s : 1.0;
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(W * cscale.asDiagonal());
  VectorXd alpha = cscale.asDiagonal() * qr.solve(u);
  alpha += cscale.asDiagonal() * qr.solve(u - W * alpha);
  MatrixXd A = V.transpose() * psi.psi.asDiagonal() * LV;
  VectorXd b = V.transpose() * psi.psi;
  double resid = (A * alpha - b).norm();
  double denom = A.norm() * alpha.norm() + b.norm();
  if (!(resid <= cfg.solve_tol * std::max(denom, 1e-300)))
    fail(ErrorKind::SingularSystem,
         "shrinkage normal equations are numerically rank-deficient");
  ShrinkageTriple out;
  out.alpha = alpha;
  out.omega = LV * alpha;
  out.z = VectorXd::Ones(m) - out.omega;
  return out;
}

ShrinkageTriple corner_shrinkage(const EigenSpectrum& spectrum,
                                 const IndexSubset& tau,
                                 const PlsConfig& cfg) {
  const int m = spectrum.m();
  const int n = tau.size();
  if (tau.m() != m)
    fail(ErrorKind::DimensionMismatch, "subset has wrong ambient dimension");
  if (n < 1 || n >= m)
    fail(ErrorKind::SubsetSizeMismatch, "corner subset needs 1 <= |tau| < m");
  const VectorXd& lam = spectrum.lambda();

  // closed product formula z_i = prod_{j in tau} (1 - lambda_i / lambda_j)
  VectorXd z = VectorXd::Ones(m);
  for (int j : tau.indices())
    z = z.cwiseProduct(VectorXd::Ones(m) - lam / lam(j));

  // independent route: solve (S' Lambda V) alpha = 1.  The columns span
  // powers of lambda, so the system is Vandermonde-conditioned; unit column
  // scaling plus refinement with compensated residuals keeps the forward
  // error of alpha far below the conditioning limit.
  MatrixXd V = vandermonde(spectrum, n);
  MatrixXd LV = lam.asDiagonal() * V;
  MatrixXd S(n, n);
  for (int r = 0; r < n; ++r) S.row(r) = LV.row(tau.indices()[r]);
  VectorXd cs(n);
  for (int k = 0; k < n; ++k) {
    double s = S.col(k).norm();
    cs(k) = (s > 0.0) ? 1.0 / s : 1.0;
  }
  Eigen::FullPivLU<MatrixXd> lu(S * cs.asDiagonal());
  VectorXd alpha = cs.asDiagonal() * lu.solve(VectorXd::Ones(n));
  for (int it = 0; it < 3; ++it) {
    VectorXd r(n);
    for (int j = 0; j < n; ++j) {
      double s = 1.0, comp = 0.0;
      for (int k = 0; k < n; ++k) {
        double p = S(j, k) * alpha(k);
        double perr = std::fma(S(j, k), alpha(k), -p);
        double t = s - p;
        double bb = t - s;
        comp += (s - (t - bb)) + (-p - bb) - perr;
        s = t;
      }
      r(j) = s + comp;
    }
    alpha += cs.asDiagonal() * lu.solve(r);
  }
  VectorXd omega_solve = LV * alpha;

  ShrinkageTriple out;
  out.omega = VectorXd::Ones(m) - z;
  out.z = z;
  out.alpha = alpha;
  double scale = std::max(1.0, out.omega.cwiseAbs().maxCoeff());
  if ((omega_solve - out.omega).cwiseAbs().maxCoeff() > cfg.solve_tol * scale)
    fail(ErrorKind::CrossCheckFailure,
         "corner product formula and matrix solve disagree beyond tolerance");
  return out;
}

CornerWeight corner_weight(const EigenSpectrum& spectrum,
                           const IndexSubset& tau) {
  const int m = spectrum.m();
  const int n = tau.size();
  if (tau.m() != m)
    fail(ErrorKind::DimensionMismatch, "subset has wrong ambient dimension");
  if (n < 1 || n > m)
    fail(ErrorKind::SubsetSizeMismatch, "weight subset needs 1 <= |tau| <= m");
  const VectorXd& lam = spectrum.lambda();
  const std::vector<int>& t = tau.indices();

  CornerWeight out;
  out.tau = tau;
  out.log_pi = log_pi_of(lam, t);
  double pi = 1.0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    pi *= lam(t[a]);
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      double d = lam(t[a]) - lam(t[b]);
      pi *= d * d;
    }
  }
  out.pi = pi;

  // determinant-product cross-check, affordable at desk scale
  if (m <= 12 && n < m) {
    MatrixXd V = vandermonde(spectrum, n);
    MatrixXd LV = lam.asDiagonal() * V;
    MatrixXd SV(n, n), SLV(n, n);
    for (int r = 0; r < n; ++r) {
      SV.row(r) = V.row(t[r]);
      SLV.row(r) = LV.row(t[r]);
    }
    double det_prod = SV.determinant() * SLV.determinant();
    if (std::abs(det_prod - pi) > 1e-8 * std::max(1.0, std::abs(pi)))
      fail(ErrorKind::CrossCheckFailure,
           "corner weight closed form disagrees with determinant product");
  }
  return out;
}

AverageResult shrinkage_average(const EigenSpectrum& spectrum,
                                const SquaredObservation& psi, int n,
                                const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (psi.psi.size() != m)
    fail(ErrorKind::DimensionMismatch, "psi has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "shrinkage needs 1 <= n < m");
  if (psi.cardinality() < n)
    fail(ErrorKind::SingularSystem,
         "support below direction count: no corner carries weight");
  if (binomial(m, n) > static_cast<double>(cfg.enum_cap))
    fail(ErrorKind::EnumerationCapExceeded,
         "C(m,n) exceeds the enumeration cap");

  AverageResult out;
  // monomials psi^tau vanish off the support, so only support subsets matter
  auto taus = subsets_of(psi.support, n, cfg.enum_cap);
  const std::size_t K = taus.size();

  if (psi.cardinality() == n) {
    // single surviving monomial: the average is exactly that corner
    IndexSubset tau(taus[0], m);
    out.triple = corner_shrinkage(spectrum, tau, cfg);
    out.taus.push_back(std::move(tau));
    out.weights.push_back(1.0);
    return out;
  }

  std::vector<double> logw(K);
  double logmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < K; ++i) {
    logw[i] = log_monomial(psi.psi, taus[i]) +
              log_pi_of(spectrum.lambda(), taus[i]);
    logmax = std::max(logmax, logw[i]);
  }
  Kahan total;
  std::vector<double> w(K);
  for (std::size_t i = 0; i < K; ++i) {
    w[i] = std::exp(logw[i] - logmax);
    total.add(w[i]);
  }

  std::vector<Kahan> omega_acc(m);
  std::vector<Kahan> alpha_acc(n);
  out.taus.reserve(K);
  out.weights.reserve(K);
  for (std::size_t i = 0; i < K; ++i) {
    double p = w[i] / total.sum;
    IndexSubset tau(taus[i], m);
    ShrinkageTriple corner = corner_shrinkage(spectrum, tau, cfg);
    for (int r = 0; r < m; ++r) omega_acc[r].add(p * corner.omega(r));
    for (int r = 0; r < n; ++r) alpha_acc[r].add(p * corner.alpha(r));
    out.taus.push_back(std::move(tau));
    out.weights.push_back(p);
  }
  out.triple.omega.resize(m);
  out.triple.alpha.resize(n);
  for (int r = 0; r < m; ++r) out.triple.omega(r) = omega_acc[r].sum;
  for (int r = 0; r < n; ++r) out.triple.alpha(r) = alpha_acc[r].sum;
  out.triple.z = VectorXd::Ones(m) - out.triple.omega;
  return out;
}

double alpha_corner_det(const EigenSpectrum& spectrum, const IndexSubset& tau,
                        int k) {
  const int m = spectrum.m();
  const int n = tau.size();
  if (tau.m() != m)
    fail(ErrorKind::DimensionMismatch, "subset has wrong ambient dimension");
  if (n < 1 || n >= m)
    fail(ErrorKind::SubsetSizeMismatch, "corner subset needs 1 <= |tau| < m");
  if (k < 1 || k > n)
    fail(ErrorKind::InvalidArgument, "alpha coordinate k must be in 1..n");
  // W holds powers 0..n of lambda; W_(-k) deletes the power-k column.  Both
  // minors factor over the node differences,
  //   det(S' W_(-k)) = e_{n-k}(lambda_tau) prod_{r<s}(lambda_s - lambda_r),
  // so the difference product cancels in the ratio and the remaining
  // elementary symmetric functions evaluate without cancellation.
  const std::vector<int>& t = tau.indices();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int r = 0; r < n; ++r) {
    double x = spectrum[t[r]];
    for (int j = std::min(r + 1, n); j >= 1; --j) e[j] += x * e[j - 1];
  }
  double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k-1)
  return sign * e[n - k] / e[n];
}

MarginalSegment marginal_segment(const EigenSpectrum& spectrum,
                                 const SquaredObservation& psi, int n, int k,
                                 const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (psi.psi.size() != m)
    fail(ErrorKind::DimensionMismatch, "psi has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "shrinkage needs 1 <= n < m");
  if (k < 0 || k >= m) fail(ErrorKind::InvalidArgument, "axis index out of range");

  std::vector<int> rest;  // support minus {k}
  for (int i : psi.support)
    if (i != k) rest.push_back(i);
  if (static_cast<int>(rest.size()) < n)
    fail(ErrorKind::InsufficientSupport,
         "support without the marginal axis is too small for the zero endpoint");

  const VectorXd& lam = spectrum.lambda();

  // endpoint at psi_k = 0
  VectorXd psi0 = psi.psi;
  psi0(k) = 0.0;
  SquaredObservation sq0;
  sq0.psi = psi0;
  sq0.support = rest;
  MarginalSegment out;
  out.endpoint_zero = shrinkage_direct(spectrum, sq0, n, cfg).z;

  // endpoint at psi_k -> infinity: (I - Lambda/lambda_k) z^{(n-1)}(theta),
  // theta = (I - Lambda/lambda_k)^2 psi; the n = 1 base uses z^(0) = 1
  VectorXd damp = VectorXd::Ones(m) - lam / lam(k);
  VectorXd theta = damp.cwiseProduct(damp).cwiseProduct(psi.psi);
  VectorXd z_prev;
  if (n == 1) {
    z_prev = VectorXd::Ones(m);
  } else {
    SquaredObservation sqt;
    sqt.psi = theta;
    for (int i : rest) sqt.support.push_back(i);
    z_prev = shrinkage_direct(spectrum, sqt, n - 1, cfg).z;
  }
  out.endpoint_inf = damp.cwiseProduct(z_prev);

  // g_k = D / B with B = sum_{|tau|=n, tau free of k} psi^tau pi_tau and
  // D = sum_{|tau|=n-1, tau free of k} psi^tau pi_{tau + {k}}
  auto logsumexp = [](const std::vector<double>& logs) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logs) mx = std::max(mx, v);
    if (!std::isfinite(mx)) return mx;
    Kahan acc;
    for (double v : logs) acc.add(std::exp(v - mx));
    return mx + std::log(acc.sum);
  };
  std::vector<double> logB, logD;
  for (auto& tau : subsets_of(rest, n, cfg.enum_cap))
    logB.push_back(log_monomial(psi.psi, tau) + log_pi_of(lam, tau));
  for (auto& tau : subsets_of(rest, n - 1, cfg.enum_cap)) {
    std::vector<int> with_k = tau;
    with_k.push_back(k);
    logD.push_back(log_monomial(psi.psi, tau) + log_pi_of(lam, with_k));
  }
  out.g_k = std::exp(logsumexp(logD) - logsumexp(logB));
  out.t = 1.0 / (1.0 + psi.psi(k) * out.g_k);
  return out;
}

ExtremeBound extreme_bound(const EigenSpectrum& spectrum, int n) {
  const int m = spectrum.m();
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "extreme bound needs 1 <= n < m");
  std::vector<int> tail(n);
  for (int i = 0; i < n; ++i) tail[i] = m - n + i;
  ExtremeBound out;
  out.tau_tail = IndexSubset(tail, m);
  out.c = spectrum[m - n - 1] / spectrum[m - n];
  double pw = std::pow(out.c - 1.0, n);
  if (n % 2 == 0) {
    out.bound = 1.0 - pw;
    out.side = -1;
  } else {
    out.bound = 1.0 + pw;
    out.side = +1;
  }
  return out;
}

}  // namespace plsgeom
