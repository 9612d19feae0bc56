#include "plsgeom/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "plsgeom/model.hpp"
#include "plsgeom/shrinkage.hpp"
#include "plsgeom/subsets.hpp"

namespace plsgeom {

namespace {

std::vector<int> changes_of(const std::string& symbols) {
  std::vector<int> chg;
  for (std::size_t i = 1; i < symbols.size(); ++i)
    if (symbols[i] != symbols[i - 1]) chg.push_back(static_cast<int>(i));  // 1-based gap
  return chg;
}

std::string pattern_from_changes(int m, const std::vector<int>& gaps,
                                 char last) {
  std::string s(m, last);
  std::vector<bool> flip(m, false);
  for (int g : gaps) flip[g] = true;  // change between positions g and g+1
  char cur = last;
  for (int i = m - 1; i >= 1; --i) {
    if (flip[i]) cur = (cur == '+') ? '-' : '+';
    s[i - 1] = cur;
  }
  return s;
}

}  // namespace

SignChanges sign_changes(const VectorXd& x, double zero_tol) {
  const int m = static_cast<int>(x.size());
  if (m == 0) fail(ErrorKind::ZeroVector, "empty vector");
  std::vector<int> sgn(m);
  bool any = false;
  for (int i = 0; i < m; ++i) {
    if (x(i) > zero_tol)
      sgn[i] = 1, any = true;
    else if (x(i) < -zero_tol)
      sgn[i] = -1, any = true;
    else
      sgn[i] = 0;
  }
  if (!any) fail(ErrorKind::ZeroVector, "vector is zero under the tolerance");

  SignChanges out;
  int prev = 0;
  for (int i = 0; i < m; ++i) {
    if (sgn[i] == 0) continue;
    if (prev != 0 && sgn[i] != prev) ++out.v_min;
    prev = sgn[i];
  }
  // max over sign completions: DP on the last committed sign
  const int kNeg = std::numeric_limits<int>::min();
  int dp_plus = kNeg, dp_minus = kNeg;
  auto allow = [&](int s, int which) {
    return s == 0 || s == which;
  };
  if (allow(sgn[0], 1)) dp_plus = 0;
  if (allow(sgn[0], -1)) dp_minus = 0;
  for (int i = 1; i < m; ++i) {
    int np = kNeg, nm = kNeg;
    if (allow(sgn[i], 1)) {
      np = dp_plus;
      if (dp_minus != kNeg) np = std::max(np, dp_minus + 1);
    }
    if (allow(sgn[i], -1)) {
      nm = dp_minus;
      if (dp_plus != kNeg) nm = std::max(nm, dp_plus + 1);
    }
    dp_plus = np;
    dp_minus = nm;
  }
  out.v_max = std::max(dp_plus, dp_minus);
  return out;
}

std::vector<SignPattern> enumerate_signatures(int m, int n) {
  if (m < 2 || n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "signatures need 1 <= n < m");
  std::vector<SignPattern> out;
  for (auto& gaps0 : subsets(m - 1, n, 2000000)) {
    std::vector<int> gaps(gaps0.size());
    for (std::size_t i = 0; i < gaps0.size(); ++i) gaps[i] = gaps0[i] + 1;
    SignPattern p;
    p.symbols = pattern_from_changes(m, gaps, '-');
    p.change_positions = gaps;
    out.push_back(std::move(p));
  }
  return out;
}

SignPattern corner_sign_pattern(int m, const IndexSubset& tau) {
  if (tau.m() != m)
    fail(ErrorKind::DimensionMismatch, "subset has wrong ambient dimension");
  SignPattern p;
  p.symbols.assign(m, '?');
  const auto& t = tau.indices();
  for (int i = 0; i < m; ++i) {
    if (tau.contains(i)) {
      p.symbols[i] = '0';
      continue;
    }
    int tail = static_cast<int>(t.end() -
                                std::upper_bound(t.begin(), t.end(), i));
    p.symbols[i] = (tail % 2 == 0) ? '+' : '-';
  }
  return p;
}

SignPattern simplex_template(int m, const IndexSubset& T) {
  if (T.m() != m)
    fail(ErrorKind::DimensionMismatch, "subset has wrong ambient dimension");
  const int n = T.size() - 1;
  if (n < 1 || T.size() > m)
    fail(ErrorKind::SubsetSizeMismatch, "template needs |T| = n+1 >= 2");
  const auto& t = T.indices();
  SignPattern p;
  p.symbols.assign(m, 'x');
  for (int k = 0; k <= n; ++k)
    p.symbols[t[k]] = ((n - k) % 2 == 0) ? '+' : '-';
  for (int i = 0; i < t.front(); ++i)
    p.symbols[i] = (n % 2 == 0) ? '+' : '-';
  for (int i = t.back() + 1; i < m; ++i) p.symbols[i] = '+';
  return p;
}

std::vector<SignPattern> expand_template(const SignPattern& tpl, int n) {
  const int m = tpl.m();
  std::vector<int> free_pos;
  for (int i = 0; i < m; ++i) {
    char c = tpl.symbols[i];
    if (c == 'x')
      free_pos.push_back(i);
    else if (c != '+' && c != '-')
      fail(ErrorKind::InvalidArgument,
           "template must contain only +, - and x symbols");
  }
  if (free_pos.size() > 24)
    fail(ErrorKind::EnumerationCapExceeded, "too many free template symbols");
  std::vector<SignPattern> out;
  for (std::uint32_t mask = 0; mask < (1u << free_pos.size()); ++mask) {
    std::string s = tpl.symbols;
    for (std::size_t b = 0; b < free_pos.size(); ++b)
      s[free_pos[b]] = (mask >> b & 1u) ? '-' : '+';
    auto chg = changes_of(s);
    if (static_cast<int>(chg.size()) != n) continue;
    SignPattern p;
    p.symbols = std::move(s);
    p.change_positions = std::move(chg);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const SignPattern& a, const SignPattern& b) {
              return a.change_positions < b.change_positions;
            });
  return out;
}

LemmaCheckResult signature_lemma_check(const EigenSpectrum& spectrum,
                                       const SquaredObservation& psi, int n,
                                       const PlsConfig& cfg) {
  const VectorXd z = shrinkage_direct(spectrum, psi, n, cfg).z;
  const int m = static_cast<int>(z.size());
  double tol = cfg.zero_rel_tol * std::max(1.0, z.cwiseAbs().maxCoeff());
  SignChanges v = sign_changes(z, tol);
  LemmaCheckResult out;
  out.v_min = v.v_min;
  out.v_max = v.v_max;
  out.passes = (v.v_max <= n);
  const bool rich = psi.cardinality() > n;
  if (rich) out.passes = out.passes && (v.v_min == n || v.v_min == n - 1);
  const bool ends = std::abs(z(0)) > tol && std::abs(z(m - 1)) > tol;
  if (rich && ends) out.passes = out.passes && (v.v_min == n);
  int card_z = 0;
  for (int i = 0; i < m; ++i)
    if (std::abs(z(i)) > tol) ++card_z;
  if (card_z == m) {
    bool head_ok = (n % 2 == 0) ? (z(0) > 0.0) : (z(0) < 0.0);
    out.passes = out.passes && (v.v_min == n) && (z(m - 1) > 0.0) && head_ok;
  }
  return out;
}

bool total_positivity_check(const MatrixXd& M, int max_order,
                            std::int64_t cap) {
  const int r = static_cast<int>(M.rows());
  const int c = static_cast<int>(M.cols());
  const int top = std::min({max_order, r, c});
  double total = 0.0;
  for (int k = 1; k <= top; ++k) total += binomial(r, k) * binomial(c, k);
  if (total > static_cast<double>(cap))
    fail(ErrorKind::CapExceeded, "too many minors to enumerate");
  for (int k = 1; k <= top; ++k) {
    auto rows = subsets(r, k, cap);
    auto cols = subsets(c, k, cap);
    MatrixXd sub(k, k);
    for (const auto& rs : rows) {
      for (const auto& cs : cols) {
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = M(rs[i], cs[j]);
        if (!(sub.determinant() > 0.0)) return false;
      }
    }
  }
  return true;
}

RayFan inverse_rays(const EigenSpectrum& spectrum, const VectorXd& z, int n,
                    const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (z.size() != m) fail(ErrorKind::DimensionMismatch, "z has wrong length");
  if (n < 1 || n >= m)
    fail(ErrorKind::InvalidDimension, "rays need 1 <= n < m");
  double tol = cfg.zero_rel_tol * z.cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    if (std::abs(z(i)) <= tol)
      fail(ErrorKind::InadmissibleSignature,
           "z has a (numerically) zero entry");
  if (z(m - 1) <= 0.0)
    fail(ErrorKind::InadmissibleSignature, "admissible z must end positive");

  // sign-concordant sections
  std::vector<std::pair<int, int>> runs;  // [begin, end)
  int begin = 0;
  for (int i = 1; i <= m; ++i) {
    if (i == m || (z(i) > 0) != (z(begin) > 0)) {
      runs.emplace_back(begin, i);
      begin = i;
    }
  }
  if (static_cast<int>(runs.size()) != n + 1)
    fail(ErrorKind::InadmissibleSignature,
         "z must have exactly n sign changes");

  RayFan fan;
  double kz = 1.0;
  for (auto& run : runs) {
    fan.sections.push_back(run.second - run.first);
    kz *= run.second - run.first;
  }
  if (kz > static_cast<double>(cfg.enum_cap))
    fail(ErrorKind::EnumerationCapExceeded, "ray count exceeds enumeration cap");
  fan.k_z = static_cast<std::int64_t>(kz);

  MatrixXd V = vandermonde(spectrum, n);
  MatrixXd VZ = V.transpose() * z.asDiagonal();  // n x m
  double vz_norm = VZ.norm();

  fan.rays.resize(m, fan.k_z);
  std::vector<int> pick(n + 1);
  for (int j = 0; j <= n; ++j) pick[j] = runs[j].first;
  for (std::int64_t r = 0; r < fan.k_z; ++r) {
    MatrixXd M(n, n + 1);
    for (int j = 0; j <= n; ++j) M.col(j) = VZ.col(pick[j]);
    // row scales differ by powers of lambda; normalizing them leaves the
    // null space unchanged and keeps the SVD accurate
    for (int k = 0; k < n; ++k) {
      double s = M.row(k).norm();
      if (s > 0.0) M.row(k) /= s;
    }
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    VectorXd nullvec = svd.matrixV().col(n);
    if (nullvec(0) < 0.0) nullvec = -nullvec;
    double mx = nullvec.maxCoeff();
    if (!(nullvec.minCoeff() > 1e-10 * mx))
      fail(ErrorKind::PositivityFailure,
           "ray null vector is not strictly positive: the cardinality-(n+1) "
           "extremal-direction conjecture fails on this input");
    VectorXd d = VectorXd::Zero(m);
    for (int j = 0; j <= n; ++j) d(pick[j]) = nullvec(j);
    d /= d.sum();
    if ((VZ * d).norm() > 1e-8 * vz_norm * d.norm())
      fail(ErrorKind::CrossCheckFailure, "ray violates the cone equations");
    fan.rays.col(r) = d;
    fan.supports.emplace_back(std::vector<int>(pick.begin(), pick.end()), m);
    // odometer, rightmost section fastest: supports come out lexicographic
    for (int j = n; j >= 0; --j) {
      if (++pick[j] < runs[j].second) break;
      pick[j] = runs[j].first;
    }
  }
  return fan;
}

RayMembership ray_membership(const EigenSpectrum& spectrum,
                             const SquaredObservation& psi, const VectorXd& z,
                             const RayFan& fan, const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (psi.psi.size() != m || z.size() != m)
    fail(ErrorKind::DimensionMismatch, "psi or z has wrong length");
  const int n = static_cast<int>(fan.sections.size()) - 1;
  MatrixXd V = vandermonde(spectrum, n);
  MatrixXd VZ = V.transpose() * z.asDiagonal();
  double gate = (VZ * psi.psi).norm();
  if (gate > 1e-6 * VZ.norm() * psi.psi.norm())
    fail(ErrorKind::NotInCone, "psi does not satisfy the cone equations");
  (void)cfg;
  RayMembership out;
  out.coefficients = nnls(fan.rays, psi.psi);
  out.residual = (psi.psi - fan.rays * out.coefficients).norm();
  return out;
}

SquaredObservation caratheodory_reduce(const EigenSpectrum& spectrum,
                                       const SquaredObservation& psi, int n,
                                       const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (psi.psi.size() != m)
    fail(ErrorKind::DimensionMismatch, "psi has wrong length");
  const VectorXd z = shrinkage_direct(spectrum, psi, n, cfg).z;
  MatrixXd V = vandermonde(spectrum, n);
  MatrixXd VZ = V.transpose() * z.asDiagonal();

  VectorXd cur = psi.psi;
  std::vector<int> support = psi.support;
  while (static_cast<int>(support.size()) > n + 1) {
    // null direction over the first n+1 support entries, for determinism
    std::vector<int> cols(support.begin(), support.begin() + n + 1);
    MatrixXd M(n, n + 1);
    for (int j = 0; j <= n; ++j) M.col(j) = VZ.col(cols[j]);
    for (int k = 0; k < n; ++k) {
      double s = M.row(k).norm();
      if (s > 0.0) M.row(k) /= s;
    }
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    VectorXd eta = svd.matrixV().col(n);
    if (eta.maxCoeff() <= 0.0) eta = -eta;
    double step = std::numeric_limits<double>::infinity();
    int hit = -1;
    double eta_scale = eta.cwiseAbs().maxCoeff();
    for (int j = 0; j <= n; ++j) {
      if (eta(j) > 1e-14 * eta_scale) {
        double s = cur(cols[j]) / eta(j);
        if (s < step) {
          step = s;
          hit = j;
        }
      }
    }
    if (hit < 0)
      fail(ErrorKind::StallDetected, "no positive step direction available");
    for (int j = 0; j <= n; ++j) cur(cols[j]) -= step * eta(j);
    cur(cols[hit]) = 0.0;
    std::vector<int> next;
    for (int i : support)
      if (cur(i) > 0.0) next.push_back(i);
    if (next.size() >= support.size())
      fail(ErrorKind::StallDetected, "support did not shrink");
    support = std::move(next);
  }

  SquaredObservation out;
  out.psi = cur;
  out.support = support;
  // the reduction must not have moved z
  VectorXd z2 = shrinkage_direct(spectrum, out, n, cfg).z;
  double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  if ((z2 - z).cwiseAbs().maxCoeff() > 1e-8 * scale)
    fail(ErrorKind::CrossCheckFailure, "reduction failed to preserve z");
  return out;
}

SquaredObservation hull_inverse(const EigenSpectrum& spectrum,
                                const VectorXd& c, const PlsConfig& cfg) {
  const int m = spectrum.m();
  if (c.size() != m)
    fail(ErrorKind::DimensionMismatch, "need one convex weight per corner");
  for (int i = 0; i < m; ++i)
    if (!(c(i) > 0.0))
      fail(ErrorKind::NonPositiveWeight, "convex weights must be positive");
  if (std::abs(c.sum() - 1.0) > 1e-8)
    fail(ErrorKind::NonPositiveWeight, "convex weights must sum to one");
  VectorXd psi(m);
  for (int i = 0; i < m; ++i) {
    IndexSubset tau = IndexSubset({i}, m).complement();
    psi(i) = corner_weight(spectrum, tau).pi / c(i);
  }
  return SquaredObservation::from_psi(psi, cfg);
}

}  // namespace plsgeom
