#include <doctest.h>

#include <cmath>

#include "plsgeom/dof.hpp"
#include "plsgeom/model.hpp"
#include "plsgeom/shrinkage.hpp"
#include "test_helpers.hpp"

using namespace plsgeom;
using testutil::vec;

namespace {
ObservationVector ob(const VectorXd& y) {
  return ObservationVector::make(y, PlsConfig{});
}
}  // namespace

TEST_CASE("jacobian closed form for the one-direction two-variable model") {
  PlsConfig cfg;
  EigenSpectrum s(vec({2, 1}));
  DofReport rep = prediction_jacobian(s, ob(vec({1, 1})), 1, cfg);
  // hand-computed: J = [[8/9, 4/9], [-2/9, 8/9]]
  CHECK(rep.jacobian(0, 0) == doctest::Approx(8.0 / 9).epsilon(1e-12));
  CHECK(rep.jacobian(0, 1) == doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(rep.jacobian(1, 0) == doctest::Approx(-2.0 / 9).epsilon(1e-12));
  CHECK(rep.jacobian(1, 1) == doctest::Approx(8.0 / 9).epsilon(1e-12));
  CHECK(rep.gdof_hat == doctest::Approx(16.0 / 9).epsilon(1e-12));
  CHECK(rep.fd_error < 1e-6);
}

TEST_CASE("finite differences validate the jacobian on random instances") {
  PlsConfig cfg;
  testutil::Draw d(909);
  for (int trial = 0; trial < 60; ++trial) {
    int m = d.integer(3, 6);
    EigenSpectrum spec(testutil::random_lambda(d, m));
    int n = d.integer(1, m - 1);
    VectorXd y(m);
    for (int i = 0; i < m; ++i)
      y(i) = d.uniform(0.3, 2.0) * (d.uniform(0, 1) < 0.5 ? -1 : 1);
    DofReport rep = prediction_jacobian(spec, ob(y), n, cfg);
    CHECK(rep.fd_error < 1e-4 * std::max(1.0, rep.jacobian.cwiseAbs().maxCoeff()));
    std::pair<double, double> est = gdof_estimators(spec, ob(y), n, cfg);
    CHECK(est.first == doctest::Approx(rep.gdof_hat).epsilon(1e-12));
    CHECK(est.second == doctest::Approx(rep.gdof_dp_hat).epsilon(1e-12));
  }
}

TEST_CASE("estimators reduce to the corner closed forms at sparse y") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  VectorXd y = vec({1, 0, 0, 1, 1});
  auto est = gdof_estimators(s, ob(y), 3, cfg);

  ShrinkageTriple corner = corner_shrinkage(s, IndexSubset({0, 3, 4}, 5), cfg);
  double gdof = 3 + corner.omega(1) + corner.omega(2);
  double gdof_dp = 5 - corner.z(1) * corner.z(1) - corner.z(2) * corner.z(2);
  CHECK(est.first == doctest::Approx(gdof).epsilon(1e-9));
  CHECK(est.second == doctest::Approx(gdof_dp).epsilon(1e-9));
  // the published value for this configuration
  CHECK(est.first == doctest::Approx(-5.18843).epsilon(1e-5));
}

TEST_CASE("worked negative-dof value at the noiseless signal") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  VectorXd beta = vec({0.10, 0.01, 0.01, 5.00, 5.00});
  VectorXd y = s.lambda().cwiseProduct(beta);
  auto est = gdof_estimators(s, ob(y), 3, cfg);
  CHECK(est.first == doctest::Approx(-3.134).epsilon(2e-3));
}

TEST_CASE("monte carlo experiment is deterministic and excludes failures") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  McConfig mc;
  mc.beta = vec({0.10, 0.01, 0.01, 5.00, 5.00});
  mc.sigma = 0.02;
  mc.replications = 400;
  mc.seed = 20260815;
  mc.n = 3;

  McResult a = mc_gdof(s, mc, cfg);
  McResult b = mc_gdof(s, mc, cfg);
  REQUIRE(a.gdof.size() == b.gdof.size());
  for (std::size_t i = 0; i < a.gdof.size(); ++i) CHECK(a.gdof[i] == b.gdof[i]);
  CHECK(a.mean_gdof == b.mean_gdof);
  CHECK(a.prob_negative == b.prob_negative);
  CHECK(a.excluded.empty());
  CHECK(std::is_sorted(a.gdof_sorted.begin(), a.gdof_sorted.end()));
  CHECK(a.gdof_sorted.size() == a.gdof.size());

  McConfig other = mc;
  other.seed = 7;
  McResult c = mc_gdof(s, other, cfg);
  CHECK(c.mean_gdof != a.mean_gdof);

  // sigma -> 0 collapses every replicate onto the noiseless value
  McConfig tight = mc;
  tight.sigma = 1e-12;
  tight.replications = 5;
  McResult t = mc_gdof(s, tight, cfg);
  for (double g : t.gdof) CHECK(g == doctest::Approx(-3.134).epsilon(2e-3));
}

TEST_CASE("monte carlo standard error is undefined for one replicate") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  McConfig mc;
  mc.beta = VectorXd::Ones(5);
  mc.sigma = 0.1;
  mc.replications = 1;
  mc.seed = 3;
  mc.n = 2;
  McResult r = mc_gdof(s, mc, cfg);
  CHECK(r.gdof.size() == 1);
  CHECK(std::isnan(r.mc_se));
}
