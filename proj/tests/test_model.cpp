#include <doctest.h>

#include "plsgeom/model.hpp"
#include "test_helpers.hpp"

using namespace plsgeom;
using testutil::vec;

TEST_CASE("exp_correlation matches the worked five-variable example") {
  MatrixXd G = exp_correlation(5, 1.0 / 3.0);
  CHECK(G(0, 0) == doctest::Approx(1.0));
  CHECK(G(0, 1) == doctest::Approx(0.717).epsilon(1e-3));
  CHECK(G(0, 2) == doctest::Approx(0.513).epsilon(1e-3));
  CHECK(G(0, 3) == doctest::Approx(0.368).epsilon(1e-3));
  CHECK(G(0, 4) == doctest::Approx(0.264).epsilon(1e-3));
  CHECK(G.isApprox(G.transpose()));
  CHECK_THROWS_AS(exp_correlation(1, 0.5), Error);
  CHECK_THROWS_AS(exp_correlation(4, -1.0), Error);
}

TEST_CASE("spectrum_from_gram on the worked example") {
  EigenSpectrum s = testutil::demo_spectrum();
  REQUIRE(s.m() == 5);
  CHECK(s[0] == doctest::Approx(3.185).epsilon(5e-4));
  CHECK(s[1] == doctest::Approx(0.981).epsilon(5e-3));
  CHECK(s[2] == doctest::Approx(0.411).epsilon(5e-3));
  CHECK(s[3] == doctest::Approx(0.241).epsilon(5e-3));
  CHECK(s[4] == doctest::Approx(0.181).epsilon(5e-3));
  CHECK(s[0] / s[4] == doctest::Approx(17.6).epsilon(5e-3));
}

TEST_CASE("spectrum_from_gram validation") {
  CHECK_THROWS_AS(spectrum_from_gram(MatrixXd::Identity(3, 3)), Error);
  MatrixXd diag = vec({4, 1}).asDiagonal();
  EigenSpectrum s = spectrum_from_gram(diag);
  CHECK(s[0] == doctest::Approx(4.0));
  CHECK(s[1] == doctest::Approx(1.0));
  MatrixXd skew(2, 2);
  skew << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(spectrum_from_gram(skew), Error);
  MatrixXd indef = vec({1, -1}).asDiagonal();
  CHECK_THROWS_AS(spectrum_from_gram(indef), Error);
}

TEST_CASE("vandermonde layout and determinants") {
  EigenSpectrum s(vec({2, 1}));
  MatrixXd V = vandermonde(s, 2);
  CHECK(V(0, 0) == 1.0);
  CHECK(V(1, 0) == 1.0);
  CHECK(V(0, 1) == 2.0);
  CHECK(V(1, 1) == 1.0);

  EigenSpectrum s3(vec({3, 2, 1}));
  MatrixXd V1 = vandermonde(s3, 1);
  CHECK(V1.col(0).isOnes());

  EigenSpectrum s41(vec({4, 1}));
  MatrixXd V41 = vandermonde(s41, 2);
  CHECK(V41.determinant() == doctest::Approx(-3.0));
  CHECK(V41.colwise().reverse().eval().rowwise().reverse().eval()(0, 0) == 1.0);
  MatrixXd rev = V41.colwise().reverse();  // increasing-node orientation
  CHECK(rev.determinant() == doctest::Approx(3.0));
}

TEST_CASE("krylov matrix equals diag(y) * vandermonde") {
  EigenSpectrum s(vec({2, 1}));
  MatrixXd K = krylov_matrix(s, vec({1, 1}), 1);
  CHECK(K(0, 0) == 1.0);
  CHECK(K(1, 0) == 1.0);
  MatrixXd K2 = krylov_matrix(s, vec({0, 3}), 1);
  CHECK(K2(0, 0) == 0.0);
  CHECK(K2(1, 0) == 3.0);

  testutil::Draw d(101);
  for (int trial = 0; trial < 50; ++trial) {
    int m = d.integer(3, 8);
    EigenSpectrum spec(testutil::random_lambda(d, m));
    VectorXd y = testutil::random_psi(d, m, -2.0, 2.0);
    int n = d.integer(1, m - 1);
    MatrixXd K3 = krylov_matrix(spec, y, n);
    MatrixXd ref = y.asDiagonal() * vandermonde(spec, n);
    CHECK((K3 - ref).cwiseAbs().maxCoeff() == 0.0);  // identical construction
  }
}

TEST_CASE("pls_fit closed form at m=2, n=1") {
  // beta = (y' y / y' Lambda^2 y) Lambda y elementwise... validated against
  // the exact rational evaluation for y = (1,1), lambda = (2,1):
  // K = y, K'LK = 3, K'y = 2, beta = (2/3, 2/3), yhat = (4/3, 2/3)
  EigenSpectrum s(vec({2, 1}));
  PlsConfig cfg;
  auto fit = pls_fit(s, ObservationVector::make(vec({1, 1}), cfg), 1, cfg);
  CHECK(fit.beta_hat(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(fit.beta_hat(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(fit.y_hat(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(fit.y_hat(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(fit.residual(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(fit.residual(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("pls_fit properties") {
  PlsConfig cfg;
  testutil::Draw d(202);
  for (int trial = 0; trial < 100; ++trial) {
    int m = d.integer(3, 7);
    EigenSpectrum spec(testutil::random_lambda(d, m));
    VectorXd y(m);
    for (int i = 0; i < m; ++i)
      y(i) = d.uniform(0.3, 2.0) * (d.uniform(0, 1) < 0.5 ? -1.0 : 1.0);
    int n = d.integer(1, m - 1);
    ObservationVector ob = ObservationVector::make(y, cfg);
    PlsFit fit = pls_fit(spec, ob, n, cfg);

    // projection idempotence, up to the conditioning of the Krylov system
    MatrixXd PP = fit.projection * fit.projection;
    CHECK((PP - fit.projection).cwiseAbs().maxCoeff() <
          1e-5 * std::max(1.0, fit.projection.cwiseAbs().maxCoeff()));

    // scale equivariance
    PlsFit fit2 = pls_fit(spec, ObservationVector::make(2.5 * y, cfg), n, cfg);
    CHECK((fit2.y_hat - 2.5 * fit.y_hat).cwiseAbs().maxCoeff() <
          1e-7 * fit.y_hat.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("pls_fit interpolates on an exactly-sparse support") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  VectorXd y = vec({1, 0, 0, 1, 1});
  ObservationVector ob = ObservationVector::make(y, cfg);
  PlsFit fit = pls_fit(s, ob, 3, cfg);
  for (int i : {0, 3, 4})
    CHECK(fit.y_hat(i) == doctest::Approx(y(i)).epsilon(1e-9));
}

TEST_CASE("pls_fit rejects thin support") {
  PlsConfig cfg;
  EigenSpectrum s = testutil::demo_spectrum();
  ObservationVector ob = ObservationVector::make(vec({1, 0, 0, 0, 0}), cfg);
  CHECK_THROWS_AS(pls_fit(s, ob, 2, cfg), Error);
  try {
    pls_fit(s, ob, 2, cfg);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularKrylovSystem);
    CHECK(exit_code(e.kind()) == 3);
  }
}
