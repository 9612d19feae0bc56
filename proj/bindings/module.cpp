// Python bindings for the shrinkage-geometry core.  Index arguments and
// returned supports are 0-based here; the 1-based convention is a CLI-surface
// concern only.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plsgeom/dof.hpp"
#include "plsgeom/geometry.hpp"
#include "plsgeom/model.hpp"
#include "plsgeom/shrinkage.hpp"

namespace py = pybind11;
using namespace plsgeom;

namespace {

IndexSubset subset(const std::vector<int>& tau, int m) {
  return IndexSubset(tau, m);
}

SquaredObservation make_psi(const VectorXd& psi) {
  return SquaredObservation::from_psi(psi, PlsConfig{});
}

py::dict triple_dict(const ShrinkageTriple& t) {
  py::dict d;
  d["omega"] = t.omega;
  d["z"] = t.z;
  d["alpha"] = t.alpha;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "PLS shrinkage factors and their geometry";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (exit_code(e.kind()) == 2)
        PyErr_SetString(PyExc_ValueError, e.what());
      else
        PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  mod.def("exp_correlation", &exp_correlation, py::arg("m"), py::arg("rate"),
          "Correlation matrix with entries exp(-rate * |i - j|).");

  mod.def(
      "spectrum_from_gram",
      [](const MatrixXd& gram) {
        return spectrum_from_gram(gram).lambda();
      },
      py::arg("gram"),
      "Strictly decreasing eigenvalues of a symmetric positive definite "
      "Gram matrix.");

  mod.def(
      "shrinkage",
      [](const VectorXd& lam, const VectorXd& psi, int n,
         const std::string& method) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        SquaredObservation sq = make_psi(psi);
        if (method == "direct")
          return triple_dict(shrinkage_direct(s, sq, n, cfg));
        if (method == "average") {
          AverageResult avg = shrinkage_average(s, sq, n, cfg);
          py::dict d = triple_dict(avg.triple);
          py::list taus;
          for (const auto& t : avg.taus) taus.append(t.indices());
          d["taus"] = taus;
          d["weights"] = avg.weights;
          return d;
        }
        fail(ErrorKind::InvalidArgument, "method must be direct or average");
      },
      py::arg("lam"), py::arg("psi"), py::arg("n"),
      py::arg("method") = "direct",
      "Shrinkage factors omega, relative residuals z = 1 - omega and the "
      "direction coefficients alpha for squared observations psi.");

  mod.def(
      "corner",
      [](const VectorXd& lam, const std::vector<int>& tau) {
        EigenSpectrum s(lam);
        return triple_dict(corner_shrinkage(s, subset(tau, s.m())));
      },
      py::arg("lam"), py::arg("tau"),
      "Corner shrinkage vector for observations supported exactly on tau.");

  mod.def(
      "corner_weight",
      [](const VectorXd& lam, const std::vector<int>& tau) {
        EigenSpectrum s(lam);
        CornerWeight w = corner_weight(s, subset(tau, s.m()));
        return py::make_tuple(w.pi, w.log_pi);
      },
      py::arg("lam"), py::arg("tau"),
      "(pi, log pi) for the convex-combination weight of a corner.");

  mod.def(
      "marginal_segment",
      [](const VectorXd& lam, const VectorXd& psi, int n, int k) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        MarginalSegment seg = marginal_segment(s, make_psi(psi), n, k, cfg);
        py::dict d;
        d["endpoint_zero"] = seg.endpoint_zero;
        d["endpoint_inf"] = seg.endpoint_inf;
        d["t"] = seg.t;
        d["g_k"] = seg.g_k;
        return d;
      },
      py::arg("lam"), py::arg("psi"), py::arg("n"), py::arg("k"),
      "Decomposition of z along the psi_k axis between its two endpoint "
      "profiles.");

  mod.def(
      "extreme_bound",
      [](const VectorXd& lam, int n) {
        EigenSpectrum s(lam);
        ExtremeBound b = extreme_bound(s, n);
        py::dict d;
        d["tau_tail"] = b.tau_tail.indices();
        d["bound"] = b.bound;
        d["c"] = b.c;
        d["side"] = b.side;
        return d;
      },
      py::arg("lam"), py::arg("n"),
      "Parity-dependent bound on the off-support entries of the tail "
      "corner vector.");

  mod.def(
      "signatures",
      [](int m, int n) {
        std::vector<std::string> out;
        for (auto& p : enumerate_signatures(m, n)) out.push_back(p.symbols);
        return out;
      },
      py::arg("m"), py::arg("n"),
      "All sign patterns omega - 1 can take: n changes, trailing minus.");

  mod.def(
      "simplex_template",
      [](int m, const std::vector<int>& T) {
        return simplex_template(m, subset(T, m)).symbols;
      },
      py::arg("m"), py::arg("T"),
      "Sign template of z inside the simplex spanned by the corners of T "
      "('x' marks free positions).");

  mod.def(
      "expand_template",
      [](const std::string& tpl, int n) {
        std::vector<std::string> out;
        for (auto& p : expand_template(SignPattern{tpl, {}, {}}, n))
          out.push_back(p.symbols);
        return out;
      },
      py::arg("template"), py::arg("n"),
      "Completions of a +/-/x template with exactly n sign changes.");

  mod.def(
      "sign_changes",
      [](const VectorXd& x, double zero_tol) {
        SignChanges v = sign_changes(x, zero_tol);
        return py::make_tuple(v.v_min, v.v_max);
      },
      py::arg("x"), py::arg("zero_tol") = 0.0,
      "(v_min, v_max) sign-change counts, zeros acting as wildcards.");

  mod.def(
      "inverse_rays",
      [](const VectorXd& lam, const VectorXd& z, int n) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        RayFan fan = inverse_rays(s, z, n, cfg);
        py::dict d;
        d["rays"] = fan.rays;
        py::list supports;
        for (const auto& t : fan.supports) supports.append(t.indices());
        d["supports"] = supports;
        d["sections"] = fan.sections;
        d["k_z"] = fan.k_z;
        return d;
      },
      py::arg("lam"), py::arg("z"), py::arg("n"),
      "Extremal rays of the cone of squared observations mapping to z.");

  mod.def(
      "cone_membership",
      [](const VectorXd& lam, const VectorXd& psi, int n) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        SquaredObservation sq = make_psi(psi);
        VectorXd z = shrinkage_direct(s, sq, n, cfg).z;
        RayFan fan = inverse_rays(s, z, n, cfg);
        RayMembership mem = ray_membership(s, sq, z, fan, cfg);
        py::dict d;
        d["coefficients"] = mem.coefficients;
        d["residual"] = mem.residual;
        d["k_z"] = fan.k_z;
        return d;
      },
      py::arg("lam"), py::arg("psi"), py::arg("n"),
      "Non-negative decomposition of psi over the extremal rays of its own "
      "fibre.");

  mod.def(
      "caratheodory_reduce",
      [](const VectorXd& lam, const VectorXd& psi, int n) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        return caratheodory_reduce(s, make_psi(psi), n, cfg).psi;
      },
      py::arg("lam"), py::arg("psi"), py::arg("n"),
      "Support reduction of psi to at most n+1 entries at fixed z.");

  mod.def(
      "hull_inverse",
      [](const VectorXd& lam, const VectorXd& c) {
        EigenSpectrum s(lam);
        return hull_inverse(s, c, PlsConfig{}).psi;
      },
      py::arg("lam"), py::arg("c"),
      "For m = n+1: squared observations whose average-route weights equal "
      "the prescribed convex coefficients.");

  mod.def(
      "gdof",
      [](const VectorXd& lam, const VectorXd& y, int n) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        DofReport rep =
            prediction_jacobian(s, ObservationVector::make(y, cfg), n, cfg);
        py::dict d;
        d["gdof_hat"] = rep.gdof_hat;
        d["gdof_dp_hat"] = rep.gdof_dp_hat;
        d["jacobian"] = rep.jacobian;
        d["fd_error"] = rep.fd_error;
        return d;
      },
      py::arg("lam"), py::arg("y"), py::arg("n"),
      "Prediction Jacobian and both degrees-of-freedom estimators.");

  mod.def(
      "mc_gdof",
      [](const VectorXd& lam, const VectorXd& beta, double sigma, int n,
         int reps, std::uint64_t seed) {
        PlsConfig cfg;
        EigenSpectrum s(lam);
        McConfig mc;
        mc.beta = beta;
        mc.sigma = sigma;
        mc.n = n;
        mc.replications = reps;
        mc.seed = seed;
        McResult res = mc_gdof(s, mc, cfg);
        py::dict d;
        d["mean_gdof"] = res.mean_gdof;
        d["mc_se"] = res.mc_se;
        d["prob_negative"] = res.prob_negative;
        d["gdof"] = res.gdof;
        d["gdof_dp"] = res.gdof_dp;
        d["excluded"] = res.excluded;
        return d;
      },
      py::arg("lam"), py::arg("beta"), py::arg("sigma"), py::arg("n"),
      py::arg("reps"), py::arg("seed"),
      "Monte Carlo distribution of the degrees-of-freedom estimators under "
      "y = diag(lam) beta + noise.");

  mod.attr("__version__") = "0.1.0";
}
