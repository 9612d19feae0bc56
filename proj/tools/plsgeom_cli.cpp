// plsgeom: PLS shrinkage geometry toolbox.
//
// Subcommands: shrink, corners, signatures, rays, dof, mc, spectrum, exp-corr.
// Exit codes: 0 success, 2 validation failure, 3 numerical failure,
// 4 enumeration cap exceeded, 5 positivity (conjecture-violation) report.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plsgeom/dof.hpp"
#include "plsgeom/geometry.hpp"
#include "plsgeom/io.hpp"
#include "plsgeom/model.hpp"
#include "plsgeom/shrinkage.hpp"
#include "plsgeom/subsets.hpp"

namespace pg = plsgeom;
using pg::fail;
using pg::ErrorKind;

namespace {

struct SpectrumArgs {
  std::string lambda_arg;
  std::string gram_arg;
};

void add_spectrum_flags(CLI::App* cmd, SpectrumArgs& args) {
  cmd->add_option("--lambda", args.lambda_arg,
                  "eigenvalues, inline CSV or file (one per line)");
  cmd->add_option("--gram", args.gram_arg, "Gram matrix CSV file");
}

pg::EigenSpectrum resolve_spectrum(const SpectrumArgs& args,
                                   const pg::PlsConfig& cfg,
                                   std::map<std::string, std::string>& inputs) {
  if (!args.lambda_arg.empty() && !args.gram_arg.empty())
    fail(ErrorKind::InvalidArgument,
         "--lambda and --gram are mutually exclusive");
  if (!args.lambda_arg.empty()) {
    inputs["lambda"] = args.lambda_arg;
    return pg::EigenSpectrum(pg::parse_vector_arg(args.lambda_arg),
                             cfg.distinct_tol);
  }
  if (!args.gram_arg.empty()) {
    inputs["gram"] = args.gram_arg;
    return pg::spectrum_from_gram(pg::parse_matrix_arg(args.gram_arg), 1e-10,
                                  cfg.distinct_tol);
  }
  fail(ErrorKind::InvalidArgument, "one of --lambda or --gram is required");
}

std::string join_1based(const std::vector<int>& idx, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(idx[i] + 1);
  }
  return out;
}

std::string join_ints(const std::vector<int>& vals, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(vals[i]);
  }
  return out;
}

std::string manifest_path(const std::string& out) {
  return out + ".manifest.json";
}

// ---- shrink ----------------------------------------------------------------

struct ShrinkArgs {
  SpectrumArgs spec;
  std::string y_arg, psi_arg;
  int n = 0;
  std::string method = "direct";
  std::string out;
};

int cmd_shrink(const ShrinkArgs& a, const pg::PlsConfig& cfg) {
  std::map<std::string, std::string> inputs;
  pg::EigenSpectrum spectrum = resolve_spectrum(a.spec, cfg, inputs);
  if (!a.y_arg.empty() && !a.psi_arg.empty())
    fail(ErrorKind::InvalidArgument, "--y and --psi are mutually exclusive");
  if (a.y_arg.empty() && a.psi_arg.empty())
    fail(ErrorKind::InvalidArgument, "one of --y or --psi is required");
  pg::SquaredObservation psi =
      a.y_arg.empty()
          ? pg::SquaredObservation::from_psi(pg::parse_vector_arg(a.psi_arg),
                                             cfg)
          : pg::SquaredObservation::from_y(pg::ObservationVector::make(
                pg::parse_vector_arg(a.y_arg), cfg));
  inputs[a.y_arg.empty() ? "psi" : "y"] =
      a.y_arg.empty() ? a.psi_arg : a.y_arg;
  inputs["n"] = std::to_string(a.n);
  inputs["method"] = a.method;

  pg::ShrinkageTriple triple;
  std::optional<pg::AverageResult> avg;
  if (a.method == "direct") {
    triple = pg::shrinkage_direct(spectrum, psi, a.n, cfg);
  } else if (a.method == "average") {
    avg = pg::shrinkage_average(spectrum, psi, a.n, cfg);
    triple = avg->triple;
  } else if (a.method == "both") {
    triple = pg::shrinkage_direct(spectrum, psi, a.n, cfg);
    avg = pg::shrinkage_average(spectrum, psi, a.n, cfg);
    double dev = (triple.omega - avg->triple.omega).cwiseAbs().maxCoeff() /
                 std::max(1.0, triple.omega.cwiseAbs().maxCoeff());
    std::cout << "route deviation " << pg::fmt17(dev) << "\n";
    if (dev > 1e-8)
      fail(ErrorKind::CrossCheckFailure,
           "direct and average routes disagree beyond 1e-8");
  } else {
    fail(ErrorKind::InvalidArgument, "--method must be direct|average|both");
  }

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < spectrum.m(); ++i)
    rows.push_back({"omega", std::to_string(i + 1), pg::fmt17(triple.omega(i))});
  for (int i = 0; i < spectrum.m(); ++i)
    rows.push_back({"z", std::to_string(i + 1), pg::fmt17(triple.z(i))});
  for (int i = 0; i < a.n; ++i)
    rows.push_back({"alpha", std::to_string(i + 1), pg::fmt17(triple.alpha(i))});
  pg::write_csv(a.out, {"quantity", "index", "value"}, rows);
  if (avg) {
    std::vector<std::vector<std::string>> wrows;
    for (std::size_t i = 0; i < avg->taus.size(); ++i)
      wrows.push_back({join_1based(avg->taus[i].indices()),
                       pg::fmt17(avg->weights[i])});
    pg::write_csv(a.out + ".weights.csv", {"tau", "p"}, wrows);
  }
  pg::write_manifest(manifest_path(a.out), "shrink", inputs, std::nullopt);
  return 0;
}

// ---- corners ----------------------------------------------------------------

struct CornersArgs {
  SpectrumArgs spec;
  std::string n_range;
  std::string out;
};

int cmd_corners(const CornersArgs& a, const pg::PlsConfig& cfg) {
  std::map<std::string, std::string> inputs;
  pg::EigenSpectrum spectrum = resolve_spectrum(a.spec, cfg, inputs);
  auto [lo, hi] = pg::parse_range(a.n_range);
  inputs["n-range"] = a.n_range;
  const int m = spectrum.m();
  if (lo < 1 || hi >= m)
    fail(ErrorKind::InvalidDimension,
         "n range must stay within 1 <= n < m");

  std::vector<std::string> header = {"n", "tau"};
  for (int i = 1; i <= m; ++i) header.push_back("omega_" + std::to_string(i));
  header.push_back("gdof");
  header.push_back("gdof_dp");

  std::vector<std::vector<std::string>> rows;
  for (int n = lo; n <= hi; ++n) {
    for (auto& tau_idx : pg::subsets(m, n, cfg.enum_cap)) {
      pg::IndexSubset tau(tau_idx, m);
      pg::ShrinkageTriple c = pg::corner_shrinkage(spectrum, tau, cfg);
      // at a corner the closed forms of the two estimators apply
      double gdof = n;
      double gdof_dp = m;
      for (int i = 0; i < m; ++i) {
        if (tau.contains(i)) continue;
        gdof += c.omega(i);
        gdof_dp -= c.z(i) * c.z(i);
      }
      std::vector<std::string> row = {std::to_string(n),
                                      join_1based(tau_idx)};
      for (int i = 0; i < m; ++i) row.push_back(pg::fmt17(c.omega(i)));
      row.push_back(pg::fmt17(gdof));
      row.push_back(pg::fmt17(gdof_dp));
      rows.push_back(std::move(row));
    }
  }
  pg::write_csv(a.out, header, rows);
  pg::write_manifest(manifest_path(a.out), "corners", inputs, std::nullopt);
  return 0;
}

// ---- signatures --------------------------------------------------------------

struct SignaturesArgs {
  int m = 0;
  int n = 0;
  std::string simplex;
  bool expand = false;
  std::string out;
};

int cmd_signatures(const SignaturesArgs& a, const pg::PlsConfig& cfg) {
  (void)cfg;
  std::map<std::string, std::string> inputs;
  inputs["m"] = std::to_string(a.m);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;

  if (a.simplex.empty()) {
    if (a.expand)
      fail(ErrorKind::InvalidArgument, "--expand requires --simplex");
    inputs["n"] = std::to_string(a.n);
    header = {"pattern", "change_positions"};
    for (auto& p : pg::enumerate_signatures(a.m, a.n))
      rows.push_back({p.symbols, join_ints(p.change_positions)});
  } else {
    pg::IndexSubset T = pg::parse_subset_arg(a.simplex, a.m);
    int n = T.size() - 1;
    if (a.n != 0 && a.n != n)
      fail(ErrorKind::InvalidArgument,
           "--n disagrees with the simplex size (need n = |T| - 1)");
    inputs["simplex"] = a.simplex;
    inputs["n"] = std::to_string(n);
    pg::SignPattern tpl = pg::simplex_template(a.m, T);
    if (!a.expand) {
      header = {"label", "pattern"};
      // vertices in drop order: tau = T minus t_0 first, then minus t_1, ...
      for (int k = 0; k <= n; ++k) {
        std::vector<int> tau;
        for (int j = 0; j <= n; ++j)
          if (j != k) tau.push_back(T.indices()[j]);
        pg::SignPattern v = pg::corner_sign_pattern(a.m, pg::IndexSubset(tau, a.m));
        rows.push_back({"z_(" + join_1based(tau, ',') + ")", v.symbols});
      }
      rows.push_back({"interior", tpl.symbols});
    } else {
      header = {"pattern", "change_positions"};
      for (auto& p : pg::expand_template(tpl, n))
        rows.push_back({p.symbols, join_ints(p.change_positions)});
    }
  }
  pg::write_csv(a.out, header, rows);
  pg::write_manifest(manifest_path(a.out), "signatures", inputs, std::nullopt);
  return 0;
}

// ---- rays ---------------------------------------------------------------------

struct RaysArgs {
  SpectrumArgs spec;
  std::string z_arg, psi_arg;
  int n = 0;
  std::string out;
};

int cmd_rays(const RaysArgs& a, const pg::PlsConfig& cfg) {
  std::map<std::string, std::string> inputs;
  pg::EigenSpectrum spectrum = resolve_spectrum(a.spec, cfg, inputs);
  if (!a.z_arg.empty() && !a.psi_arg.empty())
    fail(ErrorKind::InvalidArgument, "--z and --psi are mutually exclusive");
  if (a.z_arg.empty() && a.psi_arg.empty())
    fail(ErrorKind::InvalidArgument, "one of --z or --psi is required");

  pg::VectorXd z;
  std::optional<pg::SquaredObservation> psi;
  int n = a.n;
  if (!a.z_arg.empty()) {
    z = pg::parse_vector_arg(a.z_arg);
    inputs["z"] = a.z_arg;
    if (n == 0) {
      // infer the direction count from the signature
      n = pg::sign_changes(z, cfg.zero_rel_tol * z.cwiseAbs().maxCoeff()).v_min;
      if (n == 0)
        fail(ErrorKind::InadmissibleSignature, "z has no sign change");
    }
  } else {
    if (n < 1)
      fail(ErrorKind::InvalidArgument, "--psi mode requires --n");
    psi = pg::SquaredObservation::from_psi(pg::parse_vector_arg(a.psi_arg), cfg);
    inputs["psi"] = a.psi_arg;
    z = pg::shrinkage_direct(spectrum, *psi, n, cfg).z;
  }
  inputs["n"] = std::to_string(n);

  pg::RayFan fan = pg::inverse_rays(spectrum, z, n, cfg);
  std::vector<std::string> header = {"support"};
  for (int i = 1; i <= spectrum.m(); ++i)
    header.push_back("d_" + std::to_string(i));
  std::vector<std::vector<std::string>> rows;
  for (std::int64_t r = 0; r < fan.k_z; ++r) {
    std::vector<std::string> row = {join_1based(fan.supports[r].indices())};
    for (int i = 0; i < spectrum.m(); ++i)
      row.push_back(pg::fmt17(fan.rays(i, r)));
    rows.push_back(std::move(row));
  }
  pg::write_csv(a.out, header, rows);

  nlohmann::json j;
  j["k_z"] = fan.k_z;
  j["sections"] = fan.sections;
  if (psi) {
    pg::RayMembership mem = pg::ray_membership(spectrum, *psi, z, fan, cfg);
    std::vector<double> t(mem.coefficients.data(),
                          mem.coefficients.data() + mem.coefficients.size());
    j["coefficients"] = t;
    j["residual"] = mem.residual;
  }
  std::ofstream jf(a.out + ".summary.json", std::ios::binary);
  jf << j.dump(2) << '\n';
  pg::write_manifest(manifest_path(a.out), "rays", inputs, std::nullopt);
  return 0;
}

// ---- dof ------------------------------------------------------------------------

struct DofArgs {
  SpectrumArgs spec;
  std::string y_arg;
  int n = 0;
  std::string out;
};

int cmd_dof(const DofArgs& a, const pg::PlsConfig& cfg) {
  std::map<std::string, std::string> inputs;
  pg::EigenSpectrum spectrum = resolve_spectrum(a.spec, cfg, inputs);
  if (a.y_arg.empty()) fail(ErrorKind::InvalidArgument, "--y is required");
  pg::ObservationVector y =
      pg::ObservationVector::make(pg::parse_vector_arg(a.y_arg), cfg);
  inputs["y"] = a.y_arg;
  inputs["n"] = std::to_string(a.n);
  pg::DofReport rep = pg::prediction_jacobian(spectrum, y, a.n, cfg);

  nlohmann::json j;
  j["fd_error"] = rep.fd_error;
  j["gdof_dp_hat"] = rep.gdof_dp_hat;
  j["gdof_hat"] = rep.gdof_hat;
  std::cout << j.dump(2) << '\n';
  if (!a.out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < spectrum.m(); ++i) {
      std::vector<std::string> row;
      for (int k = 0; k < spectrum.m(); ++k)
        row.push_back(pg::fmt17(rep.jacobian(i, k)));
      rows.push_back(std::move(row));
    }
    pg::write_csv(a.out, {}, rows);
    std::ofstream jf(a.out + ".summary.json", std::ios::binary);
    jf << j.dump(2) << '\n';
    pg::write_manifest(manifest_path(a.out), "dof", inputs, std::nullopt);
  }
  return 0;
}

// ---- mc -------------------------------------------------------------------------

struct McArgs {
  SpectrumArgs spec;
  std::string beta_arg;
  double sigma = 0.0;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_mc(const McArgs& a, const pg::PlsConfig& cfg) {
  std::map<std::string, std::string> inputs;
  pg::EigenSpectrum spectrum = resolve_spectrum(a.spec, cfg, inputs);
  if (a.beta_arg.empty()) fail(ErrorKind::InvalidArgument, "--beta is required");
  pg::McConfig mc;
  mc.beta = pg::parse_vector_arg(a.beta_arg);
  mc.sigma = a.sigma;
  mc.n = a.n;
  mc.replications = a.reps;
  mc.seed = a.seed;
  inputs["beta"] = a.beta_arg;
  inputs["sigma"] = pg::fmt17(a.sigma);
  inputs["n"] = std::to_string(a.n);
  inputs["reps"] = std::to_string(a.reps);

  pg::McResult res = pg::mc_gdof(spectrum, mc, cfg);

  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  auto path = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };

  std::vector<std::vector<std::string>> rows;
  std::size_t next_excluded = 0;
  std::size_t kept = 0;
  for (int r = 0; r < a.reps; ++r) {
    if (next_excluded < res.excluded.size() &&
        res.excluded[next_excluded] == r) {
      ++next_excluded;
      continue;
    }
    rows.push_back({std::to_string(r), pg::fmt17(res.gdof[kept]),
                    pg::fmt17(res.gdof_dp[kept])});
    ++kept;
  }
  pg::write_csv(path("replicates.csv"), {"replicate", "gdof_hat", "gdof_dp_hat"},
                rows);

  auto write_sorted = [&](const char* name, const std::vector<double>& v,
                          const char* column) {
    std::vector<std::vector<std::string>> srows;
    for (double x : v) srows.push_back({pg::fmt17(x)});
    pg::write_csv(path(name), {column}, srows);
  };
  write_sorted("cdf_gdof.csv", res.gdof_sorted, "gdof_hat");
  write_sorted("cdf_gdof_dp.csv", res.gdof_dp_sorted, "gdof_dp_hat");

  nlohmann::json j;
  j["excluded_count"] = res.excluded.size();
  j["mean"] = res.mean_gdof;
  j["prob_negative"] = res.prob_negative;
  if (std::isnan(res.mc_se))
    j["se"] = nullptr;
  else
    j["se"] = res.mc_se;
  j["seed"] = a.seed;
  std::ofstream jf(path("summary.json"), std::ios::binary);
  jf << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  pg::write_manifest(path("manifest.json"), "mc", inputs, a.seed);
  return 0;
}

// ---- spectrum / exp-corr -----------------------------------------------------------

struct SpectrumCmdArgs {
  std::string gram_arg;
  std::string out;
};

int cmd_spectrum(const SpectrumCmdArgs& a, const pg::PlsConfig& cfg) {
  if (a.gram_arg.empty()) fail(ErrorKind::InvalidArgument, "--gram is required");
  pg::EigenSpectrum s = pg::spectrum_from_gram(pg::parse_matrix_arg(a.gram_arg),
                                               1e-10, cfg.distinct_tol);
  std::ostringstream body;
  for (int i = 0; i < s.m(); ++i) body << pg::fmt17(s[i]) << '\n';
  if (a.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(a.out, std::ios::binary);
    f << body.str();
    pg::write_manifest(manifest_path(a.out), "spectrum", {{"gram", a.gram_arg}},
                       std::nullopt);
  }
  return 0;
}

struct ExpCorrArgs {
  int m = 0;
  double rate = 0.0;
  std::string out;
};

int cmd_exp_corr(const ExpCorrArgs& a) {
  pg::MatrixXd G = pg::exp_correlation(a.m, a.rate);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < a.m; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < a.m; ++j) row.push_back(pg::fmt17(G(i, j)));
    rows.push_back(std::move(row));
  }
  if (a.out.empty()) {
    for (auto& row : rows) {
      for (std::size_t j = 0; j < row.size(); ++j)
        std::cout << (j ? "," : "") << row[j];
      std::cout << '\n';
    }
  } else {
    pg::write_csv(a.out, {}, rows);
    pg::write_manifest(manifest_path(a.out), "exp-corr",
                       {{"m", std::to_string(a.m)}, {"rate", pg::fmt17(a.rate)}},
                       std::nullopt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PLS shrinkage geometry toolbox"};
  app.require_subcommand(1);
  pg::PlsConfig cfg;
  app.add_option("--distinct-tol", cfg.distinct_tol,
                 "relative eigenvalue gap tolerance");
  app.add_option("--zero-tol", cfg.zero_rel_tol,
                 "relative zero threshold for observations");
  app.add_option("--enum-cap", cfg.enum_cap, "max enumerated subsets");

  ShrinkArgs shrink;
  auto* c_shrink = app.add_subcommand("shrink", "shrinkage factors");
  add_spectrum_flags(c_shrink, shrink.spec);
  c_shrink->add_option("--y", shrink.y_arg, "observation vector");
  c_shrink->add_option("--psi", shrink.psi_arg, "squared observations");
  c_shrink->add_option("--n", shrink.n, "PLS directions")->required();
  c_shrink->add_option("--method", shrink.method, "direct|average|both");
  c_shrink->add_option("--out", shrink.out, "output CSV")->required();

  CornersArgs corners;
  auto* c_corners = app.add_subcommand("corners", "corner shrinkage table");
  add_spectrum_flags(c_corners, corners.spec);
  c_corners->add_option("--n-range", corners.n_range, "a..b")->required();
  c_corners->add_option("--out", corners.out, "output CSV")->required();

  SignaturesArgs sigs;
  auto* c_sigs = app.add_subcommand("signatures", "sign patterns");
  c_sigs->add_option("--m", sigs.m, "dimension")->required();
  c_sigs->add_option("--n", sigs.n, "PLS directions");
  c_sigs->add_option("--simplex", sigs.simplex, "subset T (1-based)");
  c_sigs->add_flag("--expand", sigs.expand, "expand template completions");
  c_sigs->add_option("--out", sigs.out, "output CSV")->required();

  RaysArgs rays;
  auto* c_rays = app.add_subcommand("rays", "inverse cone rays");
  add_spectrum_flags(c_rays, rays.spec);
  c_rays->add_option("--z", rays.z_arg, "target z vector");
  c_rays->add_option("--psi", rays.psi_arg, "squared observations");
  c_rays->add_option("--n", rays.n, "PLS directions");
  c_rays->add_option("--out", rays.out, "output CSV")->required();

  DofArgs dof;
  auto* c_dof = app.add_subcommand("dof", "degrees-of-freedom estimators");
  add_spectrum_flags(c_dof, dof.spec);
  c_dof->add_option("--y", dof.y_arg, "observation vector")->required();
  c_dof->add_option("--n", dof.n, "PLS directions")->required();
  c_dof->add_option("--out", dof.out, "Jacobian CSV");

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc", "Monte Carlo experiment");
  add_spectrum_flags(c_mc, mc.spec);
  c_mc->add_option("--beta", mc.beta_arg, "true coefficients")->required();
  c_mc->add_option("--sigma", mc.sigma, "noise scale")->required();
  c_mc->add_option("--n", mc.n, "PLS directions")->required();
  c_mc->add_option("--reps", mc.reps, "replications")->required();
  c_mc->add_option("--seed", mc.seed, "RNG seed")->required();
  c_mc->add_option("--out-dir", mc.out_dir, "output directory")->required();

  SpectrumCmdArgs spectrum;
  auto* c_spectrum = app.add_subcommand("spectrum", "Gram matrix eigenvalues");
  c_spectrum->add_option("--gram", spectrum.gram_arg, "Gram matrix CSV")
      ->required();
  c_spectrum->add_option("--out", spectrum.out, "output file");

  ExpCorrArgs expc;
  auto* c_expc = app.add_subcommand("exp-corr", "exponential correlation matrix");
  c_expc->add_option("--m", expc.m, "dimension")->required();
  c_expc->add_option("--rate", expc.rate, "decay rate")->required();
  c_expc->add_option("--out", expc.out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_shrink) return cmd_shrink(shrink, cfg);
    if (*c_corners) return cmd_corners(corners, cfg);
    if (*c_sigs) return cmd_signatures(sigs, cfg);
    if (*c_rays) return cmd_rays(rays, cfg);
    if (*c_dof) return cmd_dof(dof, cfg);
    if (*c_mc) return cmd_mc(mc, cfg);
    if (*c_spectrum) return cmd_spectrum(spectrum, cfg);
    if (*c_expc) return cmd_exp_corr(expc);
  } catch (const pg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pg::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
