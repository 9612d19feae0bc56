#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plsgeom/types.hpp"

namespace plsgeom {

// Sign pattern over {+, -, 0, x} ('x' marks entries a template leaves free).
struct SignPattern {
  std::string symbols;                // length m
  std::vector<int> change_positions;  // 1-based gap indices, when meaningful
  std::vector<int> sections;          // sign-constant run lengths, when full

  int m() const noexcept { return static_cast<int>(symbols.size()); }
};

struct SignChanges {
  int v_min = 0;  // changes after deleting zeros
  int v_max = 0;  // max changes over all sign completions of zeros
};

// Min/max sign-change counts of a vector whose zeros act as wildcards.
SignChanges sign_changes(const VectorXd& x, double zero_tol = 0.0);

// All C(m-1, n) full sign patterns of omega - 1 with exactly n changes and a
// trailing minus, ordered lexicographically by change positions.
std::vector<SignPattern> enumerate_signatures(int m, int n);

// Sign template of z at an interior point of the simplex spanned by the
// corners z_(tau), tau running over the n-subsets of T (|T| = n+1).
SignPattern simplex_template(int m, const IndexSubset& T);

// Sign pattern of the corner vector z_(tau): zero on tau, elsewhere the sign
// is determined by the number of tail indices of tau past the position.
SignPattern corner_sign_pattern(int m, const IndexSubset& tau);

// All completions of the template's 'x' entries whose total change count is
// exactly n, ordered lexicographically by change positions.
std::vector<SignPattern> expand_template(const SignPattern& tpl, int n);

struct LemmaCheckResult {
  int v_min = 0;
  int v_max = 0;
  bool passes = false;
};

// Sign-change bounds on z from the direct shrinkage solve.
LemmaCheckResult signature_lemma_check(const EigenSpectrum& spectrum,
                                       const SquaredObservation& psi, int n,
                                       const PlsConfig& cfg);

// True iff every square minor of M up to max_order has positive determinant.
bool total_positivity_check(const MatrixXd& M, int max_order,
                            std::int64_t cap = 2000000);

struct RayFan {
  MatrixXd rays;                    // m x k_z, columns normalized to unit sum
  std::vector<IndexSubset> supports;
  std::vector<int> sections;        // sign-constant section lengths of z
  std::int64_t k_z = 0;
};

// Extremal rays of the cone of non-negative psi mapping to the given z:
// one support per choice of a single index from each sign-concordant section,
// each ray the positive null vector of the n x (n+1) system V' Z S_tau.
RayFan inverse_rays(const EigenSpectrum& spectrum, const VectorXd& z, int n,
                    const PlsConfig& cfg);

struct RayMembership {
  VectorXd coefficients;  // t >= 0 with psi ~ rays * t
  double residual = 0.0;
};

// Non-negative decomposition of psi over the fan's rays.
RayMembership ray_membership(const EigenSpectrum& spectrum,
                             const SquaredObservation& psi, const VectorXd& z,
                             const RayFan& fan, const PlsConfig& cfg);

// Support reduction at fixed z: repeatedly steps along null directions of
// V' Z until at most n+1 entries of psi remain positive.
SquaredObservation caratheodory_reduce(const EigenSpectrum& spectrum,
                                       const SquaredObservation& psi, int n,
                                       const PlsConfig& cfg);

// For m = n+1: psi with psi_i = pi_{tau_i}/c_i, tau_i = [m] - {i}, so that
// the average route recovers exactly the convex weights c.
SquaredObservation hull_inverse(const EigenSpectrum& spectrum,
                                const VectorXd& c, const PlsConfig& cfg);

// Lawson-Hanson non-negative least squares; returns x >= 0 minimizing
// ||A x - b||.
VectorXd nnls(const MatrixXd& A, const VectorXd& b, int max_iter = 0,
              double tol = 1e-12);

}  // namespace plsgeom
