#pragma once

#include <utility>
#include <vector>

#include "blindmix/cost.hpp"
#include "blindmix/measurement.hpp"
#include "blindmix/types.hpp"

namespace blindmix {

struct RgdConfig {
  double alpha = 0.0;  // <= 0 selects the default 1/s
  int max_iters = 500;
  double grad_tol = 1e-8;
};

struct TcgParams {
  double kappa = 0.1;
  double theta = 1.0;
  int max_inner = 0;  // <= 0 selects the product horizontal dimension
};

struct TrustRegionConfig {
  double delta0 = 2.0;
  double delta_max = 64.0;
  double rho_accept = 0.1;
  double rho_low = 0.25;
  double rho_high = 0.75;
  double shrink = 0.25;
  double expand = 2.0;
  TcgParams tcg;
  int max_iters = 500;
  double grad_tol = 1e-8;
};

struct TraceRow {
  int iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double err = -1.0;  // relative error vs ground truth; -1 when unknown
  double time_ms = 0.0;
};

using IterateTrace = std::vector<TraceRow>;

struct SolveResult {
  ProductPoint point;
  IterateTrace trace;
  int iterations = 0;
  bool converged = false;  // stopped on the gradient-norm criterion
};

enum class TcgStop { Converged, NegativeCurvature, Boundary, MaxInner };

/// Per user: top singular triple (sigma1, u, v) of the Frobenius adjoint of
/// A_k applied to y, stacked as w_k = [sqrt(sigma1) u; sqrt(sigma1) v], so
/// that forward_J(w_k) approximates y. Throws on a degenerate observation.
ProductPoint spectral_init(const MeasurementEnsemble& ensemble, const CVec& y);

/// Riemannian gradient descent: every factor moves simultaneously along
/// -alpha * grad_k / g(w_k, w_k) per iteration.
SolveResult rgd_run(CostContext& context, const ProductPoint& V0, const RgdConfig& config,
                    const GroundTruth* truth = nullptr);

/// Steihaug-Toint truncated CG for the trust-region subproblem on the product
/// horizontal space. Returns a model-decreasing step with g(eta,eta) <= delta^2.
std::pair<TangentVec, TcgStop> tcg_solve(CostContext& context, const ProductPoint& V, double delta,
                                         const TcgParams& params);

/// Radius/acceptance rule shared by rtr_run: returns {new_delta, accept}.
std::pair<double, bool> trust_region_update(double rho, bool hit_boundary, double delta,
                                            const TrustRegionConfig& config);

SolveResult rtr_run(CostContext& context, const ProductPoint& V0, const TrustRegionConfig& config,
                    const GroundTruth* truth = nullptr);

/// Projection onto the tangent space of the rank-one manifold at u sigma v^H:
/// P(Z) = u u^H Z + Z v v^H - u u^H Z v v^H (u, v unit vectors).
CMat rank_one_tangent_project(const CVec& u, const CVec& v, const CMat& Z);

struct FihtResult {
  std::vector<CMat> estimates;  // s rank-one N-by-K matrices
  IterateTrace trace;
  int iterations = 0;
  bool converged = false;  // residual ratio fell below tol
};

/// Fast iterative hard thresholding baseline on the s rank-one matrices,
/// with the adaptive stepsize ||P_T(G)||_F^2 / ||A_k(P_T(G))||^2 and best
/// rank-one truncation each step. Starts from spectral_init unless an
/// explicit initial estimate is supplied.
FihtResult fiht_run(const MeasurementEnsemble& ensemble, const CVec& y, int max_iters, double tol,
                    const GroundTruth* truth = nullptr, const std::vector<CMat>* init = nullptr);

}  // namespace blindmix
