#include "blindmix/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "blindmix/manifold.hpp"
#include "blindmix/metrics.hpp"

namespace blindmix {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

TangentVec zero_like(const ProductPoint& V) {
  TangentVec z;
  z.factors.reserve(V.factors.size());
  for (const auto& w : V.factors) z.factors.push_back(CVec::Zero(w.size()));
  return z;
}

void axpy(double a, const TangentVec& x, TangentVec& y) {
  for (std::size_t k = 0; k < y.factors.size(); ++k) y.factors[k] += a * x.factors[k];
}

TangentVec combine(double a, const TangentVec& x, double b, const TangentVec& y) {
  TangentVec out;
  out.factors.reserve(x.factors.size());
  for (std::size_t k = 0; k < x.factors.size(); ++k)
    out.factors.push_back(a * x.factors[k] + b * y.factors[k]);
  return out;
}

int horizontal_dimension(const MeasurementEnsemble& ensemble) {
  // Per factor: 2(N+K) real dimensions minus the one vertical direction.
  return ensemble.num_users() * (2 * (ensemble.N() + ensemble.K()) - 1);
}

double trace_error(const ProductPoint& V, const GroundTruth* truth,
                   const MeasurementEnsemble& ensemble) {
  if (truth == nullptr) return -1.0;
  return relative_error(V, *truth, ensemble.N(), ensemble.K());
}

void check_finite(double f) {
  if (!std::isfinite(f)) throw std::runtime_error("solver diverged: objective is not finite");
}

}  // namespace

ProductPoint spectral_init(const MeasurementEnsemble& ensemble, const CVec& y) {
  if (y.size() != ensemble.L()) throw std::invalid_argument("spectral_init: observation length mismatch");
  ProductPoint V;
  V.factors.reserve(ensemble.num_users());
  for (int k = 0; k < ensemble.num_users(); ++k) {
    const CMat T = ensemble.frobenius_adjoint_A(k, y);
    Eigen::JacobiSVD<CMat> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma1 = svd.singularValues()[0];
    if (sigma1 <= 0.0) throw std::runtime_error("spectral_init: degenerate observation");
    const double scale = std::sqrt(sigma1);
    CVec w(ensemble.N() + ensemble.K());
    w.head(ensemble.N()) = scale * svd.matrixU().col(0);
    w.tail(ensemble.K()) = scale * svd.matrixV().col(0);
    V.factors.push_back(std::move(w));
  }
  return V;
}

SolveResult rgd_run(CostContext& context, const ProductPoint& V0, const RgdConfig& config,
                    const GroundTruth* truth) {
  const MeasurementEnsemble& ens = context.ensemble();
  const double alpha = config.alpha > 0.0 ? config.alpha : 1.0 / ens.num_users();
  const auto start = Clock::now();

  SolveResult result;
  result.point = V0;
  for (int t = 0; t <= config.max_iters; ++t) {
    const double f = context.objective(result.point);
    check_finite(f);
    const TangentVec grad = context.riemannian_gradient(result.point);
    const double grad_norm = std::sqrt(manifold::product_metric(grad, grad));
    result.trace.push_back(
        {t, f, grad_norm, trace_error(result.point, truth, ens), elapsed_ms(start)});
    result.iterations = t;
    if (grad_norm < config.grad_tol) {
      result.converged = true;
      break;
    }
    if (t == config.max_iters) break;

    // All factors move simultaneously along the scaled negative gradient:
    // w_k <- w_k - alpha/(2||w_k||^2) * egrad_k = w_k - alpha/||w_k||^2 * grad_k.
    ProductPoint next;
    next.factors.reserve(result.point.factors.size());
    for (int k = 0; k < result.point.num_factors(); ++k) {
      const CVec& w = result.point.factors[k];
      next.factors.push_back(manifold::retract(w, (-alpha / w.squaredNorm()) * grad.factors[k]));
    }
    result.point = std::move(next);
  }
  return result;
}

std::pair<TangentVec, TcgStop> tcg_solve(CostContext& context, const ProductPoint& V, double delta,
                                         const TcgParams& params) {
  if (delta <= 0.0) throw std::invalid_argument("tcg_solve: delta must be positive");
  const int max_inner =
      params.max_inner > 0 ? params.max_inner : horizontal_dimension(context.ensemble());

  TangentVec eta = zero_like(V);
  TangentVec r = context.riemannian_gradient(V);
  const double r0_norm = std::sqrt(manifold::product_metric(r, r));
  if (r0_norm == 0.0) return {eta, TcgStop::Converged};
  const double stop_tol = r0_norm * std::min(std::pow(r0_norm, params.theta), params.kappa);

  TangentVec d = combine(-1.0, r, 0.0, r);
  double r_dot_r = r0_norm * r0_norm;
  double eta_dot_eta = 0.0;

  // Steps to the trust-region boundary along d from eta.
  auto boundary_tau = [&](const TangentVec& dir, double eta_dot_d) {
    const double d_dot_d = manifold::product_metric(dir, dir);
    const double disc = eta_dot_d * eta_dot_d + d_dot_d * (delta * delta - eta_dot_eta);
    return (-eta_dot_d + std::sqrt(std::max(disc, 0.0))) / d_dot_d;
  };

  for (int j = 0; j < max_inner; ++j) {
    const TangentVec Hd = context.riemannian_hessian_vec(V, d);
    const double d_H_d = manifold::product_metric(d, Hd);
    const double eta_dot_d = manifold::product_metric(eta, d);

    if (d_H_d <= 0.0) {
      axpy(boundary_tau(d, eta_dot_d), d, eta);
      return {eta, TcgStop::NegativeCurvature};
    }

    const double step = r_dot_r / d_H_d;
    const double d_dot_d = manifold::product_metric(d, d);
    const double next_norm2 = eta_dot_eta + 2.0 * step * eta_dot_d + step * step * d_dot_d;
    if (next_norm2 >= delta * delta) {
      axpy(boundary_tau(d, eta_dot_d), d, eta);
      return {eta, TcgStop::Boundary};
    }

    axpy(step, d, eta);
    eta_dot_eta = next_norm2;
    axpy(step, Hd, r);
    const double r_dot_r_next = manifold::product_metric(r, r);
    if (std::sqrt(r_dot_r_next) <= stop_tol) return {eta, TcgStop::Converged};
    // Real-coefficient updates keep d horizontal in exact arithmetic; the
    // projection only strips floating-point drift.
    d = manifold::horizontal_project(V, combine(-1.0, r, r_dot_r_next / r_dot_r, d));
    r_dot_r = r_dot_r_next;
  }
  return {eta, TcgStop::MaxInner};
}

std::pair<double, bool> trust_region_update(double rho, bool hit_boundary, double delta,
                                            const TrustRegionConfig& config) {
  double next = delta;
  if (rho < config.rho_low) {
    next = delta * config.shrink;
  } else if (rho > config.rho_high && hit_boundary) {
    next = std::min(delta * config.expand, config.delta_max);
  }
  return {next, rho > config.rho_accept};
}

SolveResult rtr_run(CostContext& context, const ProductPoint& V0, const TrustRegionConfig& config,
                    const GroundTruth* truth) {
  const MeasurementEnsemble& ens = context.ensemble();
  const auto start = Clock::now();
  double delta = config.delta0;

  SolveResult result;
  result.point = V0;
  for (int t = 0; t <= config.max_iters; ++t) {
    const double f = context.objective(result.point);
    check_finite(f);
    const TangentVec grad = context.riemannian_gradient(result.point);
    const double grad_norm = std::sqrt(manifold::product_metric(grad, grad));
    result.trace.push_back(
        {t, f, grad_norm, trace_error(result.point, truth, ens), elapsed_ms(start)});
    result.iterations = t;
    if (grad_norm < config.grad_tol) {
      result.converged = true;
      break;
    }
    if (t == config.max_iters) break;
    if (delta < 1e-14) break;  // radius collapsed; no useful step remains

    auto [eta, reason] = tcg_solve(context, result.point, delta, config.tcg);
    const TangentVec Heta = context.riemannian_hessian_vec(result.point, eta);
    const double model_value =
        manifold::product_metric(eta, grad) + 0.5 * manifold::product_metric(eta, Heta);
    if (!(model_value < 0.0))
      throw std::logic_error("rtr_run: tCG returned a non-decreasing model step");

    const ProductPoint candidate = manifold::retract(result.point, eta);
    const double f_candidate = context.objective(candidate);
    check_finite(f_candidate);
    const double rho = (f - f_candidate) / (-model_value);

    const bool hit_boundary =
        reason == TcgStop::Boundary || reason == TcgStop::NegativeCurvature;
    const auto [next_delta, accept] = trust_region_update(rho, hit_boundary, delta, config);
    delta = next_delta;
    if (accept) result.point = candidate;
  }
  return result;
}

CMat rank_one_tangent_project(const CVec& u, const CVec& v, const CMat& Z) {
  const CVec uhZ = (u.adjoint() * Z).transpose();  // (u^H Z)^T as a column
  const CVec Zv = Z * v;
  const Complex uhZv = u.dot(Zv);
  return u * uhZ.transpose() + Zv * v.adjoint() - uhZv * (u * v.adjoint());
}

namespace {

struct RankOneFactor {
  double sigma = 0.0;
  CVec u, v;  // unit vectors; W = sigma * u v^H

  CMat materialize() const { return sigma * (u * v.adjoint()); }
};

RankOneFactor top_triple(const CMat& M) {
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RankOneFactor f;
  f.sigma = svd.singularValues()[0];
  f.u = svd.matrixU().col(0);
  f.v = svd.matrixV().col(0);
  return f;
}

}  // namespace

FihtResult fiht_run(const MeasurementEnsemble& ensemble, const CVec& y, int max_iters, double tol,
                    const GroundTruth* truth, const std::vector<CMat>* init) {
  if (y.size() != ensemble.L()) throw std::invalid_argument("fiht_run: observation length mismatch");
  const int s = ensemble.num_users();
  const auto start = Clock::now();

  std::vector<RankOneFactor> W(s);
  if (init != nullptr) {
    if (static_cast<int>(init->size()) != s)
      throw std::invalid_argument("fiht_run: initial estimate count mismatch");
    for (int k = 0; k < s; ++k) W[k] = top_triple((*init)[k]);
  } else {
    const ProductPoint V0 = spectral_init(ensemble, y);
    for (int k = 0; k < s; ++k) {
      const CVec& w = V0.factors[k];
      const CVec x = w.head(ensemble.N());
      const CVec vpart = w.tail(ensemble.K());
      W[k].sigma = x.norm() * vpart.norm();
      W[k].u = x.normalized();
      W[k].v = vpart.normalized();
    }
  }

  const double y_norm = y.norm();
  if (y_norm == 0.0) throw std::invalid_argument("fiht_run: zero observation");

  FihtResult result;
  auto record = [&](int t, const CVec& r) {
    double err = -1.0;
    if (truth != nullptr) {
      std::vector<CMat> est;
      est.reserve(s);
      for (const auto& f : W) est.push_back(f.materialize());
      err = relative_error(est, lifted_matrices(*truth));
    }
    result.trace.push_back({t, r.squaredNorm(), -1.0, err, elapsed_ms(start)});
  };

  for (int t = 0; t <= max_iters; ++t) {
    CVec r = y;
    for (int k = 0; k < s; ++k)
      r -= W[k].sigma * ensemble.forward_A(k, W[k].u, W[k].v.conjugate());
    record(t, r);
    result.iterations = t;
    if (r.norm() / y_norm < tol) {
      result.converged = true;
      break;
    }
    if (t == max_iters) break;

    for (int k = 0; k < s; ++k) {
      // Tangent projection of G = A_k*(r) without forming G:
      //   P_T(G) = u p^H + q v^H,  p = (u^H G)^H - conj(u^H G v) v,  q = G v.
      const CMat& fc = ensemble.encoder(k).fc;
      const CMat& B = ensemble.subspace().B;
      const CVec fcu = fc * W[k].u;
      const CVec Bv_c = B.conjugate() * W[k].v;
      const CVec p0 = B.transpose() * r.conjugate().cwiseProduct(fcu);  // (u^H G)^H
      const CVec q = fc.adjoint() * r.cwiseProduct(Bv_c);               // G v
      const Complex uGv = p0.dot(W[k].v);                               // u^H G v
      const CVec p = p0 - std::conj(uGv) * W[k].v;

      const double cross = 2.0 * (W[k].u.dot(q) * W[k].v.dot(p)).real();
      const double pt_norm2 = p.squaredNorm() + q.squaredNorm() + cross;
      // A_k of the two rank-one pieces of P_T(G).
      const CVec a_pt = ensemble.forward_A(k, W[k].u, p.conjugate()) +
                        ensemble.forward_A(k, q, W[k].v.conjugate());
      const double denom = a_pt.squaredNorm();
      if (denom == 0.0) {
        if (pt_norm2 > 0.0) throw std::runtime_error("fiht_run: stalled step (zero measurement of search direction)");
        continue;  // zero gradient for this user
      }
      const double step = pt_norm2 / denom;

      // Best rank-one approximation of W + step * P_T(G); the update is rank
      // two, so reduce via thin QR and a 2x2 SVD.
      if (ensemble.N() < 2 || ensemble.K() < 2) {
        W[k] = top_triple(W[k].materialize() +
                          step * (W[k].u * p.adjoint() + q * W[k].v.adjoint()));
        continue;
      }
      CMat left(ensemble.N(), 2), right(ensemble.K(), 2);
      left.col(0) = W[k].u;
      left.col(1) = step * q;
      right.col(0) = W[k].sigma * W[k].v + step * p;
      right.col(1) = W[k].v;
      Eigen::HouseholderQR<CMat> qr_l(left), qr_r(right);
      const CMat Rl = qr_l.matrixQR().triangularView<Eigen::Upper>();
      const CMat Rr = qr_r.matrixQR().triangularView<Eigen::Upper>();
      const CMat core = Rl.topRows(2) * Rr.topRows(2).adjoint();
      Eigen::JacobiSVD<CMat> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const CMat Ql = qr_l.householderQ() * CMat::Identity(ensemble.N(), 2);
      const CMat Qr = qr_r.householderQ() * CMat::Identity(ensemble.K(), 2);
      W[k].sigma = svd.singularValues()[0];
      W[k].u = Ql * svd.matrixU().col(0);
      W[k].v = Qr * svd.matrixV().col(0);
    }
  }

  result.estimates.reserve(s);
  for (const auto& f : W) result.estimates.push_back(f.materialize());
  return result;
}

}  // namespace blindmix
