#pragma once

#include "blindmix/measurement.hpp"
#include "blindmix/types.hpp"

namespace blindmix {

/// f(V) = || sum_k J_k(w_k w_k^H) - y ||^2 with its Euclidean and Riemannian
/// derivatives, all evaluated through the factored forms (c_ki^H x)(b_i^H h);
/// the (N+K)^2 matrices J_ki are never materialized here.
///
/// The residual and per-factor products are cached for the most recent point;
/// any call with a different point recomputes them. A context owns mutable
/// buffers, so concurrent trials must each use their own instance.
class CostContext {
 public:
  CostContext(const MeasurementEnsemble& ensemble, CVec y);

  const MeasurementEnsemble& ensemble() const { return *ensemble_; }
  const CVec& y() const { return y_; }

  double objective(const ProductPoint& V);

  /// Residual c = sum_k J_k(w_k w_k^H) - y at V.
  const CVec& residual(const ProductPoint& V);

  /// 2 * sum_i (c_i J_ki + c_i^* J_ki^H) w_k in block form.
  CVec euclidean_gradient(const ProductPoint& V, int k);

  /// Half the Euclidean gradient; lands in the horizontal space by itself
  /// (asserted), so no projection is applied.
  CVec riemannian_gradient(const ProductPoint& V, int k);

  TangentVec riemannian_gradient(const ProductPoint& V);

  /// Directional derivative of the Euclidean gradient. The direction must be
  /// supplied for every factor: the coupling scalars involve all users.
  CVec euclidean_hessian_vec(const ProductPoint& V, int k, const TangentVec& eta);

  /// Per factor: horizontal projection of half the Euclidean Hessian-vector
  /// product. Self-adjoint in the product metric and linear in H.
  TangentVec riemannian_hessian_vec(const ProductPoint& V, const TangentVec& H);

 private:
  void refresh(const ProductPoint& V);
  bool same_point(const ProductPoint& V) const;
  CVec coupling_vector(const TangentVec& eta) const;
  CVec ehess_factor(int k, const TangentVec& eta, const CVec& b) const;

  const MeasurementEnsemble* ensemble_;
  CVec y_;

  bool cache_valid_ = false;
  ProductPoint point_;
  std::vector<CVec> cx_;   // per factor: FC_k x_k
  std::vector<CVec> bhc_;  // per factor: conj(B) * w_k.tail(K) = conj(B h_k)
  CVec residual_;
};

}  // namespace blindmix
