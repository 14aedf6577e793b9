#include "blindmix/cost.hpp"

#include <stdexcept>

#include "blindmix/manifold.hpp"

namespace blindmix {

// Block identities used throughout, for w = [x; hc] with hc = conj(h):
//   J_ki w   = [ (b̄_i^H hc) c_ki ; 0 ]
//   J_ki^H w = [ 0 ; (c_ki^H x) b̄_i ]
//   [J_k(w w^H)]_i = (c_ki^H x) * conj(b̄_i^H hc) = (c_ki^H x)(b_i^H h)
// With cx = FC_k x (entries c_ki^H x) and bhc = conj(B) hc (entries b̄_i^H hc)
// every sum over i becomes a matrix-vector product with FC_k^H or B^T.

CostContext::CostContext(const MeasurementEnsemble& ensemble, CVec y)
    : ensemble_(&ensemble), y_(std::move(y)) {
  if (y_.size() != ensemble.L()) throw std::invalid_argument("CostContext: observation length mismatch");
}

bool CostContext::same_point(const ProductPoint& V) const {
  if (!cache_valid_ || V.factors.size() != point_.factors.size()) return false;
  for (std::size_t k = 0; k < V.factors.size(); ++k) {
    if (V.factors[k].size() != point_.factors[k].size()) return false;
    if (V.factors[k] != point_.factors[k]) return false;
  }
  return true;
}

void CostContext::refresh(const ProductPoint& V) {
  const int s = ensemble_->num_users();
  const int N = ensemble_->N();
  const int K = ensemble_->K();
  if (V.num_factors() != s) throw std::invalid_argument("CostContext: factor count mismatch");

  cx_.resize(s);
  bhc_.resize(s);
  residual_ = -y_;
  for (int k = 0; k < s; ++k) {
    const CVec& w = V.factors[k];
    if (w.size() != N + K) throw std::invalid_argument("CostContext: factor length mismatch");
    cx_[k] = ensemble_->encoder(k).fc * w.head(N);
    bhc_[k] = ensemble_->subspace().B.conjugate() * w.tail(K);
    residual_ += cx_[k].cwiseProduct(bhc_[k].conjugate());
  }
  point_ = V;
  cache_valid_ = true;
}

const CVec& CostContext::residual(const ProductPoint& V) {
  if (!same_point(V)) refresh(V);
  return residual_;
}

double CostContext::objective(const ProductPoint& V) { return residual(V).squaredNorm(); }

CVec CostContext::euclidean_gradient(const ProductPoint& V, int k) {
  if (!same_point(V)) refresh(V);
  const int N = ensemble_->N();
  const int K = ensemble_->K();
  const CMat& fc = ensemble_->encoder(k).fc;
  const CMat& B = ensemble_->subspace().B;

  CVec grad(N + K);
  grad.head(N) = 2.0 * (fc.adjoint() * residual_.cwiseProduct(bhc_[k]));
  grad.tail(K) = 2.0 * (B.transpose() * residual_.conjugate().cwiseProduct(cx_[k]));
  return grad;
}

CVec CostContext::riemannian_gradient(const ProductPoint& V, int k) {
  CVec grad = 0.5 * euclidean_gradient(V, k);
  if (!manifold::is_horizontal(V.factors[k], grad, 1e-9))
    throw std::runtime_error("riemannian_gradient: gradient left the horizontal space");
  return grad;
}

TangentVec CostContext::riemannian_gradient(const ProductPoint& V) {
  TangentVec g;
  g.factors.reserve(V.factors.size());
  for (int k = 0; k < V.num_factors(); ++k) g.factors.push_back(riemannian_gradient(V, k));
  return g;
}

CVec CostContext::coupling_vector(const TangentVec& eta) const {
  // b_i = sum_m <J_mi, eta_m w_m^H + w_m eta_m^H>, the derivative of the
  // residual at the cached point in direction eta.
  const int s = ensemble_->num_users();
  const int N = ensemble_->N();
  const int K = ensemble_->K();
  const CMat Bc = ensemble_->subspace().B.conjugate();

  CVec b = CVec::Zero(ensemble_->L());
  for (int m = 0; m < s; ++m) {
    const CVec& e = eta.factors[m];
    if (e.size() != N + K) throw std::invalid_argument("coupling_vector: direction length mismatch");
    b += (ensemble_->encoder(m).fc * e.head(N)).cwiseProduct(bhc_[m].conjugate());
    b += cx_[m].cwiseProduct((Bc * e.tail(K)).conjugate());
  }
  return b;
}

CVec CostContext::ehess_factor(int k, const TangentVec& eta, const CVec& b) const {
  const int N = ensemble_->N();
  const int K = ensemble_->K();
  const CMat& fc = ensemble_->encoder(k).fc;
  const CMat& B = ensemble_->subspace().B;
  const CVec& e = eta.factors[k];
  const CVec ce = fc * e.head(N);
  const CVec be = B.conjugate() * e.tail(K);

  CVec out(N + K);
  out.head(N) = 2.0 * (fc.adjoint() * (b.cwiseProduct(bhc_[k]) + residual_.cwiseProduct(be)));
  out.tail(K) = 2.0 * (B.transpose() *
                       (b.conjugate().cwiseProduct(cx_[k]) + residual_.conjugate().cwiseProduct(ce)));
  return out;
}

CVec CostContext::euclidean_hessian_vec(const ProductPoint& V, int k, const TangentVec& eta) {
  if (eta.factors.size() != V.factors.size())
    throw std::invalid_argument("euclidean_hessian_vec: direction required for every factor");
  if (!same_point(V)) refresh(V);
  return ehess_factor(k, eta, coupling_vector(eta));
}

TangentVec CostContext::riemannian_hessian_vec(const ProductPoint& V, const TangentVec& H) {
  if (!manifold::is_horizontal(V, H, 1e-8))
    throw std::invalid_argument("riemannian_hessian_vec: direction is not horizontal");
  if (!same_point(V)) refresh(V);
  const CVec b = coupling_vector(H);
  TangentVec out;
  out.factors.reserve(V.factors.size());
  for (int k = 0; k < V.num_factors(); ++k) {
    out.factors.push_back(
        manifold::horizontal_project(V.factors[k], 0.5 * ehess_factor(k, H, b)));
  }
  return out;
}

}  // namespace blindmix
