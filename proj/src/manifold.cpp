#include "blindmix/manifold.hpp"

#include <cmath>
#include <stdexcept>

#include "blindmix/rng.hpp"

namespace blindmix::manifold {

double metric(const CVec& zeta, const CVec& eta) {
  if (zeta.size() != eta.size()) throw std::invalid_argument("metric: shape mismatch");
  return 2.0 * zeta.dot(eta).real();
}

double product_metric(const TangentVec& Z, const TangentVec& H) {
  if (Z.factors.size() != H.factors.size())
    throw std::invalid_argument("product_metric: factor count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < Z.factors.size(); ++k) total += metric(Z.factors[k], H.factors[k]);
  return total;
}

Complex horizontal_coefficient(const CVec& w, const CVec& eta) {
  const double wnorm2 = w.squaredNorm();
  if (wnorm2 == 0.0) throw std::invalid_argument("horizontal_coefficient: base point is zero");
  const Complex inner = w.dot(eta);  // w^H eta
  return Complex(0.0, inner.imag() / wnorm2);
}

CVec horizontal_project(const CVec& w, const CVec& eta) {
  return eta - horizontal_coefficient(w, eta) * w;
}

TangentVec horizontal_project(const ProductPoint& V, const TangentVec& eta) {
  if (V.factors.size() != eta.factors.size())
    throw std::invalid_argument("horizontal_project: factor count mismatch");
  TangentVec out;
  out.factors.reserve(V.factors.size());
  for (std::size_t k = 0; k < V.factors.size(); ++k)
    out.factors.push_back(horizontal_project(V.factors[k], eta.factors[k]));
  return out;
}

bool is_horizontal(const CVec& w, const CVec& eta, double tol) {
  if (w.size() != eta.size()) throw std::invalid_argument("is_horizontal: shape mismatch");
  return std::abs(w.dot(eta).imag()) <= tol * w.norm() * eta.norm();
}

bool is_horizontal(const ProductPoint& V, const TangentVec& eta, double tol) {
  for (std::size_t k = 0; k < V.factors.size(); ++k)
    if (!is_horizontal(V.factors[k], eta.factors[k], tol)) return false;
  return true;
}

CVec retract(const CVec& w, const CVec& xi) {
  if (w.size() != xi.size()) throw std::invalid_argument("retract: shape mismatch");
  CVec out = w + xi;
  if (out.norm() == 0.0)
    throw std::runtime_error("retract: step reaches the origin (excluded from the manifold)");
  return out;
}

ProductPoint retract(const ProductPoint& V, const TangentVec& xi) {
  if (V.factors.size() != xi.factors.size())
    throw std::invalid_argument("retract: factor count mismatch");
  ProductPoint out;
  out.factors.reserve(V.factors.size());
  for (std::size_t k = 0; k < V.factors.size(); ++k)
    out.factors.push_back(retract(V.factors[k], xi.factors[k]));
  return out;
}

CVec random_horizontal(const CVec& w, std::uint64_t seed) {
  if (w.norm() == 0.0) throw std::invalid_argument("random_horizontal: base point is zero");
  for (std::uint64_t attempt = 0;; ++attempt) {
    CVec dir = rng::complex_gaussian_vector(static_cast<int>(w.size()),
                                            rng::derive_seed(seed, attempt));
    CVec proj = horizontal_project(w, dir);
    const double norm = std::sqrt(metric(proj, proj));
    if (norm > 1e-12) return proj / norm;
  }
}

TangentVec random_horizontal(const ProductPoint& V, std::uint64_t seed) {
  TangentVec out;
  out.factors.reserve(V.factors.size());
  for (std::size_t k = 0; k < V.factors.size(); ++k)
    out.factors.push_back(random_horizontal(V.factors[k], rng::derive_seed(seed, k)));
  return out;
}

}  // namespace blindmix::manifold
