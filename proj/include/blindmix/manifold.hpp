#pragma once

#include <cstdint>

#include "blindmix/types.hpp"

namespace blindmix::manifold {

/// Riemannian metric Tr(zeta^H eta + eta^H zeta) = 2 Re<zeta, eta>.
/// Position-independent for this geometry.
double metric(const CVec& zeta, const CVec& eta);

double product_metric(const TangentVec& Z, const TangentVec& H);

/// Coefficient a = (w^H eta - eta^H w) / (2 w^H w); purely imaginary.
Complex horizontal_coefficient(const CVec& w, const CVec& eta);

/// eta - a*w, the metric-orthogonal projection onto {xi : Im(w^H xi) = 0}.
CVec horizontal_project(const CVec& w, const CVec& eta);

TangentVec horizontal_project(const ProductPoint& V, const TangentVec& eta);

/// |Im(w^H eta)| <= tol * ||w|| * ||eta||.
bool is_horizontal(const CVec& w, const CVec& eta, double tol);

bool is_horizontal(const ProductPoint& V, const TangentVec& eta, double tol);

/// R_w(xi) = w + xi; throws if the result is the zero vector.
CVec retract(const CVec& w, const CVec& xi);

ProductPoint retract(const ProductPoint& V, const TangentVec& xi);

/// Seeded Gaussian direction projected to the horizontal space and
/// normalized to metric-norm 1.
CVec random_horizontal(const CVec& w, std::uint64_t seed);

TangentVec random_horizontal(const ProductPoint& V, std::uint64_t seed);

}  // namespace blindmix::manifold
