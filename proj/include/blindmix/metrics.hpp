#pragma once

#include <vector>

#include "blindmix/measurement.hpp"
#include "blindmix/types.hpp"

namespace blindmix {

/// sqrt(sum_k ||X_k - Xhat_k||_F^2) / sqrt(sum_k ||Xhat_k||_F^2).
double relative_error(const std::vector<CMat>& estimates, const std::vector<CMat>& truth);

/// Estimates taken as the lifted matrices of the product point's factors.
double relative_error(const ProductPoint& V, const GroundTruth& truth, int N, int K);

std::vector<CMat> lifted_matrices(const GroundTruth& truth);
std::vector<CMat> lifted_matrices(const ProductPoint& V, int N, int K);

/// Ambiguity-aligned distance: per user the minimum over nonzero complex psi
/// of (||psi x - x0||^2 + ||h/psi - h0||^2) / (||x0||^2 + ||h0||^2), found by
/// a dense polar grid (720 phases x 241 log-magnitudes over [1e-6, 1e6]) and
/// local refinement; returns the root of the per-user sum.
double aligned_distance(const ProductPoint& V, const GroundTruth& truth, int N, int K);

/// Minimum of the per-user alignment objective over psi for one factor pair.
double aligned_distance_factor(const CVec& x, const CVec& h, const CVec& x0, const CVec& h0);

/// sqrt(L) * max_i |b_i^H h| / ||h||.
double incoherence_mu(const CVec& h, const ChannelSubspace& subspace);

}  // namespace blindmix
