#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace blindmix {

using Real = double;
using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// One user's ground-truth pair: signal x in C^N, channel taps h in C^K.
struct FactorPair {
  CVec x;
  CVec h;
};

using GroundTruth = std::vector<FactorPair>;

/// Point on the product of s lifted-factor manifolds; factor k is
/// w_k = [x_k; conj(h_k)] in C^(N+K), never the zero vector.
struct ProductPoint {
  std::vector<CVec> factors;

  int num_factors() const { return static_cast<int>(factors.size()); }
};

/// Tangent (or horizontal) vector at a ProductPoint, one block per factor.
struct TangentVec {
  std::vector<CVec> factors;

  int num_factors() const { return static_cast<int>(factors.size()); }
};

/// Lifted rank-one matrix X = x h̄^H (equivalently the top-right N-by-K block
/// of w w^H).
inline CMat lifted_matrix(const CVec& x, const CVec& h) {
  return x * h.transpose();
}

inline CMat lifted_matrix(const CVec& w, int N, int K) {
  return w.head(N) * w.tail(K).adjoint();
}

}  // namespace blindmix
