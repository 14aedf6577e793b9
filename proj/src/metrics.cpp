#include "blindmix/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace blindmix {

double relative_error(const std::vector<CMat>& estimates, const std::vector<CMat>& truth) {
  if (estimates.size() != truth.size())
    throw std::invalid_argument("relative_error: user count mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    num += (estimates[k] - truth[k]).squaredNorm();
    den += truth[k].squaredNorm();
  }
  if (den == 0.0) throw std::invalid_argument("relative_error: zero ground truth");
  return std::sqrt(num / den);
}

std::vector<CMat> lifted_matrices(const GroundTruth& truth) {
  std::vector<CMat> out;
  out.reserve(truth.size());
  for (const auto& pair : truth) out.push_back(lifted_matrix(pair.x, pair.h));
  return out;
}

std::vector<CMat> lifted_matrices(const ProductPoint& V, int N, int K) {
  std::vector<CMat> out;
  out.reserve(V.factors.size());
  for (const auto& w : V.factors) out.push_back(lifted_matrix(w, N, K));
  return out;
}

double relative_error(const ProductPoint& V, const GroundTruth& truth, int N, int K) {
  return relative_error(lifted_matrices(V, N, K), lifted_matrices(truth));
}

namespace {

struct AlignmentObjective {
  // ||psi x - x0||^2 + ||h/psi - h0||^2 expanded in psi = rho e^{i theta}:
  //   rho^2 ||x||^2 + ||h||^2 / rho^2 + const
  //   - 2 Re(e^{i theta} (rho a + conj(b)/rho)),  a = x0^H x, b = h0^H h.
  double x2, h2, c0;
  Complex a, b;

  AlignmentObjective(const CVec& x, const CVec& h, const CVec& x0, const CVec& h0)
      : x2(x.squaredNorm()),
        h2(h.squaredNorm()),
        c0(x0.squaredNorm() + h0.squaredNorm()),
        a(x0.dot(x)),
        b(h0.dot(h)) {}

  double eval(double rho, double theta) const {
    const Complex phase = std::polar(1.0, theta);
    const Complex mixed = rho * a + std::conj(b) / rho;
    return rho * rho * x2 + h2 / (rho * rho) + c0 - 2.0 * (phase * mixed).real();
  }

  // For fixed rho the optimal phase is closed-form.
  double best_theta(double rho) const { return -std::arg(rho * a + std::conj(b) / rho); }

  double eval_opt_theta(double rho) const {
    const Complex mixed = rho * a + std::conj(b) / rho;
    return rho * rho * x2 + h2 / (rho * rho) + c0 - 2.0 * std::abs(mixed);
  }
};

}  // namespace

double aligned_distance_factor(const CVec& x, const CVec& h, const CVec& x0, const CVec& h0) {
  if (x.norm() == 0.0 || h.norm() == 0.0)
    throw std::invalid_argument("aligned_distance: zero factor");
  const AlignmentObjective obj(x, h, x0, h0);

  constexpr int kPhases = 720;
  constexpr int kMags = 241;
  constexpr double kLogMin = -6.0, kLogMax = 6.0;
  constexpr double kPi = 3.14159265358979323846;

  double best = std::numeric_limits<double>::infinity();
  double best_rho = 1.0, best_theta = 0.0;
  for (int mi = 0; mi < kMags; ++mi) {
    const double rho = std::pow(10.0, kLogMin + (kLogMax - kLogMin) * mi / (kMags - 1));
    for (int pi_ = 0; pi_ < kPhases; ++pi_) {
      const double theta = 2.0 * kPi * pi_ / kPhases;
      const double v = obj.eval(rho, theta);
      if (v < best) {
        best = v;
        best_rho = rho;
        best_theta = theta;
      }
    }
  }

  // Refinement: exact theta for the current rho, then golden-section on
  // log10(rho) in a shrinking bracket around the grid optimum.
  constexpr double kGolden = 0.61803398874989484820;
  double lo = std::log10(best_rho) - 0.1, hi = std::log10(best_rho) + 0.1;
  auto f_of_log = [&](double lg) { return obj.eval_opt_theta(std::pow(10.0, lg)); };
  double m1 = hi - kGolden * (hi - lo), m2 = lo + kGolden * (hi - lo);
  double f1 = f_of_log(m1), f2 = f_of_log(m2);
  while (hi - lo > 1e-13) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - kGolden * (hi - lo);
      f1 = f_of_log(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + kGolden * (hi - lo);
      f2 = f_of_log(m2);
    }
  }
  best_rho = std::pow(10.0, 0.5 * (lo + hi));
  best_theta = obj.best_theta(best_rho);
  best = std::min(best, obj.eval(best_rho, best_theta));

  const double d = x0.squaredNorm() + h0.squaredNorm();
  if (d == 0.0) throw std::invalid_argument("aligned_distance: zero ground truth factor");
  // Clamp tiny negative values from cancellation.
  return std::max(best, 0.0) / d;
}

double aligned_distance(const ProductPoint& V, const GroundTruth& truth, int N, int K) {
  if (V.factors.size() != truth.size())
    throw std::invalid_argument("aligned_distance: user count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const CVec& w = V.factors[k];
    total += aligned_distance_factor(w.head(N), w.tail(K).conjugate(), truth[k].x, truth[k].h);
  }
  return std::sqrt(total);
}

double incoherence_mu(const CVec& h, const ChannelSubspace& subspace) {
  if (h.size() != subspace.K()) throw std::invalid_argument("incoherence_mu: channel length mismatch");
  const double hnorm = h.norm();
  if (hnorm == 0.0) throw std::invalid_argument("incoherence_mu: zero channel");
  const double peak = (subspace.B * h).cwiseAbs().maxCoeff();
  return std::sqrt(static_cast<double>(subspace.L())) * peak / hnorm;
}

}  // namespace blindmix
