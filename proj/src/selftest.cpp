#include <cmath>
#include <ostream>
#include <random>

#include "blindmix/dft.hpp"
#include "blindmix/experiments.hpp"
#include "blindmix/manifold.hpp"
#include "blindmix/metrics.hpp"
#include "blindmix/rng.hpp"
#include "blindmix/signal_chain.hpp"

namespace blindmix {

namespace {

// Dense sensing matrices, used only as oracles against the factored paths.
// Row i of fc is c_ki^H and row i of B is b_i^H, so b̄_i^H = conj(B.row(i)).
CMat dense_A(const MeasurementEnsemble& ens, int k, int i) {
  const CVec c_ki = ens.encoder(k).fc.row(i).adjoint();
  const Eigen::RowVectorXcd b_bar_h = ens.subspace().B.row(i).conjugate();
  return c_ki * b_bar_h;
}

CMat dense_J(const MeasurementEnsemble& ens, int k, int i) {
  const int N = ens.N(), K = ens.K();
  CMat J = CMat::Zero(N + K, N + K);
  J.topRightCorner(N, K) = dense_A(ens, k, i);
  return J;
}

Complex frob_inner(const CMat& a, const CMat& b) { return (a.adjoint() * b).trace(); }

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double rel_err_vec(const CVec& got, const CVec& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace

bool selftest(std::ostream& log) {
  bool all_ok = true;
  auto check = [&](const char* name, bool ok) {
    log << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    all_ok = all_ok && ok;
  };

  // 16-QAM constellation energy and end-to-end message round trip.
  {
    double power = 0.0;
    for (int idx = 0; idx < 16; ++idx) power += std::norm(qam16_point(idx));
    check("qam16 unit average energy", std::abs(power / 16.0 - 1.0) < 1e-12);

    std::mt19937_64 gen(7);
    std::uniform_int_distribution<int> sym(0, 15);
    QamMessage msg;
    for (int n = 0; n < 32; ++n) msg.symbols.push_back(sym(gen));
    const QamMessage back = qam16_demodulate(ofdm_modulate(qam16_modulate(msg)));
    check("qam16/ofdm round trip", back.symbols == msg.symbols);
  }

  // Convolution theorem with the explicit sqrt(L) factor.
  {
    const int L = 48;
    const CVec f = rng::complex_gaussian_vector(L, 11);
    const CVec g = rng::complex_gaussian_vector(L, 12);
    const CVec lhs = dft_unitary(cyclic_convolve(f, g));
    const CVec rhs = std::sqrt(double(L)) * dft_unitary(f).cwiseProduct(dft_unitary(g));
    check("unitary-DFT convolution theorem", rel_err_vec(lhs, rhs) < 1e-12);
  }

  // Time-domain chain vs Fourier-domain synthesis.
  {
    const int s = 2, N = 5, K = 3, L = 32;
    const MeasurementEnsemble ens(EncoderKind::Gaussian, L, N, K, s, 21);
    const GroundTruth truth = make_ground_truth(N, K, s, SignalKind::Gaussian, 21, 0);
    std::vector<SourceSignal> signals;
    std::vector<ChannelImpulse> channels;
    for (int k = 0; k < s; ++k) {
      signals.push_back({truth[k].x, SignalKind::Gaussian});
      channels.push_back(ChannelImpulse::from_taps(truth[k].h, L));
    }
    const CVec z = receive_time_domain(ens, signals, channels, CVec::Zero(L));
    const CVec y = synthesize_observation(ens, truth, 0.0, 0).y;
    check("dual-path forward model", rel_err_vec(fourier_observation(z), y) < 1e-10);
  }

  // Factored operators vs dense sensing matrices on a tiny instance.
  {
    const int s = 2, N = 3, K = 2, L = 12;
    const MeasurementEnsemble ens(EncoderKind::Gaussian, L, N, K, s, 31);
    const GroundTruth truth = make_ground_truth(N, K, s, SignalKind::Gaussian, 31, 0);
    const CVec y = synthesize_observation(ens, truth, 0.0, 0).y;

    ProductPoint V;
    for (int k = 0; k < s; ++k)
      V.factors.push_back(rng::complex_gaussian_vector(N + K, rng::derive_seed(32, k)));

    bool fwd_ok = true, j_ok = true, grad_ok = true;
    CostContext ctx(ens, y);
    for (int k = 0; k < s; ++k) {
      const CVec x = V.factors[k].head(N);
      const CVec h = V.factors[k].tail(K).conjugate();
      const CVec fwd = ens.forward_A(k, x, h);
      const CVec fwd_j = ens.forward_J(k, V.factors[k]);
      const CMat ww = V.factors[k] * V.factors[k].adjoint();
      CVec egrad_dense = CVec::Zero(N + K);
      const CVec resid = ctx.residual(V);
      for (int i = 0; i < L; ++i) {
        const Complex via_dense = frob_inner(dense_A(ens, k, i), lifted_matrix(x, h));
        if (std::abs(fwd[i] - via_dense) > 1e-12 * std::abs(via_dense)) fwd_ok = false;
        const Complex via_j = frob_inner(dense_J(ens, k, i), ww);
        if (std::abs(fwd_j[i] - via_j) > 1e-12 * std::max(1.0, std::abs(via_j))) j_ok = false;
        const CMat Jki = dense_J(ens, k, i);
        egrad_dense += 2.0 * (resid[i] * Jki + std::conj(resid[i]) * Jki.adjoint()) * V.factors[k];
      }
      if (rel_err_vec(ctx.euclidean_gradient(V, k), egrad_dense) > 1e-11) grad_ok = false;
    }
    check("forward_A matches dense <A_ki, X>", fwd_ok);
    check("forward_J matches dense <J_ki, ww^H>", j_ok);
    check("euclidean gradient matches dense form", grad_ok);

    // Adjoint pairings. The Frobenius form is the adjoint of forward_A under
    // the Hermitian inner products; the verbatim K-by-N form pairs the two
    // factored measurement sides: x^H adjoint_A(z̄)^H h = <FC x, z .* (B h)>.
    const CVec z = rng::complex_gaussian_vector(L, 33);
    const CVec x = truth[0].x;
    const CVec h = truth[0].h;
    const CVec fwd = ens.forward_A(0, x, h);
    const Complex hlhs = fwd.dot(z);  // <A(x,h), z>
    const Complex hrhs = frob_inner(lifted_matrix(x, h), ens.frobenius_adjoint_A(0, z));
    check("frobenius adjoint identity", std::abs(hlhs - hrhs) < 1e-12 * std::abs(hlhs));
    const Complex plhs =
        (x.adjoint() * ens.adjoint_A(0, z.conjugate()).adjoint() * h).value();
    const Complex prhs =
        (ens.encoder(0).fc * x).dot(z.cwiseProduct(ens.subspace().B * h));
    check("verbatim adjoint pairing", std::abs(plhs - prhs) < 1e-12 * std::abs(plhs));
  }

  // Quotient geometry invariants on random instances.
  {
    bool idem = true, imag = true, orth = true, fiber = true;
    std::mt19937_64 dims(41);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + static_cast<int>(dims() % 7);
      const CVec w = rng::complex_gaussian_vector(n, rng::derive_seed(42, rep, 0, rng::Role::Direction));
      const CVec eta = rng::complex_gaussian_vector(n, rng::derive_seed(42, rep, 1, rng::Role::Direction));
      const CVec p = manifold::horizontal_project(w, eta);
      if ((manifold::horizontal_project(w, p) - p).norm() > 1e-12 * std::max(1.0, p.norm()))
        idem = false;
      const Complex a = manifold::horizontal_coefficient(w, eta);
      if (std::abs(a.real()) > 1e-13 * std::abs(a) + 1e-15) imag = false;
      if (std::abs(manifold::metric(eta - p, p)) > 1e-11 * std::max(1.0, eta.squaredNorm()))
        orth = false;
    }
    const int s = 2, N = 4, K = 3, L = 16;
    const MeasurementEnsemble ens(EncoderKind::Gaussian, L, N, K, s, 43);
    const GroundTruth truth = make_ground_truth(N, K, s, SignalKind::Gaussian, 43, 0);
    const CVec y = synthesize_observation(ens, truth, 0.0, 0).y;
    CostContext ctx(ens, y);
    ProductPoint V, Vr;
    std::mt19937_64 phase_gen(44);
    std::uniform_real_distribution<double> angle(0.0, 6.28318530717958647692);
    for (int k = 0; k < s; ++k) {
      V.factors.push_back(rng::complex_gaussian_vector(N + K, rng::derive_seed(45, k)));
      Vr.factors.push_back(std::polar(1.0, angle(phase_gen)) * V.factors[k]);
    }
    if (rel_err(ctx.objective(Vr), ctx.objective(V)) > 1e-12) fiber = false;
    check("horizontal projection idempotent", idem);
    check("projection coefficient purely imaginary", imag);
    check("vertical/horizontal orthogonality", orth);
    check("objective constant along fibers", fiber);
  }

  // Derivative oracles: finite differences and Hessian self-adjointness.
  {
    const int s = 2, N = 4, K = 3, L = 20;
    const MeasurementEnsemble ens(EncoderKind::Gaussian, L, N, K, s, 51);
    const GroundTruth truth = make_ground_truth(N, K, s, SignalKind::Gaussian, 51, 0);
    const CVec y = synthesize_observation(ens, truth, 0.0, 0).y;
    CostContext ctx(ens, y);
    ProductPoint V;
    for (int k = 0; k < s; ++k)
      V.factors.push_back(rng::complex_gaussian_vector(N + K, rng::derive_seed(52, k)));

    bool grad_fd = true, hess_fd = true;
    for (int rep = 0; rep < 5; ++rep) {
      const TangentVec eta = manifold::random_horizontal(V, rng::derive_seed(53, rep));
      const double t = 1e-6;
      ProductPoint Vp = V, Vm = V;
      for (int k = 0; k < s; ++k) {
        Vp.factors[k] += t * eta.factors[k];
        Vm.factors[k] -= t * eta.factors[k];
      }
      const double fd = (ctx.objective(Vp) - ctx.objective(Vm)) / (2.0 * t);
      const TangentVec grad = ctx.riemannian_gradient(V);
      if (rel_err(manifold::product_metric(eta, grad), fd) > 1e-5) grad_fd = false;

      TangentVec fd_hess;
      for (int k = 0; k < s; ++k) {
        ctx.objective(Vp);
        const CVec gp = ctx.euclidean_gradient(Vp, k);
        const CVec gm = ctx.euclidean_gradient(Vm, k);
        fd_hess.factors.push_back((gp - gm) / (2.0 * t));
      }
      for (int k = 0; k < s; ++k) {
        const CVec hv = ctx.euclidean_hessian_vec(V, k, eta);
        if (rel_err_vec(hv, fd_hess.factors[k]) > 1e-4) hess_fd = false;
      }
    }
    check("gradient matches central differences", grad_fd);
    check("hessian-vector matches differenced gradient", hess_fd);

    const TangentVec Z = manifold::random_horizontal(V, 61);
    const TangentVec W = manifold::random_horizontal(V, 62);
    const double zw = manifold::product_metric(ctx.riemannian_hessian_vec(V, Z), W);
    const double wz = manifold::product_metric(Z, ctx.riemannian_hessian_vec(V, W));
    check("riemannian hessian self-adjoint", rel_err(zw, wz) < 1e-8);
  }

  // Spectral initialization plus trust region on a small instance.
  {
    const int s = 2, N = 8, K = 8, L = 128;
    const MeasurementEnsemble ens(EncoderKind::Gaussian, L, N, K, s, 71);
    const GroundTruth truth = make_ground_truth(N, K, s, SignalKind::Gaussian, 71, 0);
    const ObservationVector obs = synthesize_observation(ens, truth, 0.0, 0);
    CostContext ctx(ens, obs.y);
    const SolveResult res = rtr_run(ctx, spectral_init(ens, obs.y), TrustRegionConfig{}, &truth);
    check("small-instance exact recovery (rtr)",
          relative_error(res.point, truth, N, K) <= 1e-3);

    const double d0 = aligned_distance(res.point, truth, N, K);
    check("aligned distance small after recovery", d0 < 1e-2);
  }

  return all_ok;
}

}  // namespace blindmix
