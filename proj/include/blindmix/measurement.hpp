#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blindmix/types.hpp"

namespace blindmix {

enum class EncoderKind { Gaussian, Hadamard };

std::string to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& name);

/// One user's encoder, stored as the L-by-N Fourier-domain matrix FC_k whose
/// i-th row is c_ki^H. Time-domain application C_k x goes through the inverse
/// unitary DFT of fc * x.
struct EncodingMatrix {
  EncoderKind kind = EncoderKind::Gaussian;
  std::uint64_t seed = 0;
  CMat fc;  // L x N, row i = c_ki^H

  int L() const { return static_cast<int>(fc.rows()); }
  int N() const { return static_cast<int>(fc.cols()); }

  /// Fourier-domain rows applied to a signal: entry i is c_ki^H x.
  CVec apply_rows(const CVec& x) const;

  /// Time-domain transmit signal C_k x in C^L.
  CVec encode_time_domain(const CVec& x) const;
};

/// Rows c_ki ~ CN(0, I_N), i.e. real/imag parts i.i.d. N(0, 1/2).
EncodingMatrix build_gaussian_encoding(int L, int N, std::uint64_t seed);

/// C_k = F D_k H with unitary L-point DFT F, seeded i.i.d. +-1 diagonal D_k
/// and H the first N columns of the order-L real Hadamard matrix
/// (Sylvester for L = 2^a, Paley order-12 Kronecker Sylvester for L = 12*2^a).
EncodingMatrix build_hadamard_encoding(int L, int N, std::uint64_t seed);

bool hadamard_size_supported(int L);

/// Order-L Hadamard matrix with +-1 entries; throws for unsupported L.
RMat hadamard_matrix(int L);

/// First K columns of the unitary L-point DFT; rows are b_i^H.
struct ChannelSubspace {
  CMat B;  // L x K

  int L() const { return static_cast<int>(B.rows()); }
  int K() const { return static_cast<int>(B.cols()); }
};

ChannelSubspace build_partial_dft(int L, int K);

/// Length-L Fourier-domain observation with its noise level and, when
/// simulated, the generating ground truth.
struct ObservationVector {
  CVec y;
  double sigma = 0.0;
  std::optional<GroundTruth> ground_truth;
};

/// The implicit rank-one sensing ensemble {A_ki = c_ki b̄_i^H} for all s
/// users. Matrices are regenerated from seeds; only the (kind, dims, seed)
/// header is ever serialized.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(EncoderKind kind, int L, int N, int K, int s,
                      std::uint64_t seed);

  EncoderKind kind() const { return kind_; }
  int L() const { return L_; }
  int N() const { return N_; }
  int K() const { return K_; }
  int num_users() const { return s_; }
  std::uint64_t seed() const { return seed_; }

  const EncodingMatrix& encoder(int k) const { return encoders_.at(k); }
  const ChannelSubspace& subspace() const { return subspace_; }

  /// [A_k(x h̄^H)]_i = (c_ki^H x)(b_i^H h).
  CVec forward_A(int k, const CVec& x, const CVec& h) const;

  /// Paper-verbatim adjoint, K-by-N: sum_i z_i b_i c_ki^H.
  CMat adjoint_A(int k, const CVec& z) const;

  /// Adjoint of forward_A under the complex Frobenius pairing, N-by-K:
  /// sum_i z_i c_ki b̄_i^H, satisfying <A_k(X), z> = <X, frobenius_adjoint_A(z)>.
  CMat frobenius_adjoint_A(int k, const CVec& z) const;

  /// Lifted forward map on w = [x; conj(h)]: equals forward_A(k, x, h).
  CVec forward_J(int k, const CVec& w) const;

  /// A_k applied to a dense N-by-K matrix (entry i is c_ki^H M b̄_i).
  CVec forward_A_matrix(int k, const CMat& M) const;

  /// JSON header {kind, L, N, K, s, seed}; load() regenerates the matrices.
  std::string dump_json() const;
  static MeasurementEnsemble load_json(const std::string& text);

 private:
  EncoderKind kind_;
  int L_, N_, K_, s_;
  std::uint64_t seed_;
  std::vector<EncodingMatrix> encoders_;
  ChannelSubspace subspace_;
};

/// y = sum_k A_k(x_k h̄_k^H) + e with e = sigma * ||y_clean|| * w/||w||,
/// w ~ CN(0, I_L) drawn from noise_seed.
ObservationVector synthesize_observation(const MeasurementEnsemble& ensemble,
                                         const GroundTruth& truth, double sigma,
                                         std::uint64_t noise_seed);

}  // namespace blindmix
