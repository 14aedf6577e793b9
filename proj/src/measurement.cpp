#include "blindmix/measurement.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "blindmix/dft.hpp"
#include "blindmix/rng.hpp"

namespace blindmix {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_user(int k, int s) {
  if (k < 0 || k >= s) throw std::invalid_argument("measurement: user index out of range");
}

// Order-12 Hadamard matrix via the Paley construction on GF(11).
RMat paley_hadamard_12() {
  const int q = 11;
  std::array<int, 11> chi{};  // chi[r] = 1 if r is a nonzero quadratic residue, -1 otherwise
  for (int r = 1; r < q; ++r) chi[r] = -1;
  for (int a = 1; a < q; ++a) chi[(a * a) % q] = 1;

  RMat H = RMat::Zero(q + 1, q + 1);
  // Skew matrix S: border of +-1 and the Jacobsthal core; H = S + I.
  for (int j = 1; j <= q; ++j) {
    H(0, j) = 1.0;
    H(j, 0) = -1.0;
  }
  for (int i = 1; i <= q; ++i)
    for (int j = 1; j <= q; ++j)
      if (i != j) H(i, j) = chi[((i - j) % q + q) % q];
  H += RMat::Identity(q + 1, q + 1);

  RMat gram = H * H.transpose();
  if ((gram - 12.0 * RMat::Identity(12, 12)).norm() > 1e-9)
    throw std::logic_error("paley_hadamard_12: construction is not Hadamard");
  return H;
}

// Decompose L = base * 2^a with base in {1, 12}; returns {base, 2^a} or {0,0}.
std::pair<int, int> hadamard_factors(int L) {
  if (L < 1) return {0, 0};
  int pow2 = 1;
  int rest = L;
  while (rest % 2 == 0) {
    rest /= 2;
    pow2 *= 2;
  }
  if (rest == 1) return {1, pow2};
  if (rest == 3 && pow2 >= 4) return {12, pow2 / 4};  // 12 * 2^a = 3 * 2^(a+2)
  return {0, 0};
}

int sylvester_entry(int i, int j) {
  // (-1)^popcount(i & j)
  return (std::popcount(static_cast<unsigned>(i & j)) & 1) ? -1 : 1;
}

}  // namespace

std::string to_string(EncoderKind kind) {
  return kind == EncoderKind::Gaussian ? "gaussian" : "hadamard";
}

EncoderKind encoder_kind_from_string(const std::string& name) {
  if (name == "gaussian") return EncoderKind::Gaussian;
  if (name == "hadamard") return EncoderKind::Hadamard;
  throw std::invalid_argument("unknown encoder kind: " + name);
}

CVec EncodingMatrix::apply_rows(const CVec& x) const {
  if (x.size() != fc.cols()) throw std::invalid_argument("EncodingMatrix: signal length mismatch");
  return fc * x;
}

CVec EncodingMatrix::encode_time_domain(const CVec& x) const {
  return idft_unitary(apply_rows(x));
}

EncodingMatrix build_gaussian_encoding(int L, int N, std::uint64_t seed) {
  if (N < 1 || L <= N) throw std::invalid_argument("build_gaussian_encoding: requires L > N >= 1");
  EncodingMatrix enc;
  enc.kind = EncoderKind::Gaussian;
  enc.seed = seed;
  enc.fc.resize(L, N);
  std::mt19937_64 gen(seed);
  for (int i = 0; i < L; ++i)
    for (int n = 0; n < N; ++n) enc.fc(i, n) = rng::complex_gaussian(gen);
  return enc;
}

bool hadamard_size_supported(int L) { return hadamard_factors(L).first != 0; }

RMat hadamard_matrix(int L) {
  auto [base, pow2] = hadamard_factors(L);
  if (base == 0)
    throw std::invalid_argument("hadamard_matrix: order must be 2^a or 12*2^a, got " +
                                std::to_string(L));
  RMat H(L, L);
  if (base == 1) {
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) H(i, j) = sylvester_entry(i, j);
  } else {
    const RMat H12 = paley_hadamard_12();
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        H(i, j) = H12(i / pow2, j / pow2) * sylvester_entry(i % pow2, j % pow2);
  }
  return H;
}

EncodingMatrix build_hadamard_encoding(int L, int N, std::uint64_t seed) {
  if (N < 1 || L <= N) throw std::invalid_argument("build_hadamard_encoding: requires L > N >= 1");
  if (!hadamard_size_supported(L))
    throw std::invalid_argument("build_hadamard_encoding: L must be 2^a or 12*2^a, got " +
                                std::to_string(L));
  EncodingMatrix enc;
  enc.kind = EncoderKind::Hadamard;
  enc.seed = seed;
  enc.fc.resize(L, N);

  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(0.5);
  RVec d(L);
  for (int i = 0; i < L; ++i) d[i] = coin(gen) ? 1.0 : -1.0;

  const RMat H = hadamard_matrix(L);
  // fc = F * (F D H), one column at a time.
  for (int n = 0; n < N; ++n) {
    CVec col = (d.array() * H.col(n).array()).matrix().cast<Complex>();
    enc.fc.col(n) = dft_unitary(dft_unitary(col));
  }
  return enc;
}

ChannelSubspace build_partial_dft(int L, int K) {
  if (K < 1 || K >= L) throw std::invalid_argument("build_partial_dft: requires 1 <= K < L");
  ChannelSubspace sub;
  sub.B.resize(L, K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < K; ++j) {
      const long long m = (static_cast<long long>(i) * j) % L;
      sub.B(i, j) = std::polar(scale, -2.0 * kPi * static_cast<double>(m) / L);
    }
  }
  return sub;
}

MeasurementEnsemble::MeasurementEnsemble(EncoderKind kind, int L, int N, int K, int s,
                                         std::uint64_t seed)
    : kind_(kind), L_(L), N_(N), K_(K), s_(s), seed_(seed) {
  if (s < 1) throw std::invalid_argument("MeasurementEnsemble: s >= 1 required");
  if (L <= N || K >= L) throw std::invalid_argument("MeasurementEnsemble: requires L > N and L > K");
  encoders_.reserve(s);
  for (int k = 0; k < s; ++k) {
    const std::uint64_t enc_seed = rng::derive_seed(seed, 0, k, rng::Role::Encoder);
    encoders_.push_back(kind == EncoderKind::Gaussian ? build_gaussian_encoding(L, N, enc_seed)
                                                      : build_hadamard_encoding(L, N, enc_seed));
  }
  subspace_ = build_partial_dft(L, K);
}

CVec MeasurementEnsemble::forward_A(int k, const CVec& x, const CVec& h) const {
  check_user(k, s_);
  if (x.size() != N_ || h.size() != K_)
    throw std::invalid_argument("forward_A: factor shape mismatch");
  return (encoders_[k].fc * x).cwiseProduct(subspace_.B * h);
}

CMat MeasurementEnsemble::adjoint_A(int k, const CVec& z) const {
  check_user(k, s_);
  if (z.size() != L_) throw std::invalid_argument("adjoint_A: observation length mismatch");
  return subspace_.B.adjoint() * z.asDiagonal() * encoders_[k].fc;
}

CMat MeasurementEnsemble::frobenius_adjoint_A(int k, const CVec& z) const {
  check_user(k, s_);
  if (z.size() != L_) throw std::invalid_argument("frobenius_adjoint_A: observation length mismatch");
  return encoders_[k].fc.adjoint() * z.asDiagonal() * subspace_.B.conjugate();
}

CVec MeasurementEnsemble::forward_J(int k, const CVec& w) const {
  if (w.size() != N_ + K_) throw std::invalid_argument("forward_J: lifted vector length mismatch");
  return forward_A(k, w.head(N_), w.tail(K_).conjugate());
}

CVec MeasurementEnsemble::forward_A_matrix(int k, const CMat& M) const {
  check_user(k, s_);
  if (M.rows() != N_ || M.cols() != K_)
    throw std::invalid_argument("forward_A_matrix: matrix shape mismatch");
  return ((encoders_[k].fc * M).cwiseProduct(subspace_.B.conjugate())).rowwise().sum();
}

std::string MeasurementEnsemble::dump_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind_);
  j["L"] = L_;
  j["N"] = N_;
  j["K"] = K_;
  j["s"] = s_;
  j["seed"] = seed_;
  return j.dump();
}

MeasurementEnsemble MeasurementEnsemble::load_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  return MeasurementEnsemble(encoder_kind_from_string(j.at("kind").get<std::string>()),
                             j.at("L").get<int>(), j.at("N").get<int>(), j.at("K").get<int>(),
                             j.at("s").get<int>(), j.at("seed").get<std::uint64_t>());
}

ObservationVector synthesize_observation(const MeasurementEnsemble& ensemble,
                                         const GroundTruth& truth, double sigma,
                                         std::uint64_t noise_seed) {
  if (static_cast<int>(truth.size()) != ensemble.num_users())
    throw std::invalid_argument("synthesize_observation: truth size mismatch");
  if (sigma < 0.0) throw std::invalid_argument("synthesize_observation: sigma >= 0 required");

  CVec y = CVec::Zero(ensemble.L());
  for (int k = 0; k < ensemble.num_users(); ++k)
    y += ensemble.forward_A(k, truth[k].x, truth[k].h);

  if (sigma > 0.0) {
    CVec omega = rng::complex_gaussian_vector(ensemble.L(), noise_seed);
    y += (sigma * y.norm() / omega.norm()) * omega;
  }

  ObservationVector obs;
  obs.y = std::move(y);
  obs.sigma = sigma;
  obs.ground_truth = truth;
  return obs;
}

}  // namespace blindmix
