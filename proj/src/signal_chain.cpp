#include "blindmix/signal_chain.hpp"

#include <cmath>
#include <stdexcept>

#include "blindmix/dft.hpp"

namespace blindmix {

namespace {
constexpr double kQamScale = 0.31622776601683793320;  // 1/sqrt(10)
constexpr double kQamLevels[4] = {-3.0, -1.0, 1.0, 3.0};
}  // namespace

std::string to_string(SignalKind kind) {
  return kind == SignalKind::Gaussian ? "gaussian" : "qam16";
}

SignalKind signal_kind_from_string(const std::string& name) {
  if (name == "gaussian") return SignalKind::Gaussian;
  if (name == "qam16") return SignalKind::Qam16;
  throw std::invalid_argument("unknown signal kind: " + name);
}

ChannelImpulse ChannelImpulse::from_taps(const CVec& taps, int L) {
  if (taps.size() < 1 || taps.size() >= L)
    throw std::invalid_argument("ChannelImpulse: requires 1 <= K < L");
  ChannelImpulse ch;
  ch.h = taps;
  ch.g = CVec::Zero(L);
  ch.g.head(taps.size()) = taps;
  return ch;
}

Complex qam16_point(int index) {
  if (index < 0 || index > 15) throw std::invalid_argument("qam16: symbol index out of [0,15]");
  return Complex(kQamLevels[index >> 2], kQamLevels[index & 3]) * kQamScale;
}

CVec qam16_modulate(const QamMessage& msg) {
  if (msg.symbols.empty()) throw std::invalid_argument("qam16_modulate: empty message");
  CVec s(msg.symbols.size());
  for (std::size_t n = 0; n < msg.symbols.size(); ++n) s[n] = qam16_point(msg.symbols[n]);
  return s;
}

QamMessage qam16_demodulate(const CVec& x_hat) {
  const CVec s_hat = dft_unitary(x_hat);
  QamMessage msg;
  msg.symbols.resize(s_hat.size());
  for (Eigen::Index n = 0; n < s_hat.size(); ++n) {
    int best = 0;
    double best_d2 = std::norm(s_hat[n] - qam16_point(0));
    for (int idx = 1; idx < 16; ++idx) {
      const double d2 = std::norm(s_hat[n] - qam16_point(idx));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = idx;
      }
    }
    msg.symbols[n] = best;
  }
  return msg;
}

CVec ofdm_modulate(const CVec& s) {
  if (s.size() < 1) throw std::invalid_argument("ofdm_modulate: empty symbol vector");
  return idft_unitary(s);
}

CVec add_cyclic_prefix(const CVec& p, int Lp) {
  const int Np = static_cast<int>(p.size());
  if (Lp < 1 || Lp > Np) throw std::invalid_argument("add_cyclic_prefix: requires 1 <= Lp <= Np");
  CVec d(Np + Lp);
  d.head(Lp) = p.tail(Lp);
  d.tail(Np) = p;
  return d;
}

CVec cyclic_convolve(const CVec& f, const CVec& g) {
  const int L = static_cast<int>(f.size());
  if (g.size() != L) throw std::invalid_argument("cyclic_convolve: length mismatch");
  CVec out = CVec::Zero(L);
  for (int n = 0; n < L; ++n) {
    Complex acc = 0.0;
    for (int m = 0; m < L; ++m) {
      int j = n - m;
      if (j < 0) j += L;
      acc += f[m] * g[j];
    }
    out[n] = acc;
  }
  return out;
}

CVec lti_channel_output(const CVec& d, const CVec& q) {
  const int Lq = static_cast<int>(q.size());
  if (Lq < 1) throw std::invalid_argument("lti_channel_output: empty taps");
  const int Np = static_cast<int>(d.size()) - (Lq - 1);
  if (Np < 1 || Np < Lq - 1)
    throw std::invalid_argument("lti_channel_output: prefix shorter than L'-1");
  // Plain linear convolution theta[n] = sum_l q[l] d[n-l], restricted to the
  // Np samples where every tap sees transmitted data.
  CVec out(Np);
  for (int n = 0; n < Np; ++n) {
    const int t = n + Lq - 1;
    Complex acc = 0.0;
    for (int l = 0; l < Lq; ++l) acc += q[l] * d[t - l];
    out[n] = acc;
  }
  return out;
}

CVec receive_time_domain(const std::vector<SourceSignal>& signals,
                         const std::vector<const EncodingMatrix*>& encoders,
                         const std::vector<ChannelImpulse>& channels, const CVec& noise) {
  const std::size_t s = signals.size();
  if (encoders.size() != s || channels.size() != s)
    throw std::invalid_argument("receive_time_domain: per-user vectors must have equal size");
  const int L = static_cast<int>(noise.size());
  CVec z = noise;
  for (std::size_t k = 0; k < s; ++k) {
    if (encoders[k]->L() != L || channels[k].g.size() != L)
      throw std::invalid_argument("receive_time_domain: frame length mismatch");
    const CVec f = encoders[k]->encode_time_domain(signals[k].x);
    z += cyclic_convolve(f, channels[k].g);
  }
  return z;
}

CVec receive_time_domain(const MeasurementEnsemble& ensemble,
                         const std::vector<SourceSignal>& signals,
                         const std::vector<ChannelImpulse>& channels, const CVec& noise) {
  std::vector<const EncodingMatrix*> encoders;
  encoders.reserve(ensemble.num_users());
  for (int k = 0; k < ensemble.num_users(); ++k) encoders.push_back(&ensemble.encoder(k));
  return receive_time_domain(signals, encoders, channels, noise);
}

CVec fourier_observation(const CVec& z) {
  return dft_unitary(z) / std::sqrt(static_cast<double>(z.size()));
}

}  // namespace blindmix
