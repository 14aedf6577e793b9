#pragma once

#include <vector>

#include "blindmix/measurement.hpp"
#include "blindmix/types.hpp"

namespace blindmix {

enum class SignalKind { Gaussian, Qam16 };

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

/// Length-N symbol stream, each index in {0..15}.
struct QamMessage {
  std::vector<int> symbols;
};

struct SourceSignal {
  CVec x;
  SignalKind kind = SignalKind::Gaussian;
};

/// Channel taps h in C^K together with the zero-padded form g in C^L.
struct ChannelImpulse {
  CVec h;
  CVec g;

  static ChannelImpulse from_taps(const CVec& taps, int L);
  int K() const { return static_cast<int>(h.size()); }
};

/// 16-QAM constellation point for an index in {0..15}: levels {-3,-1,1,3}
/// on each axis (index>>2 selects the real level, index&3 the imaginary one),
/// scaled by 1/sqrt(10) for unit average energy.
Complex qam16_point(int index);

CVec qam16_modulate(const QamMessage& msg);

/// s_hat = F_N x_hat, then each entry snaps to the nearest constellation
/// point (ties toward the smaller index).
QamMessage qam16_demodulate(const CVec& x_hat);

/// OFDM baseband signal x = F_N^H s (unitary DFT), norm-preserving.
CVec ofdm_modulate(const CVec& s);

/// [p[Np-Lp..Np), p[0..Np)] for 1 <= Lp <= Np.
CVec add_cyclic_prefix(const CVec& p, int Lp);

/// out[n] = sum_m f[m] g[(n-m) mod L], evaluated directly.
CVec cyclic_convolve(const CVec& f, const CVec& g);

/// Windowed LTI output of taps q (length L') over the cyclic-prefixed block
/// d: the Np samples with full channel overlap, which equal the cyclic
/// convolution of the unprefixed block with the zero-padded taps.
CVec lti_channel_output(const CVec& d, const CVec& q);

/// z = sum_k (C_k x_k) circ g_k + n over one L-slot frame.
CVec receive_time_domain(const std::vector<SourceSignal>& signals,
                         const std::vector<const EncodingMatrix*>& encoders,
                         const std::vector<ChannelImpulse>& channels, const CVec& noise);

CVec receive_time_domain(const MeasurementEnsemble& ensemble,
                         const std::vector<SourceSignal>& signals,
                         const std::vector<ChannelImpulse>& channels, const CVec& noise);

/// Fourier-domain observation matching the lifted measurement model:
/// (unitary DFT of z) / sqrt(L), so that the convolution-theorem factor
/// cancels and the noiseless result equals sum_k forward_A(k, x_k, h_k).
CVec fourier_observation(const CVec& z);

}  // namespace blindmix
