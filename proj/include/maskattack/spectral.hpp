#pragma once

#include <complex>
#include <vector>

#include "maskattack/audio.hpp"

namespace maskattack {

enum class WindowKind { hann, rectangular };

// Analysis/synthesis framing. Defaults follow the pipeline convention:
// 2048-sample frames, 512-sample hop, Hann window.
struct StftConfig {
  int frame_len = 2048;
  int hop = 512;
  WindowKind window = WindowKind::hann;

  bool operator==(const StftConfig&) const = default;
};

using SpectralFrame = std::vector<std::complex<double>>;  // one-sided, N/2+1 bins

struct Spectrogram {
  std::vector<SpectralFrame> frames;
  StftConfig config;
  std::size_t original_len = 0;
  int sample_rate_hz = kPipelineRateHz;

  std::size_t frame_count() const { return frames.size(); }
  std::size_t bins() const { return static_cast<std::size_t>(config.frame_len) / 2 + 1; }
};

// Per-frame log-power spectral density. psd_db holds the normalized values
// (max 96 dB when any bin is nonzero); norm_offset_db is the reversible shift
// back to the raw 20*log10(|A|/N) scale. Raw values are floored at -200 dB.
struct PsdFrame {
  std::vector<double> psd_db;
  double norm_offset_db = 0.0;
  int frame_len = 0;
  std::vector<double> bin_freqs_hz;
};

inline constexpr double kPsdFloorDb = -200.0;
inline constexpr double kPsdNormTopDb = 96.0;

std::vector<double> make_window(const StftConfig& config);

// Number of frames produced for a signal of the given length (after the tail
// is zero-padded so the final frame is complete).
std::size_t stft_frame_count(std::size_t len, const StftConfig& config);

Spectrogram stft(const AudioBuffer& audio, const StftConfig& config = {});

// Weighted overlap-add with window-squared normalization, truncated to
// original_len and clamped to [-1, 1].
AudioBuffer istft(const Spectrogram& spec);

// As istft but without the final clamp; used inside iterative phase recovery.
AudioBuffer istft_unclamped(const Spectrogram& spec);

PsdFrame psd_of_frame(const SpectralFrame& frame, int frame_len,
                      int sample_rate_hz = kPipelineRateHz);

// Inverse of psd_of_frame: de-normalizes then applies
// Amplitude(k) = N * sqrt(10^(PSD(k)/10)). Floor bins map to amplitude 0.
std::vector<double> amplitude_from_psd(const PsdFrame& psd);

}  // namespace maskattack
