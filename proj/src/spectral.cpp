#include "maskattack/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maskattack/fft.hpp"

namespace maskattack {

namespace {

void validate(const StftConfig& c) {
  if (c.frame_len <= 0 || c.hop <= 0 || c.hop > c.frame_len) {
    throw ConfigError("require 0 < hop <= frame_len");
  }
}

AudioBuffer istft_impl(const Spectrogram& spec, bool clamp) {
  validate(spec.config);
  const std::size_t n = static_cast<std::size_t>(spec.config.frame_len);
  const std::size_t hop = static_cast<std::size_t>(spec.config.hop);
  const std::size_t bins = n / 2 + 1;
  const std::vector<double> window = make_window(spec.config);

  std::size_t padded_len = spec.frames.empty()
                               ? 0
                               : n + (spec.frames.size() - 1) * hop;
  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> norm(padded_len, 0.0);

  std::vector<std::complex<double>> full(n);
  for (std::size_t t = 0; t < spec.frames.size(); ++t) {
    const SpectralFrame& f = spec.frames[t];
    if (f.size() != bins) throw DimensionError("frame has wrong bin count");
    for (std::size_t k = 0; k < bins; ++k) full[k] = f[k];
    for (std::size_t k = bins; k < n; ++k) full[k] = std::conj(f[n - k]);
    detail::fft(full, /*inverse=*/true);
    const std::size_t off = t * hop;
    for (std::size_t i = 0; i < n; ++i) {
      acc[off + i] += full[i].real() * window[i];
      norm[off + i] += window[i] * window[i];
    }
  }

  AudioBuffer out;
  out.sample_rate_hz = spec.sample_rate_hz;
  const std::size_t out_len = std::min(spec.original_len, padded_len);
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    out.samples[i] = norm[i] > 0.0 ? acc[i] / norm[i] : 0.0;
  }
  if (clamp) clamp_samples(out);
  return out;
}

}  // namespace

std::vector<double> make_window(const StftConfig& config) {
  const std::size_t n = static_cast<std::size_t>(config.frame_len);
  std::vector<double> w(n, 1.0);
  if (config.window == WindowKind::hann) {
    // Half-sample-offset periodic Hann: strictly positive, so weighted
    // overlap-add reconstructs every sample exactly, including the edges a
    // zero-endpoint Hann cannot recover. Still COLA at hop = N/4.
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 0.5) / n);
    }
  }
  return w;
}

std::size_t stft_frame_count(std::size_t len, const StftConfig& config) {
  validate(config);
  const std::size_t n = static_cast<std::size_t>(config.frame_len);
  const std::size_t hop = static_cast<std::size_t>(config.hop);
  std::size_t padded = n;
  if (len > n) {
    padded = n + ((len - n + hop - 1) / hop) * hop;
  }
  return (padded - n) / hop + 1;
}

Spectrogram stft(const AudioBuffer& audio, const StftConfig& config) {
  validate(config);
  if (audio.samples.empty()) throw TooShortError("empty audio");
  if (audio.samples.size() < static_cast<std::size_t>(config.hop)) {
    throw TooShortError("audio shorter than one hop");
  }

  const std::size_t n = static_cast<std::size_t>(config.frame_len);
  const std::size_t hop = static_cast<std::size_t>(config.hop);
  const std::size_t bins = n / 2 + 1;
  const std::size_t frames = stft_frame_count(audio.samples.size(), config);
  const std::vector<double> window = make_window(config);

  Spectrogram spec;
  spec.config = config;
  spec.original_len = audio.samples.size();
  spec.sample_rate_hz = audio.sample_rate_hz;
  spec.frames.resize(frames);

  std::vector<std::complex<double>> buf(n);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t off = t * hop;
    for (std::size_t i = 0; i < n; ++i) {
      double s = (off + i < audio.samples.size()) ? audio.samples[off + i] : 0.0;
      buf[i] = s * window[i];
    }
    detail::fft(buf, /*inverse=*/false);
    spec.frames[t].assign(buf.begin(), buf.begin() + bins);
  }
  return spec;
}

AudioBuffer istft(const Spectrogram& spec) { return istft_impl(spec, true); }

AudioBuffer istft_unclamped(const Spectrogram& spec) { return istft_impl(spec, false); }

PsdFrame psd_of_frame(const SpectralFrame& frame, int frame_len, int sample_rate_hz) {
  if (frame.size() != static_cast<std::size_t>(frame_len) / 2 + 1) {
    throw DimensionError("frame length does not match bin count");
  }
  PsdFrame out;
  out.frame_len = frame_len;
  out.psd_db.resize(frame.size());
  out.bin_freqs_hz.resize(frame.size());

  double max_raw = kPsdFloorDb;
  bool any_nonzero = false;
  for (std::size_t k = 0; k < frame.size(); ++k) {
    out.bin_freqs_hz[k] = static_cast<double>(k) * sample_rate_hz / frame_len;
    const double mag = std::abs(frame[k]);
    double raw = kPsdFloorDb;
    if (mag > 0.0) {
      raw = std::max(20.0 * std::log10(mag / frame_len), kPsdFloorDb);
      any_nonzero = true;
    }
    out.psd_db[k] = raw;
    max_raw = std::max(max_raw, raw);
  }
  out.norm_offset_db = any_nonzero ? kPsdNormTopDb - max_raw : 0.0;
  for (double& p : out.psd_db) p += out.norm_offset_db;
  return out;
}

std::vector<double> amplitude_from_psd(const PsdFrame& psd) {
  std::vector<double> amp(psd.psd_db.size());
  for (std::size_t k = 0; k < psd.psd_db.size(); ++k) {
    const double raw = psd.psd_db[k] - psd.norm_offset_db;
    if (raw <= kPsdFloorDb + 1e-9) {
      amp[k] = 0.0;
    } else {
      amp[k] = psd.frame_len * std::sqrt(std::pow(10.0, raw / 10.0));
    }
  }
  return amp;
}

}  // namespace maskattack
