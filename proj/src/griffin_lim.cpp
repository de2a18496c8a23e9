#include "maskattack/griffin_lim.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace maskattack {

namespace {

double magnitude_norm(const std::vector<std::vector<double>>& mag) {
  double acc = 0.0;
  for (const auto& frame : mag) {
    for (double v : frame) acc += v * v;
  }
  return std::sqrt(acc);
}

}  // namespace

GriffinLimResult griffin_lim(const std::vector<std::vector<double>>& target_magnitude,
                             const StftConfig& stft_config,
                             const GriffinLimConfig& gl_config,
                             std::size_t output_len,
                             const std::vector<std::vector<double>>* initial_phase,
                             int sample_rate_hz) {
  if (gl_config.iterations < 0) throw ConfigError("iterations must be >= 0");
  const std::size_t bins = static_cast<std::size_t>(stft_config.frame_len) / 2 + 1;
  for (const auto& frame : target_magnitude) {
    if (frame.size() != bins) throw DimensionError("magnitude frame has wrong bin count");
    for (double v : frame) {
      if (v < 0.0 || !std::isfinite(v)) throw DimensionError("magnitude must be finite and non-negative");
    }
  }
  if (initial_phase != nullptr && initial_phase->size() != target_magnitude.size()) {
    throw DimensionError("initial phase shape mismatch");
  }

  const std::size_t n_frames = target_magnitude.size();
  const std::size_t padded_len =
      n_frames == 0 ? 0
                    : static_cast<std::size_t>(stft_config.frame_len) +
                          (n_frames - 1) * static_cast<std::size_t>(stft_config.hop);
  if (output_len == 0) output_len = padded_len;

  std::vector<std::vector<double>> phase(n_frames, std::vector<double>(bins, 0.0));
  switch (gl_config.init) {
    case PhaseInit::zero_phase:
      break;
    case PhaseInit::random_phase: {
      std::mt19937_64 rng(gl_config.rng_seed);
      std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
      for (auto& frame : phase) {
        for (double& p : frame) p = dist(rng);
      }
      break;
    }
    case PhaseInit::provided_phase:
      if (initial_phase == nullptr) throw ConfigError("provided_phase requires an initial phase");
      for (std::size_t t = 0; t < n_frames; ++t) {
        if ((*initial_phase)[t].size() != bins) throw DimensionError("initial phase shape mismatch");
        phase[t] = (*initial_phase)[t];
      }
      break;
  }

  Spectrogram work;
  work.config = stft_config;
  work.original_len = padded_len;  // no truncation inside the iteration
  work.sample_rate_hz = sample_rate_hz;
  work.frames.resize(n_frames, SpectralFrame(bins));

  auto apply_magnitude = [&]() {
    for (std::size_t t = 0; t < n_frames; ++t) {
      for (std::size_t k = 0; k < bins; ++k) {
        work.frames[t][k] = std::polar(target_magnitude[t][k], phase[t][k]);
      }
    }
  };

  GriffinLimResult result;
  const double target_norm = magnitude_norm(target_magnitude);

  for (int it = 0; it < gl_config.iterations && n_frames > 0; ++it) {
    apply_magnitude();
    AudioBuffer synth = istft_unclamped(work);
    Spectrogram analyzed = stft(synth, stft_config);

    double err_acc = 0.0;
    for (std::size_t t = 0; t < n_frames; ++t) {
      for (std::size_t k = 0; k < bins; ++k) {
        const std::complex<double> v = analyzed.frames[t][k];
        const double diff = std::abs(v) - target_magnitude[t][k];
        err_acc += diff * diff;
        phase[t][k] = std::arg(v);
      }
    }
    result.convergence_errors.push_back(target_norm > 0.0
                                            ? std::sqrt(err_acc) / target_norm
                                            : 0.0);
  }

  apply_magnitude();
  work.original_len = output_len;
  result.audio = istft(work);
  result.spectrogram = work;
  return result;
}

}  // namespace maskattack
