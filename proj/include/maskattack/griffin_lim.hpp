#pragma once

#include <cstdint>
#include <vector>

#include "maskattack/spectral.hpp"

namespace maskattack {

enum class PhaseInit { random_phase, zero_phase, provided_phase };

struct GriffinLimConfig {
  int iterations = 100;
  std::uint64_t rng_seed = 0;
  PhaseInit init = PhaseInit::random_phase;
};

struct GriffinLimResult {
  AudioBuffer audio;
  Spectrogram spectrogram;  // target magnitude with the final phase estimate
  // Spectral-convergence error || |STFT(x_n)| - M || / ||M|| after each
  // iteration (iterations entries).
  std::vector<double> convergence_errors;
};

// Alternating projection phase estimation: synthesize with the current phase
// and the target magnitude, re-analyze, keep only the new phase. Deterministic
// for a fixed seed.
//
// target_magnitude holds one non-negative vector of N/2+1 bins per frame.
// initial_phase (radians, same shape) is consulted only for provided_phase.
// output_len == 0 synthesizes the full padded length.
GriffinLimResult griffin_lim(const std::vector<std::vector<double>>& target_magnitude,
                             const StftConfig& stft_config,
                             const GriffinLimConfig& gl_config,
                             std::size_t output_len = 0,
                             const std::vector<std::vector<double>>* initial_phase = nullptr,
                             int sample_rate_hz = kPipelineRateHz);

}  // namespace maskattack
