#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskattack/errors.hpp"

namespace maskattack {

inline constexpr int kPipelineRateHz = 16000;

// Mono PCM signal, samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = kPipelineRateHz;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Clamp every sample to [-1, 1] in place.
void clamp_samples(AudioBuffer& audio);

// Reads a RIFF/WAVE file (PCM 16-bit or IEEE float 32-bit). Multi-channel
// input is averaged down to mono; samples are scaled to [-1, 1].
// If the file's rate differs from expect_rate_hz the call fails unless
// allow_resample is set, in which case the audio is linearly resampled.
// expect_rate_hz == 0 accepts any rate.
AudioBuffer read_wav(const std::string& path, int expect_rate_hz = kPipelineRateHz,
                     bool allow_resample = false);

// Writes mono 16-bit PCM, little endian. Samples are clamped and quantized
// with saturation at +1.0 -> 32767.
void write_wav(const AudioBuffer& audio, const std::string& path);

// In-memory codec used by the file functions and the HTTP transcriber.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio);
AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes,
                       int expect_rate_hz = 0, bool allow_resample = false);

// Linear interpolation resampler. Output length = round(len * target / source).
AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate_hz);

}  // namespace maskattack
