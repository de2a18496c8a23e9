#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "maskattack/audio.hpp"

namespace testhelp {

inline maskattack::AudioBuffer tone(double freq_hz, std::size_t len, double amp = 0.5,
                                    int rate = maskattack::kPipelineRateHz) {
  maskattack::AudioBuffer out;
  out.sample_rate_hz = rate;
  out.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate);
  }
  return out;
}

// Seeded mix of a few sines plus mild noise; peak-normalized to 0.5. Stands in
// for speech-like content in pipeline-level tests.
inline maskattack::AudioBuffer speechish(std::uint64_t seed, std::size_t len,
                                         int rate = maskattack::kPipelineRateHz) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(120.0, 3500.0);
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> noise(-0.02, 0.02);

  maskattack::AudioBuffer out;
  out.sample_rate_hz = rate;
  out.samples.assign(len, 0.0);
  for (int v = 0; v < 4; ++v) {
    const double f = freq(rng), a = amp(rng);
    // Slow amplitude envelope so frames differ.
    const double env_f = 0.5 + 3.0 * (v + 1);
    for (std::size_t i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / rate;
      out.samples[i] += a * (0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * env_f * t)) *
                        std::sin(2.0 * std::numbers::pi * f * t);
    }
  }
  double peak = 1e-12;
  for (double s : out.samples) peak = std::max(peak, std::abs(s));
  for (double& s : out.samples) s = 0.5 * s / peak + noise(rng);
  for (double& s : out.samples) s = std::clamp(s, -1.0, 1.0);
  return out;
}

class TempDir {
public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "maskattack_test_XXXXXX").string();
    path_ = mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (std::filesystem::path(path_) / name).string();
  }

private:
  std::string path_;
};

}  // namespace testhelp
