#include "maskattack/defense.hpp"

#include <algorithm>
#include <cmath>

namespace maskattack {

namespace {

void validate(const AudioBuffer& audio, const AudioTransform& t) {
  switch (t.kind) {
    case TransformKind::down_up_sample:
      if (t.target_rate_hz <= 0 || t.target_rate_hz >= audio.sample_rate_hz) {
        throw ConfigError("down_up_sample target rate must be below the input rate");
      }
      break;
    case TransformKind::quantize_dequantize:
      if (t.bits < 1 || t.bits > 16) throw ConfigError("bits must lie in [1, 16]");
      break;
    case TransformKind::median_filter:
      if (t.width < 1 || t.width % 2 == 0) throw ConfigError("median width must be odd");
      break;
  }
}

}  // namespace

AudioBuffer transform_audio(const AudioBuffer& audio, const AudioTransform& transform) {
  validate(audio, transform);
  switch (transform.kind) {
    case TransformKind::down_up_sample: {
      AudioBuffer down = resample_linear(audio, transform.target_rate_hz);
      AudioBuffer up = resample_linear(down, audio.sample_rate_hz);
      // Linear rate math can land one sample off the original length.
      up.samples.resize(audio.samples.size(),
                        up.samples.empty() ? 0.0 : up.samples.back());
      return up;
    }
    case TransformKind::quantize_dequantize: {
      AudioBuffer out = audio;
      const double levels = std::pow(2.0, transform.bits - 1);
      for (double& s : out.samples) {
        s = std::clamp(std::round(s * levels) / levels, -1.0, 1.0);
      }
      return out;
    }
    case TransformKind::median_filter: {
      AudioBuffer out = audio;
      const int half = transform.width / 2;
      const auto n = static_cast<long>(audio.samples.size());
      std::vector<double> window;
      for (long i = 0; i < n; ++i) {
        window.clear();
        for (long j = std::max(0L, i - half); j <= std::min(n - 1, i + half); ++j) {
          window.push_back(audio.samples[j]);
        }
        std::nth_element(window.begin(), window.begin() + window.size() / 2, window.end());
        out.samples[i] = window[window.size() / 2];
      }
      return out;
    }
  }
  throw ConfigError("unknown transform");
}

DetectionOutcome detection_score(const AudioBuffer& audio, const DetectorConfig& cfg) {
  if (!cfg.transcriber) throw ConfigError("detector needs a transcriber");
  if (cfg.cer_threshold < 0.0) throw ConfigError("cer_threshold must be >= 0");
  const std::string before = cfg.transcriber->transcribe(audio).text;
  const std::string after =
      cfg.transcriber->transcribe(transform_audio(audio, cfg.transform)).text;
  DetectionOutcome out;
  out.score = cer(before, after).first;
  out.is_adversarial = out.score > cfg.cer_threshold;
  return out;
}

double evaluate_detector(const std::vector<AudioBuffer>& benign,
                         const std::vector<AudioBuffer>& adversarial,
                         const DetectorConfig& cfg) {
  if (benign.empty() || adversarial.empty()) {
    throw UndefinedInputError("evaluate_detector requires both sets non-empty");
  }
  std::vector<double> benign_scores, adversarial_scores;
  benign_scores.reserve(benign.size());
  adversarial_scores.reserve(adversarial.size());
  for (const AudioBuffer& a : benign) benign_scores.push_back(detection_score(a, cfg).score);
  for (const AudioBuffer& a : adversarial) {
    adversarial_scores.push_back(detection_score(a, cfg).score);
  }
  return auc(benign_scores, adversarial_scores);
}

}  // namespace maskattack
