#pragma once

#include <memory>
#include <vector>

#include "maskattack/asr.hpp"
#include "maskattack/metrics.hpp"

namespace maskattack {

enum class TransformKind { down_up_sample, quantize_dequantize, median_filter };

struct AudioTransform {
  TransformKind kind = TransformKind::down_up_sample;
  int target_rate_hz = 8000;  // down_up_sample
  int bits = 8;               // quantize_dequantize, 1..16
  int width = 3;              // median_filter, odd
};

// Transform-and-compare detector configuration. cer_threshold has no library
// default; callers must choose one.
struct DetectorConfig {
  AudioTransform transform;
  double cer_threshold = 0.0;
  std::shared_ptr<Transcriber> transcriber;
};

struct DetectionOutcome {
  double score = 0.0;
  bool is_adversarial = false;
};

AudioBuffer transform_audio(const AudioBuffer& audio, const AudioTransform& transform);

// score = CER between the transcript of the input and of its transformed
// version; exactly two transcriber calls.
DetectionOutcome detection_score(const AudioBuffer& audio, const DetectorConfig& cfg);

double evaluate_detector(const std::vector<AudioBuffer>& benign,
                         const std::vector<AudioBuffer>& adversarial,
                         const DetectorConfig& cfg);

}  // namespace maskattack
