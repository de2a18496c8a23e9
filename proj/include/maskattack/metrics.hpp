#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maskattack/audio.hpp"
#include "maskattack/spectral.hpp"

namespace maskattack {

struct EditBreakdown {
  std::size_t insertions = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;

  std::size_t total_edits() const { return insertions + substitutions + deletions; }
};

struct SimilarityScores {
  double segmental_snr_db = 0.0;
  double log_spectral_distance_db = 0.0;
  std::optional<double> external_pesq;
};

// Word-level edit distance with unit costs. WER = edits / ref_len and may
// exceed 1. Empty reference with a non-empty hypothesis yields +infinity;
// two empty strings yield 0.
std::pair<double, EditBreakdown> wer(const std::string& reference,
                                     const std::string& hypothesis);

// Character-level error rate (spaces count as characters).
std::pair<double, EditBreakdown> cer(const std::string& reference,
                                     const std::string& hypothesis);

// Fraction of attacks with WER > 0.
double success_rate(const std::vector<double>& wers);

// Mean over fixed-length segments of 10*log10(sum o^2 / sum (o-a)^2), each
// segment clamped to [clamp_lo, clamp_hi]; near-silent segments are skipped.
double segmental_snr(const AudioBuffer& original, const AudioBuffer& adversarial,
                     std::size_t segment_len = 512, double clamp_lo = -10.0,
                     double clamp_hi = 35.0);

// RMS difference of log-magnitude spectra (floored at -200 dB).
double log_spectral_distance(const AudioBuffer& original, const AudioBuffer& adversarial,
                             const StftConfig& config = {});

// Indices of points not dominated under maximize-both semantics; equal points
// are all retained.
std::vector<std::size_t> pareto_front(const std::vector<std::pair<double, double>>& points);

// Rank-based (Mann-Whitney) AUC: P(adv > benign) + 0.5 * P(tie).
double auc(const std::vector<double>& benign_scores,
           const std::vector<double>& adversarial_scores);

// Shells out to an external PESQ binary: argv(ref.wav, deg.wav), one float on
// stdout, validated to [-0.5, 4.5].
double external_pesq(const std::string& tool_path, const AudioBuffer& reference,
                     const AudioBuffer& degraded);

}  // namespace maskattack
