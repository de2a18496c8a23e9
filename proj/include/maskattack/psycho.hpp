#pragma once

#include <vector>

#include "maskattack/spectral.hpp"

namespace maskattack {

struct Masker {
  std::size_t bin = 0;
  double psd_db = 0.0;
  double bark = 0.0;
};

// Per-frame masking analysis: maskers, the maskee complement, the hearing
// threshold per bin and the combined global masking threshold (all on the
// normalized PSD scale where full scale maps to 96 dB).
struct MaskingAnalysis {
  std::vector<Masker> maskers;
  std::vector<std::size_t> maskee_bins;
  std::vector<double> ath_db;
  std::vector<double> global_threshold_db;
  double norm_offset_db = 0.0;
};

// Absolute threshold of hearing (Terhardt approximation), clamped above
// at +96 dB. Throws DomainError for freq_hz <= 0.
double ath(double freq_hz);

// Critical-band rate: 13*atan(0.00076 f) + 3.5*atan((f/7500)^2).
double bark(double freq_hz);

// A bin is a masker when it exceeds the hearing threshold, is a local
// maximum over its immediate neighbors and the maximum within 0.5 Bark.
// Plateau ties resolve to the lower bin index.
std::vector<Masker> find_maskers(const PsdFrame& psd);

// Two-slope spread per masker, power-summed with the hearing threshold.
std::vector<double> masking_threshold(const std::vector<Masker>& maskers,
                                      const PsdFrame& psd);

MaskingAnalysis analyze_frame(const PsdFrame& psd);

}  // namespace maskattack
