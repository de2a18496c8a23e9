#include "maskattack/psycho.hpp"

#include <algorithm>
#include <cmath>

namespace maskattack {

namespace {

// Hearing threshold per bin; the DC bin has no defined frequency and gets the
// +96 dB ceiling, which excludes it from masker candidacy.
std::vector<double> ath_per_bin(const PsdFrame& psd) {
  std::vector<double> out(psd.bin_freqs_hz.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = psd.bin_freqs_hz[k] > 0.0 ? ath(psd.bin_freqs_hz[k]) : kPsdNormTopDb;
  }
  return out;
}

}  // namespace

double ath(double freq_hz) {
  if (freq_hz <= 0.0) throw DomainError("ath requires freq_hz > 0");
  const double f = freq_hz / 1000.0;
  const double v = 3.64 * std::pow(f, -0.8) -
                   6.5 * std::exp(-0.6 * (f - 3.3) * (f - 3.3)) +
                   1e-3 * std::pow(f, 4.0);
  return std::min(v, kPsdNormTopDb);
}

double bark(double freq_hz) {
  return 13.0 * std::atan(0.00076 * freq_hz) +
         3.5 * std::atan((freq_hz / 7500.0) * (freq_hz / 7500.0));
}

std::vector<Masker> find_maskers(const PsdFrame& psd) {
  const std::size_t bins = psd.psd_db.size();
  const std::vector<double> ath_db = ath_per_bin(psd);
  std::vector<double> bark_of(bins);
  for (std::size_t k = 0; k < bins; ++k) bark_of[k] = bark(psd.bin_freqs_hz[k]);

  std::vector<Masker> maskers;
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = psd.psd_db[k];
    if (p <= ath_db[k]) continue;
    // Strict local max against immediate neighbors; an equal-PSD plateau
    // keeps only its lowest index.
    if (k > 0 && !(p > psd.psd_db[k - 1])) continue;
    if (k + 1 < bins && !(p >= psd.psd_db[k + 1])) continue;

    bool dominated = false;
    for (std::size_t j = k; j-- > 0;) {
      if (bark_of[k] - bark_of[j] > 0.5) break;
      if (psd.psd_db[j] >= p) {  // equal lower index wins
        dominated = true;
        break;
      }
    }
    for (std::size_t j = k + 1; !dominated && j < bins; ++j) {
      if (bark_of[j] - bark_of[k] > 0.5) break;
      if (psd.psd_db[j] > p) dominated = true;
    }
    if (dominated) continue;
    maskers.push_back({k, p, bark_of[k]});
  }
  return maskers;
}

std::vector<double> masking_threshold(const std::vector<Masker>& maskers,
                                      const PsdFrame& psd) {
  const std::size_t bins = psd.psd_db.size();
  const std::vector<double> ath_db = ath_per_bin(psd);
  std::vector<double> theta(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double b = bark(psd.bin_freqs_hz[k]);
    double power = std::pow(10.0, ath_db[k] / 10.0);
    for (const Masker& m : maskers) {
      const double delta = b - m.bark;
      const double spread = delta < 0.0
                                ? 27.0 * delta
                                : (-27.0 + 0.37 * std::max(m.psd_db - 40.0, 0.0)) * delta;
      const double t = m.psd_db - 6.025 - 0.275 * m.bark + spread;
      power += std::pow(10.0, t / 10.0);
    }
    theta[k] = 10.0 * std::log10(power);
  }
  return theta;
}

MaskingAnalysis analyze_frame(const PsdFrame& psd) {
  MaskingAnalysis out;
  out.norm_offset_db = psd.norm_offset_db;
  out.ath_db = ath_per_bin(psd);
  out.maskers = find_maskers(psd);
  out.global_threshold_db = masking_threshold(out.maskers, psd);

  std::vector<bool> is_masker(psd.psd_db.size(), false);
  for (const Masker& m : out.maskers) is_masker[m.bin] = true;
  for (std::size_t k = 0; k < psd.psd_db.size(); ++k) {
    if (!is_masker[k]) out.maskee_bins.push_back(k);
  }
  return out;
}

}  // namespace maskattack
