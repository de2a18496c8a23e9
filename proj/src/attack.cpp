#include "maskattack/attack.hpp"

#include <algorithm>
#include <cmath>

namespace maskattack {

namespace {

bool frame_is_silent(const PsdFrame& psd) {
  for (double p : psd.psd_db) {
    if (p - psd.norm_offset_db > kPsdFloorDb + 1e-9) return false;
  }
  return true;
}

// Shared amplitude manipulation for GL and OP: per frame, raise maskee PSDs
// toward the threshold and convert back to amplitudes. Masker bins keep the
// original complex value bit-exact. All-floor frames carry no maskers and are
// passed through unchanged.
struct ManipulatedFrames {
  std::vector<std::vector<double>> magnitude;  // per frame, per bin
  std::vector<std::set<std::size_t>> modified_bins;
};

ManipulatedFrames manipulate_magnitudes(const Spectrogram& spec, RaisePolicy policy) {
  ManipulatedFrames out;
  out.magnitude.resize(spec.frames.size());
  out.modified_bins.resize(spec.frames.size());
  for (std::size_t t = 0; t < spec.frames.size(); ++t) {
    const SpectralFrame& frame = spec.frames[t];
    PsdFrame psd = psd_of_frame(frame, spec.config.frame_len, spec.sample_rate_hz);
    auto& mag = out.magnitude[t];
    mag.resize(frame.size());
    for (std::size_t k = 0; k < frame.size(); ++k) mag[k] = std::abs(frame[k]);
    if (frame_is_silent(psd)) continue;

    MaskingAnalysis analysis = analyze_frame(psd);
    PsdFrame raised = manipulate_frame_raise(psd, analysis, policy);
    std::vector<double> amp = amplitude_from_psd(raised);
    for (std::size_t k : analysis.maskee_bins) {
      // Compare in the PSD domain so untouched maskees keep their original
      // complex value bit-exact instead of a log/exp round trip.
      if (raised.psd_db[k] != psd.psd_db[k]) {
        mag[k] = amp[k];
        out.modified_bins[t].insert(k);
      }
    }
  }
  return out;
}

}  // namespace

PsdFrame manipulate_frame_raise(const PsdFrame& psd, const MaskingAnalysis& analysis,
                                RaisePolicy policy) {
  PsdFrame out = psd;
  for (std::size_t k : analysis.maskee_bins) {
    const double theta = analysis.global_threshold_db[k];
    out.psd_db[k] = policy == RaisePolicy::raise_only
                        ? std::max(out.psd_db[k], theta)
                        : theta;
  }
  return out;
}

AttackResult attack_op(const AudioBuffer& audio, const AttackConfig& cfg) {
  Spectrogram spec = stft(audio, cfg.stft);
  ManipulatedFrames manip = manipulate_magnitudes(spec, cfg.raise_policy);

  AttackResult result;
  result.attacked_spectrogram = spec;
  result.per_frame_modified_bins = std::move(manip.modified_bins);
  for (std::size_t t = 0; t < spec.frames.size(); ++t) {
    for (std::size_t k : result.per_frame_modified_bins[t]) {
      // Keep the original phase; arg(0) is 0 for bins raised from silence.
      const double phase = std::arg(spec.frames[t][k]);
      result.attacked_spectrogram.frames[t][k] = std::polar(manip.magnitude[t][k], phase);
    }
  }
  result.adversarial_audio = istft(result.attacked_spectrogram);
  return result;
}

AttackResult attack_gl(const AudioBuffer& audio, const AttackConfig& cfg) {
  Spectrogram spec = stft(audio, cfg.stft);
  ManipulatedFrames manip = manipulate_magnitudes(spec, cfg.raise_policy);

  GriffinLimResult gl = griffin_lim(manip.magnitude, cfg.stft, cfg.gl,
                                    spec.original_len, nullptr, audio.sample_rate_hz);
  AttackResult result;
  result.adversarial_audio = std::move(gl.audio);
  result.attacked_spectrogram = std::move(gl.spectrogram);
  result.attacked_spectrogram.original_len = spec.original_len;
  result.per_frame_modified_bins = std::move(manip.modified_bins);
  return result;
}

AttackResult attack_de(const AudioBuffer& audio, const AttackConfig& cfg) {
  Spectrogram spec = stft(audio, cfg.stft);

  AttackResult result;
  result.attacked_spectrogram = spec;
  result.per_frame_modified_bins.resize(spec.frames.size());
  for (std::size_t t = 0; t < spec.frames.size(); ++t) {
    const SpectralFrame& frame = spec.frames[t];
    PsdFrame psd = psd_of_frame(frame, spec.config.frame_len, spec.sample_rate_hz);
    // No spread threshold here: maskers are kept, everything else is zeroed.
    std::vector<Masker> maskers = find_maskers(psd);
    std::vector<bool> keep(frame.size(), false);
    for (const Masker& m : maskers) keep[m.bin] = true;
    for (std::size_t k = 0; k < frame.size(); ++k) {
      if (!keep[k] && frame[k] != std::complex<double>(0.0, 0.0)) {
        result.attacked_spectrogram.frames[t][k] = 0.0;
        result.per_frame_modified_bins[t].insert(k);
      }
    }
  }
  result.adversarial_audio = istft(result.attacked_spectrogram);
  return result;
}

AttackResult run_attack(const AudioBuffer& audio, const AttackConfig& cfg) {
  switch (cfg.method) {
    case AttackMethod::GL:
      return attack_gl(audio, cfg);
    case AttackMethod::OP:
      return attack_op(audio, cfg);
    case AttackMethod::DE:
      return attack_de(audio, cfg);
  }
  throw ConfigError("unknown attack method");
}

AudioBuffer combine(const Spectrogram& original, const Spectrogram& attacked,
                    const std::set<std::size_t>& selected_frames) {
  if (!(original.config == attacked.config) ||
      original.frame_count() != attacked.frame_count()) {
    throw DimensionError("spectrograms must share config and frame count");
  }
  for (std::size_t idx : selected_frames) {
    if (idx >= original.frame_count()) {
      throw SelectionError("selected frame index out of range");
    }
  }
  Spectrogram spliced = original;
  for (std::size_t idx : selected_frames) spliced.frames[idx] = attacked.frames[idx];
  return istft(spliced);
}

}  // namespace maskattack
