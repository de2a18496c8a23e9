#pragma once

#include <set>
#include <vector>

#include "maskattack/griffin_lim.hpp"
#include "maskattack/psycho.hpp"
#include "maskattack/spectral.hpp"

namespace maskattack {

enum class AttackMethod { GL, OP, DE };

// raise_only leaves maskees already above the threshold untouched;
// set_exact pins every maskee to the threshold.
enum class RaisePolicy { raise_only, set_exact };

struct AttackConfig {
  AttackMethod method = AttackMethod::OP;
  StftConfig stft;
  GriffinLimConfig gl;
  RaisePolicy raise_policy = RaisePolicy::raise_only;
};

struct AttackResult {
  AudioBuffer adversarial_audio;
  Spectrogram attacked_spectrogram;
  std::vector<std::set<std::size_t>> per_frame_modified_bins;
};

// Raise maskee PSDs toward the global masking threshold; masker bins are
// untouched.
PsdFrame manipulate_frame_raise(const PsdFrame& psd, const MaskingAnalysis& analysis,
                                RaisePolicy policy);

AttackResult attack_op(const AudioBuffer& audio, const AttackConfig& cfg);
AttackResult attack_gl(const AudioBuffer& audio, const AttackConfig& cfg);
AttackResult attack_de(const AudioBuffer& audio, const AttackConfig& cfg);

AttackResult run_attack(const AudioBuffer& audio, const AttackConfig& cfg);

// Frame-wise splice in the STFT domain followed by a single synthesis pass.
AudioBuffer combine(const Spectrogram& original, const Spectrogram& attacked,
                    const std::set<std::size_t>& selected_frames);

}  // namespace maskattack
