#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "maskattack/asr.hpp"
#include "maskattack/spectral.hpp"

namespace maskattack {

enum class SelectionStrategy { all, random, important };

struct FrameSelection {
  std::set<std::size_t> indices;
  SelectionStrategy strategy = SelectionStrategy::all;
  std::map<std::size_t, double> wer_per_frame;  // important only
};

FrameSelection select_all(std::size_t frame_count);

// k distinct indices, uniform, deterministic per seed.
FrameSelection select_random(std::size_t frame_count, std::size_t k, std::uint64_t seed);

// Probes the transcriber with one frame zeroed at a time (STFT domain) and
// keeps frames whose transcript moves by more than wer_threshold against the
// unmodified baseline. Issues exactly frame_count + 1 transcriber calls.
FrameSelection select_important(const AudioBuffer& audio, Transcriber& transcriber,
                                const StftConfig& stft_config, double wer_threshold = 0.0);

}  // namespace maskattack
