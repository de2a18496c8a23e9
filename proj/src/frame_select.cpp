#include "maskattack/frame_select.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "maskattack/metrics.hpp"

namespace maskattack {

FrameSelection select_all(std::size_t frame_count) {
  FrameSelection sel;
  sel.strategy = SelectionStrategy::all;
  for (std::size_t i = 0; i < frame_count; ++i) sel.indices.insert(i);
  return sel;
}

FrameSelection select_random(std::size_t frame_count, std::size_t k, std::uint64_t seed) {
  if (k > frame_count) throw SelectionError("k exceeds frame count");
  FrameSelection sel;
  sel.strategy = SelectionStrategy::random;

  std::vector<std::size_t> pool(frame_count);
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> dist(i, frame_count - 1);
    std::swap(pool[i], pool[dist(rng)]);
    sel.indices.insert(pool[i]);
  }
  return sel;
}

FrameSelection select_important(const AudioBuffer& audio, Transcriber& transcriber,
                                const StftConfig& stft_config, double wer_threshold) {
  if (wer_threshold < 0.0) throw ConfigError("wer_threshold must be >= 0");
  FrameSelection sel;
  sel.strategy = SelectionStrategy::important;

  const std::string baseline = transcriber.transcribe(audio).text;
  Spectrogram spec = stft(audio, stft_config);

  for (std::size_t j = 0; j < spec.frame_count(); ++j) {
    Spectrogram probed = spec;
    std::fill(probed.frames[j].begin(), probed.frames[j].end(),
              std::complex<double>(0.0, 0.0));
    std::string hyp;
    try {
      hyp = transcriber.transcribe(istft(probed)).text;
    } catch (const Error& e) {
      throw TranscriberError("probing frame " + std::to_string(j) + ": " + e.what());
    }
    const double frame_wer = wer(baseline, hyp).first;
    sel.wer_per_frame[j] = frame_wer;
    if (frame_wer > wer_threshold) sel.indices.insert(j);
  }
  return sel;
}

}  // namespace maskattack
