#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "helpers.hpp"
#include "maskattack/spectral.hpp"

using namespace maskattack;

namespace {

// Independent frame-count oracle: grow the padded length hop by hop until it
// covers the signal, then count hops.
std::size_t frame_count_oracle(std::size_t len, const StftConfig& c) {
  const std::size_t n = c.frame_len, hop = c.hop;
  std::size_t padded = n;
  while (padded < len) padded += hop;
  return (padded - n) / hop + 1;
}

}  // namespace

TEST_CASE("frame count matches the hop-by-hop oracle") {
  const StftConfig cfg;
  CHECK(stft_frame_count(16000, cfg) == 29);  // 16384-sample padded length
  for (std::size_t len : {512u, 513u, 2047u, 2048u, 2049u, 2560u, 10000u, 16384u, 16385u}) {
    CHECK(stft_frame_count(len, cfg) == frame_count_oracle(len, cfg));
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dist(cfg.hop, 60000);
  for (int i = 0; i < 200; ++i) {
    const std::size_t len = dist(rng);
    CHECK(stft_frame_count(len, cfg) == frame_count_oracle(len, cfg));
  }
}

TEST_CASE("stft rejects empty and too-short input") {
  CHECK_THROWS_AS(stft(AudioBuffer{}), TooShortError);
  AudioBuffer a;
  a.samples.assign(511, 0.1);
  CHECK_THROWS_AS(stft(a), TooShortError);
  CHECK_THROWS_AS(stft(testhelp::tone(440, 2048), StftConfig{0, 512, WindowKind::hann}),
                  ConfigError);
  CHECK_THROWS_AS(stft(testhelp::tone(440, 2048), StftConfig{512, 1024, WindowKind::hann}),
                  ConfigError);
}

TEST_CASE("stft/istft round trip is transparent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  for (std::size_t len : {512u, 2048u, 5000u, 16000u}) {
    AudioBuffer a;
    a.samples.resize(len);
    for (double& s : a.samples) s = dist(rng);
    for (WindowKind w : {WindowKind::hann, WindowKind::rectangular}) {
      StftConfig cfg;
      cfg.window = w;
      AudioBuffer b = istft(stft(a, cfg));
      REQUIRE(b.samples.size() == a.samples.size());
      double err = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        err = std::max(err, std::abs(a.samples[i] - b.samples[i]));
      }
      CHECK(err < 1e-6);
    }
  }
}

TEST_CASE("bin-centered sine concentrates in one bin with a rectangular window") {
  // 500 Hz at 16 kHz with a 512 frame: bin 16 exactly.
  const StftConfig cfg{512, 512, WindowKind::rectangular};
  AudioBuffer a = testhelp::tone(500.0, 512, 0.5);
  Spectrogram s = stft(a, cfg);
  REQUIRE(s.frame_count() == 1);
  const std::size_t peak = 16;
  CHECK(std::abs(s.frames[0][peak]) == doctest::Approx(0.5 * 512 / 2).epsilon(1e-9));
  for (std::size_t k = 0; k < s.bins(); ++k) {
    if (k != peak) CHECK(std::abs(s.frames[0][k]) < 1e-9);
  }
}

TEST_CASE("istft validates frame shape") {
  Spectrogram s = stft(testhelp::tone(440, 4096));
  s.frames[0].pop_back();
  CHECK_THROWS_AS(istft(s), DimensionError);
}

TEST_CASE("PSD examples on the raw scale") {
  const int n = 512;
  SpectralFrame frame(n / 2 + 1, {0.0, 0.0});
  SUBCASE("|A| = N is 0 dB raw, 96 dB normalized") {
    frame[10] = {static_cast<double>(n), 0.0};
    PsdFrame p = psd_of_frame(frame, n);
    CHECK(p.psd_db[10] - p.norm_offset_db == 0.0);
    CHECK(p.psd_db[10] == 96.0);
    CHECK(p.norm_offset_db == 96.0);
  }
  SUBCASE("|A| = N/10 is -20 dB raw; as the max it also normalizes to 96") {
    frame[10] = {n / 10.0, 0.0};
    PsdFrame p = psd_of_frame(frame, n);
    CHECK(p.psd_db[10] - p.norm_offset_db == doctest::Approx(-20.0).epsilon(1e-12));
    CHECK(p.psd_db[10] == doctest::Approx(96.0).epsilon(1e-12));
    CHECK(p.norm_offset_db == doctest::Approx(116.0).epsilon(1e-12));
  }
  SUBCASE("all-zero frame floors at -200 dB with zero offset") {
    PsdFrame p = psd_of_frame(frame, n);
    CHECK(p.norm_offset_db == 0.0);
    for (double v : p.psd_db) CHECK(v == kPsdFloorDb);
    for (double a : amplitude_from_psd(p)) CHECK(a == 0.0);
  }
  SUBCASE("bin frequencies are k * rate / N") {
    PsdFrame p = psd_of_frame(frame, n);
    CHECK(p.bin_freqs_hz[0] == 0.0);
    CHECK(p.bin_freqs_hz[16] == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(p.bin_freqs_hz[n / 2] == doctest::Approx(8000.0).epsilon(1e-12));
  }
  SUBCASE("wrong bin count throws") {
    CHECK_THROWS_AS(psd_of_frame(frame, 1024), DimensionError);
  }
}

TEST_CASE("amplitude_from_psd inverts psd_of_frame") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(1e-6, 100.0);
  std::uniform_real_distribution<double> ph(-3.14, 3.14);
  const int n = 2048;
  SpectralFrame frame(n / 2 + 1);
  for (auto& v : frame) v = std::polar(mag(rng), ph(rng));

  PsdFrame p = psd_of_frame(frame, n);
  std::vector<double> amp = amplitude_from_psd(p);
  for (std::size_t k = 0; k < frame.size(); ++k) {
    CHECK(amp[k] == doctest::Approx(std::abs(frame[k])).epsilon(1e-9));
  }
}

TEST_CASE("PSD normalization is gain invariant") {
  AudioBuffer a = testhelp::speechish(1, 4096);
  Spectrogram s = stft(a);
  SpectralFrame scaled = s.frames[2];
  for (auto& v : scaled) v *= 10.0;
  PsdFrame p1 = psd_of_frame(s.frames[2], 2048);
  PsdFrame p2 = psd_of_frame(scaled, 2048);
  for (std::size_t k = 0; k < p1.psd_db.size(); ++k) {
    CHECK(p1.psd_db[k] == doctest::Approx(p2.psd_db[k]).epsilon(1e-9));
  }
  CHECK(p2.norm_offset_db == doctest::Approx(p1.norm_offset_db - 20.0).epsilon(1e-9));
}
