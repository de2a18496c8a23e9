#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "maskattack/griffin_lim.hpp"

using namespace maskattack;

namespace {

std::vector<std::vector<double>> magnitudes_of(const Spectrogram& s) {
  std::vector<std::vector<double>> out(s.frame_count());
  for (std::size_t t = 0; t < s.frame_count(); ++t) {
    out[t].resize(s.frames[t].size());
    for (std::size_t k = 0; k < s.frames[t].size(); ++k) {
      out[t][k] = std::abs(s.frames[t][k]);
    }
  }
  return out;
}

std::vector<std::vector<double>> phases_of(const Spectrogram& s) {
  std::vector<std::vector<double>> out(s.frame_count());
  for (std::size_t t = 0; t < s.frame_count(); ++t) {
    out[t].resize(s.frames[t].size());
    for (std::size_t k = 0; k < s.frames[t].size(); ++k) {
      out[t][k] = std::arg(s.frames[t][k]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("zero magnitude synthesizes silence with zero error") {
  StftConfig cfg;
  std::vector<std::vector<double>> mag(8, std::vector<double>(cfg.frame_len / 2 + 1, 0.0));
  GriffinLimConfig gl;
  gl.iterations = 5;
  GriffinLimResult r = griffin_lim(mag, cfg, gl);
  for (double s : r.audio.samples) CHECK(s == 0.0);
  REQUIRE(r.convergence_errors.size() == 5);
  for (double e : r.convergence_errors) CHECK(e == 0.0);
}

TEST_CASE("the true phase is a fixed point") {
  AudioBuffer a = testhelp::speechish(3, 6000);
  Spectrogram s = stft(a);
  auto mag = magnitudes_of(s);
  auto phase = phases_of(s);

  GriffinLimConfig gl;
  gl.iterations = 3;
  gl.init = PhaseInit::provided_phase;
  GriffinLimResult r = griffin_lim(mag, s.config, gl, a.samples.size(), &phase);
  for (double e : r.convergence_errors) CHECK(e < 1e-6);
  REQUIRE(r.audio.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(std::abs(r.audio.samples[i] - a.samples[i]) < 1e-6);
  }
}

TEST_CASE("convergence error is non-increasing and improves on a sine") {
  AudioBuffer a = testhelp::tone(440.0, 8000, 0.4);
  Spectrogram s = stft(a);
  auto mag = magnitudes_of(s);

  GriffinLimConfig gl;
  gl.iterations = 100;
  gl.rng_seed = 123;
  GriffinLimResult r = griffin_lim(mag, s.config, gl, a.samples.size());
  REQUIRE(r.convergence_errors.size() == 100);
  for (std::size_t i = 1; i < r.convergence_errors.size(); ++i) {
    CHECK(r.convergence_errors[i] <= r.convergence_errors[i - 1] + 1e-9);
  }
  CHECK(r.convergence_errors.back() < 0.5 * r.convergence_errors.front());
}

TEST_CASE("random phase init is seed deterministic") {
  AudioBuffer a = testhelp::speechish(8, 5000);
  Spectrogram s = stft(a);
  auto mag = magnitudes_of(s);

  GriffinLimConfig gl;
  gl.iterations = 10;
  gl.rng_seed = 42;
  GriffinLimResult r1 = griffin_lim(mag, s.config, gl, a.samples.size());
  GriffinLimResult r2 = griffin_lim(mag, s.config, gl, a.samples.size());
  CHECK(r1.audio.samples == r2.audio.samples);
  CHECK(r1.convergence_errors == r2.convergence_errors);

  gl.rng_seed = 43;
  GriffinLimResult r3 = griffin_lim(mag, s.config, gl, a.samples.size());
  CHECK(r1.audio.samples != r3.audio.samples);
}

TEST_CASE("input validation") {
  StftConfig cfg;
  std::vector<std::vector<double>> bad_bins(2, std::vector<double>(7, 0.0));
  GriffinLimConfig gl;
  CHECK_THROWS_AS(griffin_lim(bad_bins, cfg, gl), DimensionError);

  std::vector<std::vector<double>> neg(1, std::vector<double>(cfg.frame_len / 2 + 1, 0.0));
  neg[0][3] = -1.0;
  CHECK_THROWS_AS(griffin_lim(neg, cfg, gl), DimensionError);

  std::vector<std::vector<double>> ok(1, std::vector<double>(cfg.frame_len / 2 + 1, 0.0));
  gl.iterations = -1;
  CHECK_THROWS_AS(griffin_lim(ok, cfg, gl), ConfigError);

  gl.iterations = 1;
  gl.init = PhaseInit::provided_phase;
  CHECK_THROWS_AS(griffin_lim(ok, cfg, gl, 0, nullptr), ConfigError);
}
