#pragma once

#include <array>
#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "maskattack/audio.hpp"
#include "maskattack/spectral.hpp"

namespace maskattack {

struct TranscriberInfo {
  std::string name;
  int max_concurrency = 1;
  int supports_rate_hz = kPipelineRateHz;
};

struct TranscriptionResult {
  std::string text;  // canonical: lowercase, single-space separated
  double latency_ms = 0.0;
  std::string transcriber_name;
};

// Lowercase, strip punctuation, collapse whitespace. Applied by every
// transcriber so error rates are comparable across backends.
std::string canonicalize_transcript(const std::string& raw);

// Black-box speech recognizer: audio in, text out.
class Transcriber {
public:
  virtual ~Transcriber() = default;
  virtual TranscriberInfo info() const = 0;
  virtual TranscriptionResult transcribe(const AudioBuffer& audio) = 0;
};

// Deterministic offline stand-in for a real recognizer. Audio is cut into
// non-overlapping frames; each voiced frame (RMS > 1e-4) maps to one of 16
// fixed words via a 4-bit code of band energies (0-1, 1-2, 2-4, 4-8 kHz)
// thresholded at the frame's median band energy. Consecutive duplicates
// collapse. Silence transcribes to "".
class MockTranscriber : public Transcriber {
public:
  // Non-overlapping rectangular frames keep the mock's output local to the
  // frame that changed; the pipeline's 75% overlap would smear single-frame
  // edits across neighbors.
  explicit MockTranscriber(StftConfig config = {512, 512, WindowKind::rectangular});

  TranscriberInfo info() const override;
  TranscriptionResult transcribe(const AudioBuffer& audio) override;

  static const std::array<std::string, 16>& vocabulary();

private:
  StftConfig config_;
};

// Wraps any Transcriber and counts transcribe() calls; used to verify probe
// budgets.
class CountingTranscriber : public Transcriber {
public:
  explicit CountingTranscriber(std::shared_ptr<Transcriber> inner)
      : inner_(std::move(inner)) {}
  TranscriberInfo info() const override { return inner_->info(); }
  TranscriptionResult transcribe(const AudioBuffer& audio) override {
    ++calls_;
    return inner_->transcribe(audio);
  }
  long calls() const { return calls_.load(); }

private:
  std::shared_ptr<Transcriber> inner_;
  std::atomic<long> calls_ = 0;
};

// Bridges to an external ASR command: the configured argv is invoked with the
// WAV path appended; the transcript is read from stdout. Nonzero exit status
// is an error.
class CommandTranscriber : public Transcriber {
public:
  CommandTranscriber(std::vector<std::string> argv, std::string name = "command",
                     int retries = 0);
  TranscriberInfo info() const override;
  TranscriptionResult transcribe(const AudioBuffer& audio) override;

private:
  std::vector<std::string> argv_;
  std::string name_;
  int retries_;
};

// Single POST, body = WAV bytes, content type audio/wav; the response body is
// the plain-text transcript. If api_key_env is non-empty the named
// environment variable's value is sent as the Authorization header.
class HttpTranscriber : public Transcriber {
public:
  HttpTranscriber(std::string url, std::string name = "http",
                  std::string api_key_env = "", int timeout_s = 30, int retries = 0);
  TranscriberInfo info() const override;
  TranscriptionResult transcribe(const AudioBuffer& audio) override;

private:
  std::string host_;
  std::string path_;
  std::string name_;
  std::string api_key_env_;
  int timeout_s_;
  int retries_;
};

// Parses a transcriber spec string: "mock", "command:<shell command>" or
// "http://host/path" (also "https://...").
std::shared_ptr<Transcriber> make_transcriber(const std::string& spec,
                                              const std::string& api_key_env = "");

}  // namespace maskattack
