#include "maskattack/asr.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>

#include "maskattack/fft.hpp"
#include "maskattack/subprocess.hpp"

#include "httplib.h"

namespace maskattack {

namespace {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string canonicalize_transcript(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isalnum(c) || c == '\'') {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MockTranscriber

MockTranscriber::MockTranscriber(StftConfig config) : config_(config) {}

TranscriberInfo MockTranscriber::info() const {
  return {"mock", /*max_concurrency=*/1 << 16, kPipelineRateHz};
}

const std::array<std::string, 16>& MockTranscriber::vocabulary() {
  static const std::array<std::string, 16> kVocab = {
      "alpha", "bravo", "charlie", "delta",    "echo",  "foxtrot",
      "golf",  "hotel", "india",   "juliet",   "kilo",  "lima",
      "mike",  "november", "oscar", "papa"};
  return kVocab;
}

TranscriptionResult MockTranscriber::transcribe(const AudioBuffer& audio) {
  Stopwatch timer;
  const std::size_t n = static_cast<std::size_t>(config_.frame_len);
  const std::size_t hop = static_cast<std::size_t>(config_.hop);
  const double nyquist_band_edges[4][2] = {
      {0.0, 1000.0}, {1000.0, 2000.0}, {2000.0, 4000.0}, {4000.0, 8000.0}};

  std::vector<std::string> words;
  std::vector<std::complex<double>> buf(n);
  for (std::size_t off = 0; off < audio.samples.size(); off += hop) {
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = (off + i < audio.samples.size()) ? audio.samples[off + i] : 0.0;
      buf[i] = s;
      energy += s * s;
    }
    const double rms = std::sqrt(energy / n);
    if (rms <= 1e-4) continue;

    detail::fft(buf, /*inverse=*/false);
    double band_energy[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const double freq = static_cast<double>(k) * audio.sample_rate_hz / n;
      for (int b = 0; b < 4; ++b) {
        if (freq > nyquist_band_edges[b][0] && freq <= nyquist_band_edges[b][1]) {
          band_energy[b] += std::norm(buf[k]);
          break;
        }
      }
    }
    double sorted[4];
    std::copy(band_energy, band_energy + 4, sorted);
    std::sort(sorted, sorted + 4);
    const double median = 0.5 * (sorted[1] + sorted[2]);
    // A band only counts when it is within 20 dB of the strongest band;
    // leakage- and quantization-level energy must not decide bits.
    const double floor = 1e-2 * (sorted[3] + 1e-300);

    int code = 0;
    for (int b = 0; b < 4; ++b) {
      if (band_energy[b] > median && band_energy[b] > floor) code |= 1 << b;
    }
    const std::string& word = vocabulary()[static_cast<std::size_t>(code)];
    if (words.empty() || words.back() != word) words.push_back(word);
  }

  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += words[i];
  }
  return {canonicalize_transcript(text), timer.elapsed_ms(), info().name};
}

// ---------------------------------------------------------------------------
// CommandTranscriber

CommandTranscriber::CommandTranscriber(std::vector<std::string> argv, std::string name,
                                       int retries)
    : argv_(std::move(argv)), name_(std::move(name)), retries_(retries) {
  if (argv_.empty()) throw ConfigError("command transcriber needs a non-empty argv");
}

TranscriberInfo CommandTranscriber::info() const { return {name_, 1, kPipelineRateHz}; }

TranscriptionResult CommandTranscriber::transcribe(const AudioBuffer& audio) {
  Stopwatch timer;
  detail::TempWav wav(audio);
  std::vector<std::string> argv = argv_;
  argv.push_back(wav.path());

  std::string output;
  int attempts = retries_ + 1;
  while (true) {
    try {
      output = detail::run_command_capture(argv);
      break;
    } catch (const TranscriberError&) {
      if (--attempts <= 0) throw;
    }
  }
  return {canonicalize_transcript(output), timer.elapsed_ms(), name_};
}

// ---------------------------------------------------------------------------
// HttpTranscriber

HttpTranscriber::HttpTranscriber(std::string url, std::string name,
                                 std::string api_key_env, int timeout_s, int retries)
    : name_(std::move(name)),
      api_key_env_(std::move(api_key_env)),
      timeout_s_(timeout_s),
      retries_(retries) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("http transcriber needs a URL");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = url;
    path_ = "/";
  } else {
    host_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
}

TranscriberInfo HttpTranscriber::info() const { return {name_, 4, kPipelineRateHz}; }

TranscriptionResult HttpTranscriber::transcribe(const AudioBuffer& audio) {
  Stopwatch timer;
  std::vector<std::uint8_t> wav = encode_wav(audio);
  std::string body(reinterpret_cast<const char*>(wav.data()), wav.size());

  httplib::Client client(host_);
  client.set_connection_timeout(timeout_s_, 0);
  client.set_read_timeout(timeout_s_, 0);

  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    const char* key = std::getenv(api_key_env_.c_str());
    if (key != nullptr && *key != '\0') headers.emplace("Authorization", key);
  }

  int attempts = retries_ + 1;
  while (true) {
    auto res = client.Post(path_, headers, body, "audio/wav");
    if (res && res->status >= 200 && res->status < 300) {
      return {canonicalize_transcript(res->body), timer.elapsed_ms(), name_};
    }
    if (--attempts <= 0) {
      if (!res) {
        throw TranscriberError("transport failure talking to " + host_);
      }
      throw TranscriberError("HTTP status " + std::to_string(res->status) +
                             " from " + host_);
    }
  }
}

// ---------------------------------------------------------------------------

std::shared_ptr<Transcriber> make_transcriber(const std::string& spec,
                                              const std::string& api_key_env) {
  if (spec == "mock") return std::make_shared<MockTranscriber>();
  if (spec.rfind("command:", 0) == 0) {
    std::istringstream iss(spec.substr(8));
    std::vector<std::string> argv;
    std::string tok;
    while (iss >> tok) argv.push_back(tok);
    return std::make_shared<CommandTranscriber>(std::move(argv));
  }
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    return std::make_shared<HttpTranscriber>(spec, "http", api_key_env);
  }
  throw ConfigError("unknown transcriber spec: " + spec);
}

}  // namespace maskattack
