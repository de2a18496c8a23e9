#include "maskattack/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace maskattack {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return std::uint16_t(p[0]) | std::uint16_t(p[1]) << 8;
}

std::int16_t quantize16(double x) {
  double scaled = std::round(x * 32768.0);
  scaled = std::clamp(scaled, -32768.0, 32767.0);
  return static_cast<std::int16_t>(scaled);
}

}  // namespace

void clamp_samples(AudioBuffer& audio) {
  for (double& s : audio.samples) s = std::clamp(s, -1.0, 1.0);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio) {
  const std::uint32_t n = static_cast<std::uint32_t>(audio.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate_hz) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_bytes);
  for (double s : audio.samples) {
    std::int16_t q = quantize16(std::clamp(s, -1.0, 1.0));
    out.push_back(static_cast<std::uint16_t>(q) & 0xff);
    out.push_back((static_cast<std::uint16_t>(q) >> 8) & 0xff);
  }
  return out;
}

AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes, int expect_rate_hz,
                       bool allow_resample) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    std::uint32_t chunk_len = get_u32(hdr + 4);
    const std::uint8_t* body = hdr + 8;
    if (pos + 8 + chunk_len > bytes.size()) throw FormatError("truncated chunk");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError("fmt chunk too small");
      format = get_u16(body);
      channels = get_u16(body + 2);
      rate = get_u32(body + 4);
      bits = get_u16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word aligned
  }
  if (!have_fmt || data == nullptr) throw FormatError("missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw FormatError("bad fmt fields");

  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32) {
    throw UnsupportedCodecError("only PCM 16-bit and IEEE float 32-bit supported");
  }

  const std::uint32_t bytes_per_sample = bits / 8;
  const std::uint32_t frame_bytes = bytes_per_sample * channels;
  const std::uint32_t frames = data_len / frame_bytes;

  AudioBuffer audio;
  audio.sample_rate_hz = static_cast<int>(rate);
  audio.samples.resize(frames);
  for (std::uint32_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        std::int16_t v = static_cast<std::int16_t>(get_u16(p));
        acc += v / 32768.0;
      } else {
        float f;
        std::uint32_t raw = get_u32(p);
        std::memcpy(&f, &raw, 4);
        acc += f;
      }
    }
    audio.samples[i] = std::clamp(acc / channels, -1.0, 1.0);
  }

  if (expect_rate_hz > 0 && audio.sample_rate_hz != expect_rate_hz) {
    if (!allow_resample) {
      throw RateMismatchError("sample rate " + std::to_string(audio.sample_rate_hz) +
                              " != expected " + std::to_string(expect_rate_hz) +
                              " (pass the resample flag to convert)");
    }
    audio = resample_linear(audio, expect_rate_hz);
  }
  return audio;
}

AudioBuffer read_wav(const std::string& path, int expect_rate_hz, bool allow_resample) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes, expect_rate_hz, allow_resample);
}

void write_wav(const AudioBuffer& audio, const std::string& path) {
  std::vector<std::uint8_t> bytes = encode_wav(audio);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WriteError("write failed for " + path);
}

AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate_hz) {
  if (target_rate_hz <= 0) throw ConfigError("target rate must be positive");
  if (target_rate_hz == audio.sample_rate_hz) return audio;

  AudioBuffer out;
  out.sample_rate_hz = target_rate_hz;
  const std::size_t n = audio.samples.size();
  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * target_rate_hz / audio.sample_rate_hz));
  out.samples.resize(out_len);
  if (n == 0) return out;

  const double step = static_cast<double>(audio.sample_rate_hz) / target_rate_hz;
  for (std::size_t i = 0; i < out_len; ++i) {
    double pos = i * step;
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo >= n - 1) {
      out.samples[i] = audio.samples[n - 1];
      continue;
    }
    double frac = pos - lo;
    out.samples[i] = audio.samples[lo] * (1.0 - frac) + audio.samples[lo + 1] * frac;
  }
  return out;
}

}  // namespace maskattack
