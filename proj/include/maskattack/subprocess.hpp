#pragma once

#include <string>
#include <vector>

#include "maskattack/audio.hpp"

namespace maskattack::detail {

// Runs argv (no shell), captures stdout. Throws TranscriberError on nonzero
// exit or spawn failure.
std::string run_command_capture(const std::vector<std::string>& argv);

// Scoped temporary WAV file under /tmp.
class TempWav {
public:
  explicit TempWav(const AudioBuffer& audio);
  ~TempWav();
  TempWav(const TempWav&) = delete;
  TempWav& operator=(const TempWav&) = delete;
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace maskattack::detail
