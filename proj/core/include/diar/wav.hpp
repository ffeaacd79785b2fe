#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diar {

// Mono 16-bit PCM audio.
struct WavData {
  int sample_rate = 16000;
  std::vector<std::int16_t> samples;
};

// Reads a RIFF/WAVE file; only 16-bit PCM mono is accepted.
WavData read_wav_file(const std::string& path);

void write_wav_file(const std::string& path, const WavData& wav);

}  // namespace diar
