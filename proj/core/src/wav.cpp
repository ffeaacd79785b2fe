#include "diar/wav.hpp"

#include <cstring>
#include <fstream>

#include "diar/errors.hpp"

namespace diar {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

WavData read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());

  if (data.size() < 12 || std::memcmp(bytes, "RIFF", 4) != 0 ||
      std::memcmp(bytes + 8, "WAVE", 4) != 0)
    throw ParseError(path + ": not a RIFF/WAVE file");

  WavData wav;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* chunk_id = data.data() + pos;
    std::uint32_t chunk_size = read_u32(bytes + pos + 4);
    std::size_t payload = pos + 8;
    if (payload + chunk_size > data.size())
      throw ParseError(path + ": truncated chunk");

    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw ParseError(path + ": short fmt chunk");
      std::uint16_t format = read_u16(bytes + payload);
      std::uint16_t channels = read_u16(bytes + payload + 2);
      std::uint32_t rate = read_u32(bytes + payload + 4);
      std::uint16_t bits = read_u16(bytes + payload + 14);
      if (format != 1 || bits != 16)
        throw ValidationError(path + ": only 16-bit PCM supported");
      if (channels != 1) throw ValidationError(path + ": only mono supported");
      wav.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      if (!have_fmt) throw ParseError(path + ": data chunk before fmt");
      wav.samples.resize(chunk_size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i) {
        std::uint16_t raw = read_u16(bytes + payload + i * 2);
        wav.samples[i] = static_cast<std::int16_t>(raw);
      }
      return wav;
    }
    pos = payload + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  throw ParseError(path + ": no data chunk");
}

void write_wav_file(const std::string& path, const WavData& wav) {
  if (wav.sample_rate <= 0) throw ValidationError("sample rate must be positive");
  std::string out;
  std::uint32_t data_bytes = static_cast<std::uint32_t>(wav.samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (std::int16_t s : wav.samples) put_u16(out, static_cast<std::uint16_t>(s));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write WAV file: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace diar
