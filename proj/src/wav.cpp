#include "rwt/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rwt/error.hpp"

namespace rwt {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

void put32(std::ostream& o, std::uint32_t v) {
  const char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                     char((v >> 24) & 0xff)};
  o.write(b, 4);
}
void put16(std::ostream& o, std::uint16_t v) {
  const char b[2] = {char(v & 0xff), char((v >> 8) & 0xff)};
  o.write(b, 2);
}

[[noreturn]] void bad(const std::string& field, const std::string& detail) {
  throw Error(ErrorCategory::format, "WAV " + field + ": " + detail);
}

}  // namespace

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12) bad("header", "file shorter than the RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) bad("chunk id", "expected RIFF");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) bad("format", "expected WAVE");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* c = bytes.data() + pos;
    const std::uint32_t size = le32(c + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) bad("chunk size", "chunk runs past the end of the file");
    if (std::memcmp(c, "fmt ", 4) == 0) {
      if (size < 16) bad("fmt size", "fmt chunk shorter than 16 bytes");
      const std::uint16_t tag = le16(c + 8);
      channels = le16(c + 10);
      rate = le32(c + 12);
      bits = le16(c + 22);
      if (tag != 1) bad("audio format", "only PCM (1) is supported, got " + std::to_string(tag));
      if (channels != 1) bad("channels", "only mono is supported, got " + std::to_string(channels));
      if (bits != 16) bad("bits per sample", "only 16 is supported, got " + std::to_string(bits));
      if (rate == 0) bad("sample rate", "must be positive");
      have_fmt = true;
    } else if (std::memcmp(c, "data", 4) == 0) {
      if (!have_fmt) bad("fmt", "data chunk before fmt chunk");
      if (size % 2 != 0) bad("data size", "odd byte count for 16-bit samples");
      Signal s;
      s.rate = rate;
      s.samples.resize(size / 2);
      for (std::uint32_t i = 0; i < size / 2; ++i) {
        s.samples[i] = static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i)) / 32768.0;
      }
      return s;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) bad("fmt", "missing fmt chunk");
  bad("data", "missing data chunk");
}

void write_wav(const std::filesystem::path& path, const Signal& sig) {
  if (!(sig.rate > 0.0) || sig.rate != std::round(sig.rate) || sig.rate > 4294967295.0) {
    throw Error(ErrorCategory::format, "WAV sample rate must be a positive integer");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
  const std::uint32_t n = static_cast<std::uint32_t>(sig.samples.size());
  const std::uint32_t rate = static_cast<std::uint32_t>(sig.rate);
  out.write("RIFF", 4);
  put32(out, 36 + 2 * n);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, 2 * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double v = std::clamp(sig.samples[i], -1.0, 1.0) * 32768.0;
    const long q = std::clamp<long>(std::lround(v), -32768, 32767);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

}  // namespace rwt
