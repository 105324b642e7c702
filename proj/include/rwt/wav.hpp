#pragma once

#include <filesystem>

#include "rwt/signals.hpp"

namespace rwt {

/// 16-bit PCM mono. Samples map to [-1, 1) by division by 32768.
/// Throws Error(format) naming the offending header field, Error(io) if unreadable.
Signal read_wav(const std::filesystem::path& path);

/// Clips to [-1, 1], scales by 32768, rounds to nearest and saturates to the int16 range.
void write_wav(const std::filesystem::path& path, const Signal& sig);

}  // namespace rwt
