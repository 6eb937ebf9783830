#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hv {

/// Round-trippable decimal representation (%.17g), used for all CSV output so
/// files are bit-reproducible.
std::string fmt_double(double v);

/// Write-to-temp then rename, so no partial file is ever observed.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

/// FNV-1a 64-bit content checksum, hex-encoded; recorded in run manifests.
std::string fnv1a64_hex(std::string_view content);

}  // namespace hv
