#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "mrseg/types.hpp"

namespace mrseg {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Min-max scale used when quantizing an image to 16-bit PGM.
struct ImageScale {
  double min = 0.0;
  double max = 0.0;
};

/// Writes a 16-bit PGM (min-max scaled) plus a raw little-endian float64
/// sidecar with the exact values ("<stem>.f64" next to the PGM). Returns
/// the scale used.
ImageScale write_image(const std::filesystem::path& pgm_path, const RealImage& img);

/// Reads an image written by write_image. Exact sidecar values are used
/// when present; otherwise the quantized PGM samples are inverted through
/// the scale recorded in the header comment.
RealImage read_image(const std::filesystem::path& pgm_path);

/// Hard labels as PGM, full-range scaled, with the class count recorded in
/// a header comment so reading is exact.
void write_segmentation(const std::filesystem::path& pgm_path, const HardSegmentation& seg);
HardSegmentation read_segmentation(const std::filesystem::path& pgm_path);

/// Sampling mask as a 0/65535 PGM.
void write_mask(const std::filesystem::path& pgm_path, const SamplingMask& mask);

/// Binary k-space container: magic "KSP1", u32 n1, u32 n2, u32 m,
/// f64 sigma, then m records of (u32 bin index, f64 re, f64 im), all
/// little-endian.
void write_kspace(const std::filesystem::path& path, const KSpaceData& data);
KSpaceData read_kspace(const std::filesystem::path& path);

/// Flat "key = value" config file. Lines starting with '#' and blank lines
/// are skipped; later keys override earlier ones.
std::map<std::string, std::string> parse_kv_file(const std::filesystem::path& path);

}  // namespace mrseg
