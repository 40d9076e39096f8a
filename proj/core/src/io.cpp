#include "mrseg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mrseg {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void put_u16_be(std::string& out, uint16_t x) {
  out.push_back(static_cast<char>(x >> 8));
  out.push_back(static_cast<char>(x & 0xff));
}

void put_u32_le(std::string& out, uint32_t x) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
}

void put_f64_le(std::string& out, double x) {
  uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal P5 reader for files we write: magic, optional comments, dims,
// maxval, then binary samples.
struct PgmHeader {
  int width = 0, height = 0, maxval = 0;
  size_t data_offset = 0;
  std::vector<std::string> comments;
};

PgmHeader parse_pgm_header(const std::string& bytes, const std::filesystem::path& path) {
  PgmHeader h;
  size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        size_t end = bytes.find('\n', pos);
        if (end == std::string::npos) end = bytes.size();
        h.comments.push_back(bytes.substr(pos + 1, end - pos - 1));
        pos = end;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw IoError("pgm: truncated header at byte " + std::to_string(start) +
                                    " in " + path.string());
    return bytes.substr(start, pos - start);
  };
  if (next_token() != "P5") throw IoError("pgm: bad magic in " + path.string());
  h.width = std::stoi(next_token());
  h.height = std::stoi(next_token());
  h.maxval = std::stoi(next_token());
  if (pos >= bytes.size()) throw IoError("pgm: truncated after header in " + path.string());
  ++pos;  // single whitespace byte before binary data
  h.data_offset = pos;
  if (h.width < 1 || h.height < 1 || h.maxval != 65535)
    throw IoError("pgm: unsupported header in " + path.string());
  const size_t need = h.data_offset + 2ull * h.width * h.height;
  if (bytes.size() < need)
    throw IoError("pgm: truncated pixel data at byte " + std::to_string(bytes.size()) + " in " +
                  path.string());
  return h;
}

uint16_t sample_at(const std::string& bytes, size_t offset, size_t i) {
  const auto hi = static_cast<unsigned char>(bytes[offset + 2 * i]);
  const auto lo = static_cast<unsigned char>(bytes[offset + 2 * i + 1]);
  return static_cast<uint16_t>((hi << 8) | lo);
}

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path) {
  std::filesystem::path p = pgm_path;
  p.replace_extension(".f64");
  return p;
}

}  // namespace

ImageScale write_image(const std::filesystem::path& pgm_path, const RealImage& img) {
  const auto [mn_it, mx_it] = std::minmax_element(img.values.begin(), img.values.end());
  const ImageScale scale{*mn_it, *mx_it};
  const double range = scale.max - scale.min;

  std::string out;
  out += "P5\n";
  out += "# scale min=" + format_double(scale.min) + " max=" + format_double(scale.max) + "\n";
  out += std::to_string(img.grid.n2) + " " + std::to_string(img.grid.n1) + "\n65535\n";
  for (double x : img.values) {
    const double s = range > 0.0 ? (x - scale.min) / range : 0.0;
    put_u16_be(out, static_cast<uint16_t>(std::lround(s * 65535.0)));
  }
  write_file(pgm_path, out);

  std::string raw;
  raw.reserve(img.values.size() * 8);
  for (double x : img.values) put_f64_le(raw, x);
  write_file(sidecar_path(pgm_path), raw);
  return scale;
}

RealImage read_image(const std::filesystem::path& pgm_path) {
  const std::string bytes = read_file(pgm_path);
  const PgmHeader h = parse_pgm_header(bytes, pgm_path);
  RealImage img = RealImage::zeros(Grid{h.height, h.width});

  const std::filesystem::path raw_path = sidecar_path(pgm_path);
  if (std::filesystem::exists(raw_path)) {
    const std::string raw = read_file(raw_path);
    if (raw.size() != img.values.size() * 8)
      throw IoError("sidecar: expected " + std::to_string(img.values.size() * 8) + " bytes, got " +
                    std::to_string(raw.size()) + " in " + raw_path.string());
    for (size_t i = 0; i < img.values.size(); ++i) {
      uint64_t bits = 0;
      for (int b = 7; b >= 0; --b)
        bits = (bits << 8) | static_cast<unsigned char>(raw[8 * i + b]);
      double x;
      std::memcpy(&x, &bits, sizeof(x));
      img.values[i] = x;
    }
    return img;
  }

  // fall back to inverting the quantized samples through the header scale
  double mn = 0.0, mx = 0.0;
  bool have_scale = false;
  for (const std::string& c : h.comments) {
    if (std::sscanf(c.c_str(), " scale min=%lf max=%lf", &mn, &mx) == 2) have_scale = true;
  }
  if (!have_scale) throw IoError("pgm: missing scale comment in " + pgm_path.string());
  for (size_t i = 0; i < img.values.size(); ++i)
    img.values[i] = mn + (mx - mn) * (sample_at(bytes, h.data_offset, i) / 65535.0);
  return img;
}

void write_segmentation(const std::filesystem::path& pgm_path, const HardSegmentation& seg) {
  std::string out;
  out += "P5\n";
  out += "# labels " + std::to_string(seg.num_classes) + "\n";
  out += std::to_string(seg.grid.n2) + " " + std::to_string(seg.grid.n1) + "\n65535\n";
  const int denom = std::max(seg.num_classes - 1, 1);
  for (int lab : seg.labels)
    put_u16_be(out, static_cast<uint16_t>(static_cast<long>(lab) * 65535 / denom));
  write_file(pgm_path, out);
}

HardSegmentation read_segmentation(const std::filesystem::path& pgm_path) {
  const std::string bytes = read_file(pgm_path);
  const PgmHeader h = parse_pgm_header(bytes, pgm_path);
  int ell = 0;
  for (const std::string& c : h.comments) {
    int parsed = 0;
    if (std::sscanf(c.c_str(), " labels %d", &parsed) == 1) ell = parsed;
  }
  if (ell < 2) throw IoError("segmentation: missing labels comment in " + pgm_path.string());
  HardSegmentation seg{Grid{h.height, h.width}, ell, {}};
  seg.labels.resize(static_cast<size_t>(h.width) * h.height);
  const int denom = std::max(ell - 1, 1);
  for (size_t i = 0; i < seg.labels.size(); ++i) {
    const double lab = sample_at(bytes, h.data_offset, i) * static_cast<double>(denom) / 65535.0;
    seg.labels[i] = static_cast<int>(std::lround(lab));
  }
  return seg;
}

void write_mask(const std::filesystem::path& pgm_path, const SamplingMask& mask) {
  std::string out;
  out += "P5\n";
  out += std::to_string(mask.grid.n2) + " " + std::to_string(mask.grid.n1) + "\n65535\n";
  for (uint8_t s : mask.selected) put_u16_be(out, s ? 65535 : 0);
  write_file(pgm_path, out);
}

void write_kspace(const std::filesystem::path& path, const KSpaceData& data) {
  std::string out = "KSP1";
  put_u32_le(out, static_cast<uint32_t>(data.mask.grid.n1));
  put_u32_le(out, static_cast<uint32_t>(data.mask.grid.n2));
  put_u32_le(out, static_cast<uint32_t>(data.mask.m));
  put_f64_le(out, data.noise_sigma);
  const std::vector<int> bins = data.mask.selected_bins();
  for (size_t k = 0; k < bins.size(); ++k) {
    put_u32_le(out, static_cast<uint32_t>(bins[k]));
    put_f64_le(out, data.samples[k].real());
    put_f64_le(out, data.samples[k].imag());
  }
  write_file(path, out);
}

namespace {

struct ByteReader {
  const std::string& bytes;
  const std::filesystem::path& path;
  size_t pos = 0;

  void need(size_t count, const std::string& what) {
    if (pos + count > bytes.size())
      throw IoError("kspace: truncated " + what + " at byte " + std::to_string(bytes.size()) +
                    " (needed " + std::to_string(pos + count) + ") in " + path.string());
  }
  uint32_t u32(const std::string& what) {
    need(4, what);
    uint32_t x = 0;
    for (int b = 3; b >= 0; --b) x = (x << 8) | static_cast<unsigned char>(bytes[pos + b]);
    pos += 4;
    return x;
  }
  double f64(const std::string& what) {
    need(8, what);
    uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(bytes[pos + b]);
    pos += 8;
    double x;
    std::memcpy(&x, &bits, sizeof(x));
    return x;
  }
};

}  // namespace

KSpaceData read_kspace(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 4 || bytes.compare(0, 4, "KSP1") != 0)
    throw IoError("kspace: bad magic at byte 0 in " + path.string());
  ByteReader r{bytes, path, 4};
  const auto n1 = static_cast<int>(r.u32("n1"));
  const auto n2 = static_cast<int>(r.u32("n2"));
  const auto m = static_cast<int>(r.u32("m"));
  const double sigma = r.f64("sigma");
  if (n1 < 1 || n2 < 1 || m < 0 || m > n1 * n2)
    throw IoError("kspace: invalid dimensions in " + path.string());

  SamplingMask mask{Grid{n1, n2}, std::vector<uint8_t>(static_cast<size_t>(n1) * n2, 0), m};
  std::vector<Complex> samples(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const std::string what = "record " + std::to_string(k);
    const auto bin = static_cast<int>(r.u32(what));
    if (bin < 0 || bin >= n1 * n2)
      throw IoError("kspace: bin index out of range in record " + std::to_string(k) + " in " +
                    path.string());
    const double re = r.f64(what);
    const double im = r.f64(what);
    mask.selected[static_cast<size_t>(bin)] = 1;
    samples[static_cast<size_t>(k)] = Complex(re, im);
  }
  const long distinct = std::count(mask.selected.begin(), mask.selected.end(), uint8_t{1});
  if (distinct != m) throw IoError("kspace: duplicate bin indices in " + path.string());
  return KSpaceData{std::move(mask), std::move(samples), sigma};
}

std::map<std::string, std::string> parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: missing '=' on line " + std::to_string(lineno) + " of " +
                        path.string());
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key on line " + std::to_string(lineno) + " of " +
                        path.string());
    kv[key] = value;
  }
  return kv;
}

}  // namespace mrseg
