#pragma once

// Binary file formats (both little-endian):
//
// Cube file:  magic "KBLM", version u32 = 1, kind u8 (0 = k-space, 1 = image),
//             3 padding bytes, n_p u32, n_f u32, n_fr u32, then
//             n_p*n_f*n_fr interleaved (re, im) float32 pairs, column-major
//             within each frame, frames consecutive.
// Mask file:  magic "KBLMMASK", version u32 = 1, n_p u32, n_fr u32, nu u32,
//             then n_p*n_fr bytes (0/1), phase line fastest. The mask format
//             carries no n_f; loaded masks match any data n_f.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kblm/cube.hpp"
#include "kblm/sampling.hpp"
#include "kblm/types.hpp"

namespace kblm {

enum class CubeKind : std::uint8_t { kspace = 0, image = 1 };

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "kblm file I/O assumes a little-endian host");

inline void put_u32(std::string& buf, std::uint32_t v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  buf.append(bytes, 4);
}

inline void put_f32(std::string& buf, float v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  buf.append(bytes, 4);
}

class Reader {
 public:
  Reader(const std::filesystem::path& path, std::string what) : what_(std::move(what)) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoError(what_ + ": cannot open '" + path.string() + "'");
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  void expect_magic(const char* magic, std::size_t len) {
    if (data_.size() < pos_ + len || std::memcmp(data_.data() + pos_, magic, len) != 0)
      throw BadMagicError(what_ + ": bad magic, expected '" + std::string(magic, len) + "'");
    pos_ += len;
  }

  std::uint32_t get_u32(const char* field) {
    require(4, field);
    std::uint32_t v;
    std::memcpy(&v, data_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }

  std::uint8_t get_u8(const char* field) {
    require(1, field);
    return std::uint8_t(data_[pos_++]);
  }

  float get_f32(const char* field) {
    require(4, field);
    float v;
    std::memcpy(&v, data_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  const char* cursor() const { return data_.data() + pos_; }
  void advance(std::size_t n) { pos_ += n; }

  void require(std::size_t n, const char* field) const {
    if (data_.size() < pos_ + n)
      throw TruncatedFileError(what_ + ": truncated payload while reading " +
                               std::string(field));
  }

  void expect_consumed() const {
    if (pos_ != data_.size())
      throw IoError(what_ + ": " + std::to_string(data_.size() - pos_) +
                    " unexpected trailing bytes");
  }

 private:
  std::string what_;
  std::vector<char> data_;
  std::size_t pos_ = 0;
};

inline void write_file(const std::filesystem::path& path, const std::string& buf,
                       const char* what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError(std::string(what) + ": cannot open '" + path.string() + "' for writing");
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out)
    throw IoError(std::string(what) + ": write failed for '" + path.string() + "'");
}

constexpr std::uint64_t kMaxCubeEntries = std::uint64_t(1) << 31;

}  // namespace detail

inline void write_cube(const std::filesystem::path& path, const ComplexCube& cube,
                       CubeKind kind) {
  std::string buf;
  buf.reserve(20 + std::size_t(cube.n_k()) * std::size_t(cube.n_fr()) * 8);
  buf.append("KBLM", 4);
  detail::put_u32(buf, 1);
  buf.push_back(char(kind));
  buf.append(3, '\0');
  detail::put_u32(buf, std::uint32_t(cube.n_p()));
  detail::put_u32(buf, std::uint32_t(cube.n_f()));
  detail::put_u32(buf, std::uint32_t(cube.n_fr()));
  const ComplexMatrix& m = cube.matrix();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      detail::put_f32(buf, float(m(i, j).real()));
      detail::put_f32(buf, float(m(i, j).imag()));
    }
  detail::write_file(path, buf, "write_cube");
}

struct LoadedCube {
  ComplexCube cube;
  CubeKind kind;
};

inline LoadedCube read_cube(const std::filesystem::path& path) {
  detail::Reader in(path, "read_cube");
  in.expect_magic("KBLM", 4);
  const std::uint32_t version = in.get_u32("version");
  if (version != 1)
    throw IoError("read_cube: unsupported version " + std::to_string(version));
  const std::uint8_t kind = in.get_u8("kind");
  if (kind > 1)
    throw IoError("read_cube: unknown cube kind " + std::to_string(kind));
  in.advance(3);
  const std::uint32_t n_p = in.get_u32("n_p");
  const std::uint32_t n_f = in.get_u32("n_f");
  const std::uint32_t n_fr = in.get_u32("n_fr");
  if (n_p == 0 || n_f == 0 || n_fr == 0)
    throw IoError("read_cube: zero dimension in header");
  const std::uint64_t entries = std::uint64_t(n_p) * n_f * n_fr;
  if (entries > detail::kMaxCubeEntries)
    throw DimensionOverflowError("read_cube: header declares " + std::to_string(entries) +
                                 " entries, above the supported maximum");
  in.require(std::size_t(entries) * 8, "payload");

  ComplexMatrix m(std::uint64_t(n_p) * n_f, n_fr);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const float re = in.get_f32("payload");
      const float im = in.get_f32("payload");
      m(i, j) = Complex(re, im);
    }
  in.expect_consumed();
  if (!all_finite(m))
    throw ValidationError("read_cube: payload contains non-finite entries");
  return LoadedCube{ComplexCube::from_matrix(Index(n_p), Index(n_f), std::move(m)),
                    CubeKind(kind)};
}

inline void write_mask(const std::filesystem::path& path, const SamplingMask& mask) {
  std::string buf;
  buf.append("KBLMMASK", 8);
  detail::put_u32(buf, 1);
  detail::put_u32(buf, std::uint32_t(mask.n_p));
  detail::put_u32(buf, std::uint32_t(mask.n_fr));
  detail::put_u32(buf, std::uint32_t(mask.nu));
  for (Index j = 0; j < mask.n_fr; ++j)
    for (Index r = 0; r < mask.n_p; ++r) buf.push_back(char(mask.lines(r, j)));
  detail::write_file(path, buf, "write_mask");
}

inline SamplingMask read_mask(const std::filesystem::path& path) {
  detail::Reader in(path, "read_mask");
  in.expect_magic("KBLMMASK", 8);
  const std::uint32_t version = in.get_u32("version");
  if (version != 1)
    throw IoError("read_mask: unsupported version " + std::to_string(version));
  const std::uint32_t n_p = in.get_u32("n_p");
  const std::uint32_t n_fr = in.get_u32("n_fr");
  const std::uint32_t nu = in.get_u32("nu");
  if (n_p == 0 || n_fr == 0)
    throw IoError("read_mask: zero dimension in header");
  if (nu > n_p)
    throw IoError("read_mask: nu exceeds n_p");
  const std::uint64_t entries = std::uint64_t(n_p) * n_fr;
  if (entries > detail::kMaxCubeEntries)
    throw DimensionOverflowError("read_mask: header declares " + std::to_string(entries) +
                                 " entries, above the supported maximum");
  in.require(entries, "payload");

  SamplingMask mask;
  mask.lines.resize(n_p, n_fr);
  mask.nu = nu;
  mask.n_p = n_p;
  mask.n_f = 0;  // unknown; matches any data n_f
  mask.n_fr = n_fr;
  for (Index j = 0; j < mask.n_fr; ++j)
    for (Index r = 0; r < mask.n_p; ++r) {
      const std::uint8_t b = in.get_u8("payload");
      if (b > 1)
        throw IoError("read_mask: mask byte must be 0 or 1, got " + std::to_string(b));
      mask.lines(r, j) = b;
    }
  in.expect_consumed();

  const Index nav0 = navigator_row_begin(mask.n_p, mask.nu);
  for (Index j = 0; j < mask.n_fr; ++j) {
    Index count = 0;
    for (Index r = 0; r < mask.n_p; ++r) count += mask.lines(r, j);
    if (count == 0)
      throw ValidationError("read_mask: frame " + std::to_string(j) + " has no lines");
    for (Index r = nav0; r < nav0 + mask.nu; ++r)
      if (!mask.lines(r, j))
        throw ValidationError("read_mask: navigator line " + std::to_string(r) +
                              " missing in frame " + std::to_string(j));
  }
  return mask;
}

}  // namespace kblm
