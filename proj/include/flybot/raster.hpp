#pragma once

// 8-bit rasters and the Netpbm (PGM/PPM) codec every vision pipeline reads from.

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "flybot/error.hpp"

namespace flybot::raster {

/// Row-major, channel-interleaved 8-bit image with 1 (gray) or 3 (RGB) channels.
class Image {
 public:
  Image() = default;

  Image(int width, int height, int channels, std::uint8_t fill = 0) {
    check_shape(width, height, channels);
    width_ = width;
    height_ = height;
    channels_ = channels;
    samples_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  Image(int width, int height, int channels, std::vector<std::uint8_t> samples) {
    check_shape(width, height, channels);
    if (samples.size() != static_cast<std::size_t>(width) * height * channels) {
      throw Error(ErrorCode::TruncatedData, "sample count does not match image shape");
    }
    width_ = width;
    height_ = height;
    channels_ = channels;
    samples_ = std::move(samples);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool operator==(const Image&) const = default;

 private:
  static void check_shape(int width, int height, int channels) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::NonPositiveDimensions,
                  std::to_string(width) + "x" + std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
      throw Error(ErrorCode::BadSample, "channels must be 1 or 3");
    }
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

using Histogram = std::array<std::uint64_t, 256>;

namespace detail {

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token; '#' comments run to end of line.
  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) throw Error(ErrorCode::TruncatedData, "unexpected end of header");
    return out;
  }

  long number() {
    const std::string tok = token();
    long value = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw Error(ErrorCode::TruncatedData, "bad integer '" + tok + "'");
      value = value * 10 + (ch - '0');
      if (value > (1L << 31)) throw Error(ErrorCode::TruncatedData, "integer too large");
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from binary samples.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::TruncatedData, "missing whitespace after header");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes P2/P3 (ASCII) and P5/P6 (binary) Netpbm data with maxval <= 255.
/// Samples are kept exactly as stored; no rescaling to 255 is applied.
inline Image parse_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::BadMagic, "not a PNM stream");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw Error(ErrorCode::BadMagic, std::string("unsupported magic P") + kind);
  }
  if (bytes.size() > 2 && !std::isspace(bytes[2]) && bytes[2] != '#') {
    throw Error(ErrorCode::BadMagic, "malformed magic");
  }
  const bool ascii = kind == '2' || kind == '3';
  const int channels = (kind == '2' || kind == '5') ? 1 : 3;

  detail::PnmReader reader(bytes.subspan(2));
  const long width = reader.number();
  const long height = reader.number();
  const long maxval = reader.number();
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::NonPositiveDimensions,
                std::to_string(width) + "x" + std::to_string(height));
  }
  if (maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::MaxvalUnsupported, "maxval " + std::to_string(maxval));
  }
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;

  std::vector<std::uint8_t> samples;
  samples.reserve(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = reader.number();
      if (v > maxval) throw Error(ErrorCode::BadSample, "sample exceeds maxval");
      samples.push_back(static_cast<std::uint8_t>(v));
    }
  } else {
    reader.single_whitespace();
    const auto data = reader.rest();
    if (data.size() < count) {
      throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(count) + " samples, got " +
                                                std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (data[i] > maxval) throw Error(ErrorCode::BadSample, "sample exceeds maxval");
      samples.push_back(data[i]);
    }
  }
  return Image(static_cast<int>(width), static_cast<int>(height), channels, std::move(samples));
}

/// Encodes with maxval 255: P5/P6 by default, P2/P3 when `ascii` is set.
inline std::vector<std::uint8_t> write_pnm(const Image& img, bool ascii = false) {
  const char kind = img.channels() == 1 ? (ascii ? '2' : '5') : (ascii ? '3' : '6');
  std::string header = std::string("P") + kind + "\n" + std::to_string(img.width()) + " " +
                       std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto samples = img.samples();
  if (!ascii) {
    out.insert(out.end(), samples.begin(), samples.end());
    return out;
  }
  const std::size_t per_row = static_cast<std::size_t>(img.width()) * img.channels();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string v = std::to_string(samples[i]);
    out.insert(out.end(), v.begin(), v.end());
    out.push_back((i + 1) % per_row == 0 ? '\n' : ' ');
  }
  return out;
}

inline Image read_pnm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_pnm(bytes);
}

/// BT.601 luma with round-half-up, in integer arithmetic so results are exact.
inline Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  Image gray(img.width(), img.height(), 1);
  const auto src = img.samples();
  auto dst = gray.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const unsigned r = src[3 * i];
    const unsigned g = src[3 * i + 1];
    const unsigned b = src[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return gray;
}

inline Histogram histogram(const Image& img) {
  if (img.channels() != 1) throw Error(ErrorCode::NotGrayscale, "histogram needs one channel");
  Histogram bins{};
  for (std::uint8_t v : img.samples()) ++bins[v];
  return bins;
}

}  // namespace flybot::raster
