#include <gtest/gtest.h>

#include <random>
#include <string>

#include "flybot/raster.hpp"

using flybot::Error;
using flybot::ErrorCode;
using namespace flybot::raster;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

ErrorCode code_of(const std::string& s) {
  try {
    parse_pnm(bytes(s));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << s;
  return ErrorCode::BadDocument;
}

Image random_image(std::mt19937_64& rng, int channels) {
  const int w = 1 + static_cast<int>(rng() % 17);
  const int h = 1 + static_cast<int>(rng() % 13);
  Image img(w, h, channels);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(rng());
  return img;
}

}  // namespace

TEST(Pnm, ParsesAsciiGrayWithComments) {
  const Image img = parse_pnm(bytes("P2\n# made by hand\n3 2 # trailing\n255\n0 1 2\n3 4 255\n"));
  EXPECT_EQ(img.width(), 3);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.channels(), 1);
  EXPECT_EQ(img.at(2, 1), 255);
  EXPECT_EQ(img.at(1, 0), 1);
}

TEST(Pnm, ParsesBinaryRgb) {
  std::string s = "P6 2 1 255\n";
  s += std::string{'\x0a', '\x14', '\x1e', '\xff', '\x00', '\x80'};
  const Image img = parse_pnm(bytes(s));
  EXPECT_EQ(img.channels(), 3);
  EXPECT_EQ(img.at(0, 0, 2), 30);
  EXPECT_EQ(img.at(1, 0, 0), 255);
  EXPECT_EQ(img.at(1, 0, 2), 128);
}

TEST(Pnm, KeepsSamplesBelowMaxvalUnscaled) {
  const Image img = parse_pnm(bytes("P2 2 1 15 15 7"));
  EXPECT_EQ(img.at(0, 0), 15);
  EXPECT_EQ(img.at(1, 0), 7);
}

TEST(Pnm, RejectsMalformedInput) {
  EXPECT_EQ(code_of("P7 1 1 255\n"), ErrorCode::BadMagic);
  EXPECT_EQ(code_of("GIF89a"), ErrorCode::BadMagic);
  EXPECT_EQ(code_of(""), ErrorCode::BadMagic);
  EXPECT_EQ(code_of("P5 4 4 255\n\x01\x02"), ErrorCode::TruncatedData);
  EXPECT_EQ(code_of("P2 2 2 255 1 2 3"), ErrorCode::TruncatedData);
  EXPECT_EQ(code_of("P2 2 2"), ErrorCode::TruncatedData);
  EXPECT_EQ(code_of("P5 1 1 65535\n\x00\x00"), ErrorCode::MaxvalUnsupported);
  EXPECT_EQ(code_of("P5 1 1 0\n\x00"), ErrorCode::MaxvalUnsupported);
  EXPECT_EQ(code_of("P2 0 3 255\n"), ErrorCode::NonPositiveDimensions);
  EXPECT_EQ(code_of("P2 1 1 100 101"), ErrorCode::BadSample);
}

TEST(Pnm, RoundTripsRandomImagesInBothEncodings) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const Image img = random_image(rng, i % 2 ? 3 : 1);
    EXPECT_EQ(parse_pnm(write_pnm(img)), img);
    EXPECT_EQ(parse_pnm(write_pnm(img, true)), img);
  }
}

TEST(Pnm, ReadFileReportsMissingPath) {
  EXPECT_THROW(read_pnm_file("/nonexistent/definitely/missing.pgm"), Error);
}

TEST(Grayscale, UsesRoundedBt601Luma) {
  Image rgb(4, 1, 3);
  rgb.at(0, 0, 0) = 255;  // pure red
  rgb.at(1, 0, 1) = 255;  // pure green
  rgb.at(2, 0, 2) = 255;  // pure blue
  for (int c = 0; c < 3; ++c) rgb.at(3, 0, c) = 200;
  const Image g = to_grayscale(rgb);
  EXPECT_EQ(g.at(0, 0), 76);
  EXPECT_EQ(g.at(1, 0), 150);
  EXPECT_EQ(g.at(2, 0), 29);
  EXPECT_EQ(g.at(3, 0), 200);
}

TEST(Grayscale, IsIdempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Image g = to_grayscale(random_image(rng, 3));
    EXPECT_EQ(to_grayscale(g), g);
  }
}

TEST(Histogram, MassEqualsPixelCount) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const Image g = random_image(rng, 1);
    std::uint64_t mass = 0;
    for (auto c : histogram(g)) mass += c;
    EXPECT_EQ(mass, g.pixel_count());
  }
}

TEST(Histogram, RejectsColorImages) {
  try {
    histogram(Image(2, 2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGrayscale);
  }
}
