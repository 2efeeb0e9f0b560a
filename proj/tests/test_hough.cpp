#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flybot/vision/hough.hpp"
#include "oracles.hpp"

using namespace flybot::raster;
using namespace flybot::vision;

TEST(HoughLines, VerticalColumn) {
  Image img(11, 11, 1);
  for (int y = 0; y < 11; ++y) img.at(5, y) = 255;
  const auto hits = hough_lines(img, 1.0, 10);
  ASSERT_FALSE(hits.empty());
  EXPECT_EQ(hits[0].rho, 5);
  EXPECT_DOUBLE_EQ(hits[0].theta, 0.0);
  EXPECT_EQ(hits[0].votes, 11);
}

TEST(HoughLines, HorizontalRow) {
  Image img(11, 11, 1);
  for (int x = 0; x < 11; ++x) img.at(x, 3) = 255;
  const auto hits = hough_lines(img, 1.0, 10);
  ASSERT_FALSE(hits.empty());
  EXPECT_EQ(hits[0].rho, 3);
  EXPECT_DOUBLE_EQ(hits[0].theta, 90.0);
  EXPECT_EQ(hits[0].votes, 11);
}

TEST(HoughLines, VotesMatchCellwiseEnumeration) {
  std::mt19937_64 rng(8);
  Image img(15, 12, 1);
  for (int i = 0; i < 25; ++i) img.at(static_cast<int>(rng() % 15), static_cast<int>(rng() % 12)) = 255;
  for (int y = 0; y < 12; ++y) img.at(y, y) = 255;  // a diagonal
  const auto hits = hough_lines(img, 3.0, 1);
  ASSERT_FALSE(hits.empty());
  int total = 0;
  for (const auto& h : hits) {
    EXPECT_EQ(h.votes, oracle::line_cell_votes(img, h.rho, h.theta));
    total += h.votes;
  }
  int edges = 0;
  for (auto s : img.samples()) edges += s != 0;
  EXPECT_EQ(total, edges * 60);  // every edge votes once per theta bin
  for (std::size_t i = 1; i < hits.size(); ++i) EXPECT_GE(hits[i - 1].votes, hits[i].votes);
}

TEST(HoughLines, TranslationShiftsRho) {
  for (int dx = 0; dx < 5; ++dx) {
    Image img(20, 9, 1);
    for (int y = 0; y < 9; ++y) img.at(4 + dx, y) = 255;
    const auto hits = hough_lines(img, 1.0, 9);
    ASSERT_FALSE(hits.empty());
    EXPECT_EQ(hits[0].rho, 4 + dx);
    EXPECT_DOUBLE_EQ(hits[0].theta, 0.0);
  }
}

TEST(HoughLines, EmptyImageHasNoHits) {
  EXPECT_TRUE(hough_lines(Image(10, 10, 1), 1.0, 1).empty());
}

TEST(HoughLines, RejectsBadThetaStep) {
  EXPECT_THROW(hough_lines(Image(4, 4, 1), 0.0, 1), flybot::Error);
  EXPECT_THROW(hough_lines(Image(4, 4, 1), 7.0, 1), flybot::Error);  // does not divide 180
}

TEST(HoughCircles, RecoversRasterizedCircle) {
  Image img(21, 21, 1);
  oracle::draw_circle(img, 10, 10, 5);
  const auto hits = hough_circles(img, 3, 8, 20);
  ASSERT_FALSE(hits.empty());
  EXPECT_LE(std::abs(hits[0].cx - 10), 1);
  EXPECT_LE(std::abs(hits[0].cy - 10), 1);
  EXPECT_LE(std::abs(hits[0].radius - 5), 1);
}

TEST(HoughCircles, RecoversTwoCircles) {
  Image img(60, 30, 1);
  oracle::draw_circle(img, 14, 15, 8);
  oracle::draw_circle(img, 44, 14, 6);
  const auto hits = hough_circles(img, 4, 10, 25);
  ASSERT_GE(hits.size(), 2u);
  bool big = false, small = false;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& h = hits[i];
    big = big || (std::abs(h.cx - 14) <= 1 && std::abs(h.cy - 15) <= 1 && std::abs(h.radius - 8) <= 1);
    small = small || (std::abs(h.cx - 44) <= 1 && std::abs(h.cy - 14) <= 1 && std::abs(h.radius - 6) <= 1);
  }
  EXPECT_TRUE(big);
  EXPECT_TRUE(small);
}

TEST(HoughCircles, RejectsBadRadiusRange) {
  EXPECT_THROW(hough_circles(Image(4, 4, 1), 0, 3, 1), flybot::Error);
  EXPECT_THROW(hough_circles(Image(4, 4, 1), 5, 3, 1), flybot::Error);
}

TEST(HoughCsv, Headers) {
  EXPECT_EQ(to_csv(std::vector<LineHit>{}), "rho,theta,votes\n");
  EXPECT_EQ(to_csv(std::vector<CircleHit>{}), "cx,cy,r,votes\n");
}
