#include <gtest/gtest.h>

#include <random>

#include "flybot/neural/hopfield.hpp"
#include "oracles.hpp"

using flybot::Error;
using flybot::ErrorCode;
using namespace flybot::neural;

namespace {

std::vector<std::array<int, 3>> all_ternary() {
  std::vector<std::array<int, 3>> out;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) out.push_back({a, b, c});
  return out;
}

}  // namespace

TEST(Hopfield, HebbianWeightsOfTwoVertexMemory) {
  const HopfieldNet net = two_vertex_net();
  const auto& w = net.weights();
  EXPECT_DOUBLE_EQ(w(0, 1), -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(w(0, 2), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(w(1, 2), -2.0 / 3.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(w(i, i), 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(w(i, j), w(j, i));
  }
}

TEST(Hopfield, SinglePatternWeights) {
  const HopfieldNet net = hopfield_train({{1, 1}}, 2);
  EXPECT_DOUBLE_EQ(net.weights()(0, 1), 0.5);
  EXPECT_EQ(net.weights()(0, 0), 0.0);
}

TEST(Hopfield, TrainingValidatesPatterns) {
  try {
    hopfield_train({{1, 0, 1}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonBipolarPattern);
  }
  try {
    hopfield_train({{1, -1}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(Hopfield, StoredVerticesAreFixedAfterOneSweep) {
  const HopfieldNet net = two_vertex_net();
  for (const State& v : {State{1, -1, 1}, State{-1, 1, -1}}) {
    EXPECT_EQ(hopfield_sweep(net, v), v);
    const Recall r = hopfield_recall(net, v);
    EXPECT_EQ(r.state, v);
    EXPECT_EQ(r.iterations, 1);
  }
}

TEST(Hopfield, RecallExamples) {
  const HopfieldNet net = two_vertex_net();
  EXPECT_EQ(hopfield_recall(net, State{1, 0, 1}).state, (State{1, -1, 1}));
  EXPECT_EQ(hopfield_recall(net, State{0, 1, -1}).state, (State{-1, 1, -1}));
  EXPECT_THROW(hopfield_recall(net, State{0, 0, 0}), Error);
  EXPECT_THROW(hopfield_recall(net, State{2, 0, 0}), Error);
  EXPECT_THROW(hopfield_recall(net, State{1, 1}), Error);
}

TEST(Hopfield, AllTernaryInputsMatchIntegerEnumeration) {
  const HopfieldNet net = two_vertex_net();
  for (const auto& in : all_ternary()) {
    const auto truth = oracle::two_vertex_recall(in, 10);
    const State input(in.begin(), in.end());
    if (truth.outcome == oracle::RecallOutcome::Converged) {
      const Recall r = hopfield_recall(net, input);
      EXPECT_EQ(r.state, State(truth.state.begin(), truth.state.end()));
      EXPECT_EQ(r.iterations, truth.sweeps);
      EXPECT_LE(r.iterations, 3);
    } else {
      try {
        hopfield_recall(net, input);
        ADD_FAILURE() << "expected NonConvergent for " << in[0] << in[1] << in[2];
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonConvergent);
      }
    }
  }
}

TEST(Hopfield, RecallCommutesWithSignFlip) {
  const HopfieldNet net = two_vertex_net();
  for (const auto& in : all_ternary()) {
    const State s(in.begin(), in.end());
    State neg = s;
    for (int& v : neg) v = -v;
    bool ok_s = true, ok_n = true;
    Recall a, b;
    try { a = hopfield_recall(net, s); } catch (const Error&) { ok_s = false; }
    try { b = hopfield_recall(net, neg); } catch (const Error&) { ok_n = false; }
    ASSERT_EQ(ok_s, ok_n);
    if (ok_s) {
      for (int& v : b.state) v = -v;
      EXPECT_EQ(a.state, b.state);
    }
  }
}

TEST(Hopfield, VerticesAreUniqueEnergyMinima) {
  const HopfieldNet net = two_vertex_net();
  double best = 1e300;
  std::vector<State> minima;
  for (int m = 0; m < 8; ++m) {
    const State s{m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1};
    const double e = hopfield_energy(net, s);
    // Brute-force energy by the double sum.
    double brute = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) brute += net.weights()(i, j) * s[i] * s[j];
    EXPECT_NEAR(e, -0.5 * brute, 1e-15);
    if (e < best - 1e-12) {
      best = e;
      minima = {s};
    } else if (std::abs(e - best) <= 1e-12) {
      minima.push_back(s);
    }
  }
  ASSERT_EQ(minima.size(), 2u);
  EXPECT_NE(std::find(minima.begin(), minima.end(), State{1, -1, 1}), minima.end());
  EXPECT_NE(std::find(minima.begin(), minima.end(), State{-1, 1, -1}), minima.end());
}

TEST(Hopfield, BipolarFixedPointsAreLocalEnergyMinima) {
  const HopfieldNet net = two_vertex_net();
  for (int m = 0; m < 8; ++m) {
    const State s{m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1};
    if (hopfield_sweep(net, s) != s) continue;
    for (int i = 0; i < 3; ++i) {
      State n = s;
      n[i] = -n[i];
      EXPECT_LE(hopfield_energy(net, s), hopfield_energy(net, n));
    }
  }
}

TEST(Hopfield, EnergyIsSignSymmetricAndZeroWithoutPatterns) {
  const HopfieldNet net = two_vertex_net();
  EXPECT_DOUBLE_EQ(hopfield_energy(net, State{1, -1, 1}), hopfield_energy(net, State{-1, 1, -1}));
  const HopfieldNet empty = hopfield_train(std::span<const State>{}, 3);
  EXPECT_EQ(hopfield_energy(empty, State{1, 1, -1}), 0.0);
  EXPECT_THROW(hopfield_energy(net, State{1, 0, 1}), Error);
}

TEST(Hopfield, RandomPatternsAreFixedPointsWhenSparse) {
  std::mt19937_64 rng(99);
  const std::size_t n = 64;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + trial % 4;  // n >= 16 p
    std::vector<State> patterns(p, State(n));
    for (auto& pat : patterns)
      for (int& v : pat) v = rng() & 1 ? 1 : -1;
    const HopfieldNet net = hopfield_train(patterns, n);
    for (const auto& pat : patterns) EXPECT_EQ(hopfield_sweep(net, pat), pat);
  }
}

TEST(Hopfield, EnergyNeverIncreasesAlongBipolarTrajectory) {
  std::mt19937_64 rng(5);
  const std::size_t n = 32;
  std::vector<State> patterns(3, State(n));
  for (auto& pat : patterns)
    for (int& v : pat) v = rng() & 1 ? 1 : -1;
  const HopfieldNet net = hopfield_train(patterns, n);
  // Single-neuron (asynchronous) updates are the textbook monotone case.
  for (int trial = 0; trial < 20; ++trial) {
    State s(n);
    for (int& v : s) v = rng() & 1 ? 1 : -1;
    double e = hopfield_energy(net, s);
    for (int step = 0; step < 200; ++step) {
      const std::size_t i = rng() % n;
      const long h = net.scaled_field(s, i);
      if (h != 0) s[i] = h > 0 ? 1 : -1;
      const double e2 = hopfield_energy(net, s);
      EXPECT_LE(e2, e + 1e-12);
      e = e2;
    }
  }
}
