#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/matrix.hpp"

namespace flybot::neural {

using State = std::vector<int>;

/// Hebbian associative memory with symmetric, zero-diagonal weights.
///
/// The weights are (1/n) times an integer outer-product sum. Update signs are
/// taken from the integer sum so that a local field of exactly zero is
/// recognised exactly.
class HopfieldNet {
 public:
  std::size_t size() const noexcept { return n_; }
  const Matrix& weights() const noexcept { return weights_; }
  const std::vector<State>& patterns() const noexcept { return patterns_; }

  /// Integer-scaled local field n * (W s)_i.
  long scaled_field(std::span<const int> s, std::size_t i) const {
    long h = 0;
    for (std::size_t j = 0; j < n_; ++j) h += counts_[i * n_ + j] * s[j];
    return h;
  }

  friend HopfieldNet hopfield_train(std::span<const State> patterns, std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<long> counts_;
  Matrix weights_;
  std::vector<State> patterns_;
};

namespace detail {

inline void require_length(std::span<const int> v, std::size_t n) {
  if (v.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "vector length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
  }
}

inline void require_bipolar(std::span<const int> v) {
  for (int x : v) {
    if (x != 1 && x != -1) throw Error(ErrorCode::NonBipolarPattern, "entries must be +1 or -1");
  }
}

}  // namespace detail

/// W = (1/n) sum p p^T with the diagonal forced to zero.
inline HopfieldNet hopfield_train(std::span<const State> patterns, std::size_t n) {
  HopfieldNet net;
  net.n_ = n;
  net.counts_.assign(n * n, 0);
  for (const auto& p : patterns) {
    detail::require_length(p, n);
    detail::require_bipolar(p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) net.counts_[i * n + j] += p[i] * p[j];
    net.patterns_.push_back(p);
  }
  net.weights_ = Matrix(n, n);
  for (std::size_t i = 0; i < n * n; ++i) {
    net.weights_.data()[i] = static_cast<double>(net.counts_[i]) / static_cast<double>(n);
  }
  return net;
}

inline HopfieldNet hopfield_train(std::initializer_list<State> patterns, std::size_t n) {
  const std::vector<State> v(patterns);
  return hopfield_train(std::span<const State>(v), n);
}

/// The memory of the sidewalk classifier: [1,-1,1] and [-1,1,-1].
inline HopfieldNet two_vertex_net() { return hopfield_train({{1, -1, 1}, {-1, 1, -1}}, 3); }

/// One synchronous sweep s <- sign(W s); a zero field keeps the old entry.
inline State hopfield_sweep(const HopfieldNet& net, std::span<const int> s) {
  State next(s.begin(), s.end());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const long h = net.scaled_field(s, i);
    if (h > 0) next[i] = 1;
    else if (h < 0) next[i] = -1;
  }
  return next;
}

struct Recall {
  State state;
  int iterations = 0;  // sweeps run, including the one that confirmed the fixed point
};

/// Synchronous recall from a ternary input ({-1, 0, +1}). A stored vertex
/// reports one iteration. Throws NonConvergent on a cycle, on exhausting
/// `max_iter` sweeps, or when the fixed point still holds a 0.
inline Recall hopfield_recall(const HopfieldNet& net, std::span<const int> input, int max_iter = 10) {
  detail::require_length(input, net.size());
  for (int x : input) {
    if (x < -1 || x > 1) throw Error(ErrorCode::NonBipolarPattern, "entries must be -1, 0 or +1");
  }
  if (max_iter < 1) throw Error(ErrorCode::NonConvergent, "max_iter must be at least 1");
  State state(input.begin(), input.end());
  std::set<State> seen;
  for (int it = 1; it <= max_iter; ++it) {
    State next = hopfield_sweep(net, state);
    if (next == state) {
      for (int x : state) {
        if (x == 0) throw Error(ErrorCode::NonConvergent, "fixed point contains undecided neurons");
      }
      return {std::move(state), it};
    }
    seen.insert(state);
    if (seen.contains(next)) throw Error(ErrorCode::NonConvergent, "recall entered a cycle");
    state = std::move(next);
  }
  throw Error(ErrorCode::NonConvergent, "no fixed point within " + std::to_string(max_iter) + " sweeps");
}

/// E = -1/2 s^T W s.
inline double hopfield_energy(const HopfieldNet& net, std::span<const int> state) {
  detail::require_length(state, net.size());
  detail::require_bipolar(state);
  double e = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = 0; j < net.size(); ++j) e += state[i] * net.weights()(i, j) * state[j];
  return -0.5 * e;
}

}  // namespace flybot::neural
