#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "flybot/error.hpp"
#include "flybot/matrix.hpp"
#include "flybot/neural/activation.hpp"

namespace flybot::neural {

/// Fully connected feed-forward network. weights[l] maps layer l to layer
/// l + 1 and has shape (layer_sizes[l + 1], layer_sizes[l]).
struct Mlp {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  std::vector<Activation> activations;  // one per non-input layer
  std::uint64_t seed = 0;

  std::size_t weight_layers() const noexcept { return weights.size(); }
  std::size_t inputs() const noexcept { return layer_sizes.front(); }
  std::size_t outputs() const noexcept { return layer_sizes.back(); }

  bool operator==(const Mlp&) const = default;
};

struct Sample {
  std::vector<double> input;
  std::vector<double> target;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

namespace detail {

// Uniform in [-0.5, 0.5] from the top 53 bits, identical on every standard library.
inline double centered_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
}

inline void check_topology(std::span<const std::size_t> sizes) {
  if (sizes.size() < 3) throw Error(ErrorCode::BadTopology, "need input, hidden and output layers");
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorCode::BadTopology, "layer of size 0");
  }
}

struct Trace {
  std::vector<std::vector<double>> pre;   // per non-input layer
  std::vector<std::vector<double>> post;  // per layer, post[0] is the input
};

inline Trace forward_trace(const Mlp& net, std::span<const double> x) {
  if (x.size() != net.inputs()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " values, expected " +
                                                  std::to_string(net.inputs()));
  }
  Trace t;
  t.post.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    const Matrix& w = net.weights[l];
    const auto& prev = t.post.back();
    std::vector<double> z(w.rows()), a(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
      double s = net.biases[l][i];
      const auto row = w.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * prev[j];
      z[i] = s;
      a[i] = activate(net.activations[l], s);
    }
    t.pre.push_back(std::move(z));
    t.post.push_back(std::move(a));
  }
  return t;
}

inline Gradients zero_gradients(const Mlp& net) {
  Gradients g;
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    g.weights.emplace_back(net.weights[l].rows(), net.weights[l].cols());
    g.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  return g;
}

// Accumulates scale * d(objective)/d(params) into `g`, given d(objective)/d(output).
inline void backprop(const Mlp& net, const Trace& t, std::vector<double> delta_out, double scale,
                     Gradients& g) {
  std::vector<double> delta = std::move(delta_out);
  for (std::size_t l = net.weight_layers(); l-- > 0;) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] *= activate_deriv(net.activations[l], t.pre[l][i]);
    }
    const Matrix& w = net.weights[l];
    const auto& prev = t.post[l];
    for (std::size_t i = 0; i < w.rows(); ++i) {
      g.biases[l][i] += scale * delta[i];
      auto grow = g.weights[l].row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) grow[j] += scale * delta[i] * prev[j];
    }
    if (l == 0) break;
    std::vector<double> next(w.cols(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const auto row = w.row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) next[j] += row[j] * delta[i];
    }
    delta = std::move(next);
  }
}

inline void check_target(const Mlp& net, std::span<const double> target) {
  if (target.size() != net.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "target has " + std::to_string(target.size()) +
                                                  " values, expected " +
                                                  std::to_string(net.outputs()));
  }
}

}  // namespace detail

/// Weights and biases drawn uniformly from [-0.5, 0.5]; identical per seed.
inline Mlp mlp_init(std::span<const std::size_t> layer_sizes, Activation activation,
                    std::uint64_t seed) {
  detail::check_topology(layer_sizes);
  if (activation.kind == ActivationKind::LeakyReLU) activation = Activation::leaky(activation.alpha);
  Mlp net;
  net.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  net.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    Matrix w(layer_sizes[l + 1], layer_sizes[l]);
    for (double& v : w.data()) v = detail::centered_unit(rng);
    std::vector<double> b(layer_sizes[l + 1]);
    for (double& v : b) v = detail::centered_unit(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
    net.activations.push_back(activation);
  }
  return net;
}

inline Mlp mlp_init(std::initializer_list<std::size_t> layer_sizes, Activation activation,
                    std::uint64_t seed) {
  return mlp_init(std::span<const std::size_t>(layer_sizes.begin(), layer_sizes.size()),
                  activation, seed);
}

/// Activations of every layer; element 0 is the input itself.
inline std::vector<std::vector<double>> mlp_forward(const Mlp& net, std::span<const double> x) {
  return detail::forward_trace(net, x).post;
}

/// Mean over the batch of the mean squared output error.
inline double mse_loss(const Mlp& net, std::span<const Sample> batch) {
  if (batch.empty()) throw Error(ErrorCode::EmptyDataset, "empty batch");
  double total = 0.0;
  for (const auto& s : batch) {
    detail::check_target(net, s.target);
    const auto out = detail::forward_trace(net, s.input).post.back();
    double e = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) e += (out[i] - s.target[i]) * (out[i] - s.target[i]);
    total += e / static_cast<double>(out.size());
  }
  return total / static_cast<double>(batch.size());
}

/// Gradient of mse_loss with respect to every weight and bias.
inline Gradients mse_gradients(const Mlp& net, std::span<const Sample> batch) {
  if (batch.empty()) throw Error(ErrorCode::EmptyDataset, "empty batch");
  Gradients g = detail::zero_gradients(net);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& s : batch) {
    detail::check_target(net, s.target);
    const auto trace = detail::forward_trace(net, s.input);
    const auto& out = trace.post.back();
    std::vector<double> delta(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      delta[i] = 2.0 * (out[i] - s.target[i]) / static_cast<double>(out.size());
    }
    detail::backprop(net, trace, std::move(delta), scale, g);
  }
  return g;
}

/// One full-batch gradient-descent step. Returns the loss before the update.
inline double mlp_train_step(Mlp& net, std::span<const Sample> batch, double learning_rate) {
  if (!(learning_rate >= 0.0)) throw Error(ErrorCode::BadLearningRate, "learning rate < 0");
  const double loss = mse_loss(net, batch);
  const Gradients g = mse_gradients(net, batch);
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    auto& w = net.weights[l].data();
    const auto& gw = g.weights[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
    for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
      net.biases[l][i] -= learning_rate * g.biases[l][i];
    }
  }
  return loss;
}

inline constexpr double kKinkMargin = 1e-3;

namespace detail {

// Finite differences subtract two nearly equal losses; in double precision
// that cancellation swamps gradients below about 1e-7, so the reference
// losses are evaluated in quad precision.
using Quad = boost::multiprecision::cpp_bin_float_quad;

inline Quad activate_quad(const Activation& a, const Quad& z) {
  switch (a.kind) {
    case ActivationKind::Sigmoid: return 1 / (1 + exp(-z));
    case ActivationKind::ReLU: return z > 0 ? z : Quad(0);
    case ActivationKind::LeakyReLU: return z >= 0 ? z : Quad(a.alpha) * z;
  }
  return z;
}

// Squared-error loss of one sample with a single parameter of `layer` moved
// by `shift`. Parameters are indexed weights first (row-major), then biases.
inline Quad shifted_loss(const Mlp& net, std::span<const double> x, std::span<const double> target,
                         std::size_t layer, std::size_t index, const Quad& shift) {
  std::vector<Quad> prev(x.begin(), x.end());
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    const Matrix& w = net.weights[l];
    std::vector<Quad> next(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
      Quad z = net.biases[l][i];
      if (l == layer && index == w.data().size() + i) z += shift;
      for (std::size_t j = 0; j < w.cols(); ++j) {
        Quad wij = w(i, j);
        if (l == layer && index == i * w.cols() + j) wij += shift;
        z += wij * prev[j];
      }
      next[i] = activate_quad(net.activations[l], z);
    }
    prev = std::move(next);
  }
  Quad e = 0;
  for (std::size_t i = 0; i < prev.size(); ++i) e += (prev[i] - target[i]) * (prev[i] - target[i]);
  return e / prev.size();
}

}  // namespace detail


/// Largest relative disagreement between backprop and central finite
/// differences over all weights and biases, for the squared error on one
/// (x, target) pair. Relative error is |a - n| / max(|a|, |n|, 1e-8).
/// Throws NearKink if a ReLU-family pre-activation is within 1e-3 of zero.
inline double gradient_check(const Mlp& net, std::span<const double> x,
                             std::span<const double> target, double epsilon = 1e-5) {
  if (!(epsilon > 0.0 && epsilon <= 1e-2)) throw Error(ErrorCode::BadEpsilon, "epsilon outside (0, 1e-2]");
  detail::check_target(net, target);
  const auto trace = detail::forward_trace(net, x);
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    if (!net.activations[l].has_kink()) continue;
    for (double z : trace.pre[l]) {
      if (std::abs(z) < kKinkMargin) {
        throw Error(ErrorCode::NearKink, "pre-activation within 1e-3 of a kink");
      }
    }
  }
  const Sample sample{{x.begin(), x.end()}, {target.begin(), target.end()}};
  const Gradients analytic = mse_gradients(net, std::span<const Sample>(&sample, 1));

  const detail::Quad eps(epsilon);
  double worst = 0.0;
  auto compare = [&](std::size_t layer, std::size_t index, double a) {
    const detail::Quad up = detail::shifted_loss(net, x, target, layer, index, eps);
    const detail::Quad down = detail::shifted_loss(net, x, target, layer, index, -eps);
    const double numeric = static_cast<double>((up - down) / (2 * eps));
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  };
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    const auto& w = analytic.weights[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) compare(l, i, w[i]);
    for (std::size_t i = 0; i < analytic.biases[l].size(); ++i) compare(l, w.size() + i, analytic.biases[l][i]);
  }
  return worst;
}

struct DeadNeuron {
  std::size_t layer = 0;  // 1-based, counting the input layer as 0
  std::size_t neuron = 0;
  bool operator==(const DeadNeuron&) const = default;
};

struct GradientReport {
  /// Mean |d objective / d w| of each weight layer, input side first.
  std::vector<double> mean_abs_grad;
  /// Per non-input layer, one flag per neuron.
  std::vector<std::vector<bool>> dead;

  std::vector<DeadNeuron> dead_neurons() const {
    std::vector<DeadNeuron> out;
    for (std::size_t l = 0; l < dead.size(); ++l)
      for (std::size_t i = 0; i < dead[l].size(); ++i)
        if (dead[l][i]) out.push_back({l + 1, i});
    return out;
  }
};

/// Training-pathology probe over a set of inputs.
///
/// A neuron is dead when its activation is ReLU and its pre-activation is
/// negative for every input. Gradient magnitudes are measured for the sum of
/// the network outputs (no targets needed), averaged over the dataset.
inline GradientReport diagnose(const Mlp& net, std::span<const std::vector<double>> inputs) {
  if (inputs.empty()) throw Error(ErrorCode::EmptyDataset, "no inputs to diagnose");
  GradientReport report;
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    report.dead.emplace_back(net.layer_sizes[l + 1], net.activations[l].kind == ActivationKind::ReLU);
  }
  Gradients g = detail::zero_gradients(net);
  const double scale = 1.0 / static_cast<double>(inputs.size());
  for (const auto& x : inputs) {
    const auto trace = detail::forward_trace(net, x);
    for (std::size_t l = 0; l < net.weight_layers(); ++l) {
      for (std::size_t i = 0; i < trace.pre[l].size(); ++i) {
        if (trace.pre[l][i] >= 0.0) report.dead[l][i] = false;
      }
    }
    detail::backprop(net, trace, std::vector<double>(net.outputs(), 1.0), scale, g);
  }
  for (const auto& gw : g.weights) {
    double s = 0.0;
    for (double v : gw.data()) s += std::abs(v);
    report.mean_abs_grad.push_back(s / static_cast<double>(gw.data().size()));
  }
  return report;
}

inline std::string to_csv(const GradientReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "layer,mean_abs_grad\n";
  for (std::size_t l = 0; l < report.mean_abs_grad.size(); ++l) {
    out << l + 1 << ',' << report.mean_abs_grad[l] << '\n';
  }
  return out.str();
}

inline std::string dead_neurons_csv(const GradientReport& report) {
  std::ostringstream out;
  out << "layer,neuron\n";
  for (const auto& d : report.dead_neurons()) out << d.layer << ',' << d.neuron << '\n';
  return out.str();
}

}  // namespace flybot::neural
