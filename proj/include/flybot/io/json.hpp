#pragma once

// JSON documents for the persistent types. Each document carries a
// "format" tag and an integer "version"; readers reject anything else.

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flybot/error.hpp"
#include "flybot/flight/hover.hpp"
#include "flybot/fuzzy/engine.hpp"
#include "flybot/neural/hopfield.hpp"
#include "flybot/neural/mlp.hpp"
#include "flybot/sidewalk/generator.hpp"
#include "flybot/sidewalk/pipeline.hpp"

namespace flybot::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline void expect_format(const json& doc, const char* format) {
  if (!doc.is_object() || doc.value("format", std::string{}) != format) {
    throw Error(ErrorCode::BadDocument, std::string("expected a '") + format + "' document");
  }
  if (doc.value("version", 0) != kFormatVersion) {
    throw Error(ErrorCode::BadDocument, std::string("unsupported '") + format + "' version");
  }
}

// Wraps nlohmann type errors so callers only ever see flybot::Error.
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadDocument, e.what());
  }
}

}  // namespace detail

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadDocument, e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json(text);
}

// ---- fuzzy -----------------------------------------------------------------

inline json to_json(const fuzzy::FuzzyVariable& v) {
  json sets = json::array();
  for (const auto& s : v.sets) {
    const auto& f = s.fn;
    json points = f.is_triangle() ? json{f.a, f.b, f.d} : json{f.a, f.b, f.c, f.d};
    sets.push_back({{"label", s.label}, {"points", points}});
  }
  return {{"name", v.name}, {"min", v.min}, {"max", v.max}, {"unit", v.unit}, {"sets", sets}};
}

inline fuzzy::FuzzyVariable variable_from_json(const json& j) {
  return detail::guarded([&] {
    fuzzy::FuzzyVariable v{j.at("name").get<std::string>(), j.at("min").get<double>(),
                           j.at("max").get<double>(), j.value("unit", std::string{}), {}};
    for (const auto& s : j.at("sets")) {
      const auto pts = s.at("points").get<std::vector<double>>();
      fuzzy::MembershipFunction fn;
      if (pts.size() == 3) fn = fuzzy::MembershipFunction::triangular(pts[0], pts[1], pts[2]);
      else if (pts.size() == 4) fn = fuzzy::MembershipFunction::trapezoidal(pts[0], pts[1], pts[2], pts[3]);
      else throw Error(ErrorCode::BadMembership, "membership needs 3 or 4 points");
      v.sets.push_back({s.at("label").get<std::string>(), fn});
    }
    return v;
  });
}

inline json to_json(const fuzzy::FuzzySystem& sys) {
  json inputs = json::array(), outputs = json::array(), rules = json::array();
  for (const auto& v : sys.inputs()) inputs.push_back(to_json(v));
  for (const auto& v : sys.outputs()) outputs.push_back(to_json(v));
  for (const auto& r : sys.rules()) {
    json when = json::array();
    for (const auto& t : r.antecedents) when.push_back({t.variable, t.label});
    rules.push_back({{"if", when}, {"then", {r.consequent.variable, r.consequent.label}}});
  }
  return {{"format", "flybot.fuzzy"}, {"version", kFormatVersion}, {"samples", sys.samples()},
          {"inputs", inputs},          {"outputs", outputs},        {"rules", rules}};
}

inline fuzzy::FuzzySystem fuzzy_system_from_json(const json& doc) {
  detail::expect_format(doc, "flybot.fuzzy");
  return detail::guarded([&] {
    std::vector<fuzzy::FuzzyVariable> inputs, outputs;
    for (const auto& v : doc.at("inputs")) inputs.push_back(variable_from_json(v));
    for (const auto& v : doc.at("outputs")) outputs.push_back(variable_from_json(v));
    std::vector<fuzzy::Rule> rules;
    for (const auto& r : doc.at("rules")) {
      fuzzy::Rule rule;
      for (const auto& t : r.at("if")) {
        rule.antecedents.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>()});
      }
      rule.consequent = {r.at("then").at(0).get<std::string>(), r.at("then").at(1).get<std::string>()};
      rules.push_back(std::move(rule));
    }
    return fuzzy::FuzzySystem(std::move(inputs), std::move(outputs), std::move(rules),
                              doc.value("samples", fuzzy::kDefaultSamples));
  });
}

// ---- neural ----------------------------------------------------------------

inline json to_json(const neural::Mlp& net) {
  json weights = json::array(), biases = json::array(), acts = json::array();
  for (const auto& w : net.weights) weights.push_back(w.data());
  for (const auto& b : net.biases) biases.push_back(b);
  for (const auto& a : net.activations) {
    acts.push_back({{"kind", neural::to_string(a.kind)}, {"alpha", a.alpha}});
  }
  return {{"format", "flybot.mlp"}, {"version", kFormatVersion}, {"layer_sizes", net.layer_sizes},
          {"activations", acts},    {"seed", net.seed},            {"weights", weights},
          {"biases", biases}};
}

inline neural::Mlp mlp_from_json(const json& doc) {
  detail::expect_format(doc, "flybot.mlp");
  return detail::guarded([&] {
    neural::Mlp net;
    net.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    neural::detail::check_topology(net.layer_sizes);
    net.seed = doc.at("seed").get<std::uint64_t>();
    const auto& acts = doc.at("activations");
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    const std::size_t layers = net.layer_sizes.size() - 1;
    if (acts.size() != layers || weights.size() != layers || biases.size() != layers) {
      throw Error(ErrorCode::BadDocument, "per-layer arrays do not match layer_sizes");
    }
    for (std::size_t l = 0; l < layers; ++l) {
      const auto kind = neural::parse_activation_kind(acts[l].at("kind").get<std::string>());
      const double alpha = acts[l].value("alpha", neural::kDefaultLeakySlope);
      net.activations.push_back(kind == neural::ActivationKind::LeakyReLU
                                    ? neural::Activation::leaky(alpha)
                                    : neural::Activation{kind, alpha});
      Matrix w(net.layer_sizes[l + 1], net.layer_sizes[l]);
      const auto values = weights[l].get<std::vector<double>>();
      const auto bias = biases[l].get<std::vector<double>>();
      if (values.size() != w.data().size() || bias.size() != w.rows()) {
        throw Error(ErrorCode::BadDocument, "weight shape mismatch in layer " + std::to_string(l));
      }
      w.data() = values;
      net.weights.push_back(std::move(w));
      net.biases.push_back(bias);
    }
    return net;
  });
}

inline json to_json(const neural::HopfieldNet& net) {
  return {{"format", "flybot.hopfield"}, {"version", kFormatVersion}, {"n", net.size()},
          {"weights", net.weights().data()}, {"patterns", net.patterns()}};
}

/// Rebuilds the net from its stored patterns and checks the weights agree.
inline neural::HopfieldNet hopfield_from_json(const json& doc) {
  detail::expect_format(doc, "flybot.hopfield");
  return detail::guarded([&] {
    const auto n = doc.at("n").get<std::size_t>();
    const auto patterns = doc.at("patterns").get<std::vector<neural::State>>();
    auto net = neural::hopfield_train(patterns, n);
    const auto weights = doc.at("weights").get<std::vector<double>>();
    if (weights.size() != n * n) throw Error(ErrorCode::BadDocument, "weight count != n*n");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (std::abs(weights[i] - net.weights().data()[i]) > 1e-12) {
        throw Error(ErrorCode::BadDocument, "weights inconsistent with stored patterns");
      }
    }
    return net;
  });
}

inline json to_json(const neural::GradientReport& report) {
  json layers = json::array(), dead = json::array();
  for (std::size_t l = 0; l < report.mean_abs_grad.size(); ++l) {
    layers.push_back({{"layer", l + 1}, {"mean_abs_grad", report.mean_abs_grad[l]}});
  }
  for (const auto& d : report.dead_neurons()) dead.push_back({{"layer", d.layer}, {"neuron", d.neuron}});
  return {{"layers", layers}, {"dead", dead}};
}

// ---- sidewalk --------------------------------------------------------------

inline json to_json(const sidewalk::InspectionReport& report) {
  json blocks = json::array(), segments = json::array();
  for (std::size_t i = 0; i < report.strip.blocks.size(); ++i) {
    const auto& b = report.strip.blocks[i];
    blocks.push_back({{"index", i}, {"x", b.rect.x}, {"y", b.rect.y}, {"width", b.rect.width},
                      {"height", b.rect.height}, {"mean", b.mean}});
  }
  for (const auto& d : report.decisions) {
    segments.push_back({{"start", d.start},
                        {"encoded", d.encoded},
                        {"vertex", d.vertex ? json(*d.vertex) : json(nullptr)},
                        {"verdict", sidewalk::to_string(d.verdict)},
                        {"paint_blocks", d.paint_blocks}});
  }
  return {{"band", {{"top", report.strip.band_top},
                    {"height", report.strip.band_height},
                    {"response", report.strip.band_response}}},
          {"blocks", blocks},
          {"segments", segments},
          {"flagged", report.flagged}};
}

inline sidewalk::SidewalkSpec sidewalk_spec_from_json(const json& j) {
  return detail::guarded([&] {
    sidewalk::SidewalkSpec s;
    s.block_count = j.value("block_count", s.block_count);
    s.block_length = j.value("block_length", s.block_length);
    s.band_height = j.value("band_height", s.band_height);
    s.margin_top = j.value("margin_top", s.margin_top);
    s.margin_bottom = j.value("margin_bottom", s.margin_bottom);
    s.bright = j.value("bright", s.bright);
    s.dark = j.value("dark", s.dark);
    s.erased = j.value("erased", s.erased);
    s.background = j.value("background", s.background);
    s.start_bright = j.value("start_bright", s.start_bright);
    s.erased_blocks = j.value("erased_blocks", s.erased_blocks);
    s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
    s.seed = j.value("seed", s.seed);
    return s;
  });
}

// ---- flight ----------------------------------------------------------------

/// Missing keys keep their defaults; unknown keys are rejected to catch typos.
inline flight::SimConfig sim_config_from_json(const json& j) {
  static const std::array<const char*, 14> known{
      "vehicle_mass", "rotor_radius", "inertia_roll",  "inertia_pitch", "arm_mass",
      "arm_reach",    "time_step",    "duration",      "controller",    "damping_time",
      "max_lift_delta", "tilt_gain",  "trajectory",    "format"};
  return detail::guarded([&] {
    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "simulation config must be an object");
    for (const auto& [key, _] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
      }
    }
    flight::SimConfig c;
    c.vehicle_mass = j.value("vehicle_mass", c.vehicle_mass);
    c.rotor_radius = j.value("rotor_radius", c.rotor_radius);
    c.inertia_roll = j.value("inertia_roll", c.inertia_roll);
    c.inertia_pitch = j.value("inertia_pitch", c.inertia_pitch);
    c.arm_mass = j.value("arm_mass", c.arm_mass);
    c.arm_reach = j.value("arm_reach", c.arm_reach);
    c.time_step = j.value("time_step", c.time_step);
    c.duration = j.value("duration", c.duration);
    c.controller = j.value("controller", c.controller);
    c.damping_time = j.value("damping_time", c.damping_time);
    c.stabilizer.max_lift_delta = j.value("max_lift_delta", c.stabilizer.max_lift_delta);
    c.stabilizer.tilt_gain = j.value("tilt_gain", c.stabilizer.tilt_gain);
    if (j.contains("trajectory")) {
      c.trajectory.clear();
      for (const auto& k : j.at("trajectory")) {
        c.trajectory.push_back({k.at("t").get<double>(), k.at("azimuth").get<double>(),
                                k.at("extension").get<double>()});
      }
    }
    flight::validate(c);
    return c;
  });
}

inline json to_json(const flight::SimConfig& c) {
  json traj = json::array();
  for (const auto& k : c.trajectory) {
    traj.push_back({{"t", k.t}, {"azimuth", k.azimuth_deg}, {"extension", k.extension}});
  }
  return {{"vehicle_mass", c.vehicle_mass},
          {"rotor_radius", c.rotor_radius},
          {"inertia_roll", c.inertia_roll},
          {"inertia_pitch", c.inertia_pitch},
          {"arm_mass", c.arm_mass},
          {"arm_reach", c.arm_reach},
          {"time_step", c.time_step},
          {"duration", c.duration},
          {"controller", c.controller},
          {"damping_time", c.damping_time},
          {"max_lift_delta", c.stabilizer.max_lift_delta},
          {"tilt_gain", c.stabilizer.tilt_gain},
          {"trajectory", traj}};
}

}  // namespace flybot::io
