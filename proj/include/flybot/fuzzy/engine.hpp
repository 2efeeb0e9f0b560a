#pragma once

// Mamdani inference: min-AND rule firing, clipped consequents merged by
// pointwise max, centroid defuzzification on a uniform grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flybot/error.hpp"

namespace flybot::fuzzy {

/// Trapezoid (a, b, c, d); a triangle is the case b == c. Coincident
/// breakpoints give vertical shoulders, so (0, 0, 0.5) is 1 at x = 0.
struct MembershipFunction {
  double a = 0, b = 0, c = 0, d = 0;

  static MembershipFunction triangular(double a, double b, double c) {
    return trapezoidal(a, b, b, c);
  }
  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    if (!(a <= b && b <= c && c <= d)) {
      throw Error(ErrorCode::BadMembership, "breakpoints must be non-decreasing");
    }
    return {a, b, c, d};
  }

  bool is_triangle() const noexcept { return b == c; }

  double degree(double x) const noexcept {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
  }

  bool operator==(const MembershipFunction&) const = default;
};

struct LabeledSet {
  std::string label;
  MembershipFunction fn;
  bool operator==(const LabeledSet&) const = default;
};

struct FuzzyVariable {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::string unit;
  std::vector<LabeledSet> sets;

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i].label == label) return i;
    return std::nullopt;
  }

  double clamp(double x) const { return std::clamp(x, min, max); }

  bool operator==(const FuzzyVariable&) const = default;
};

/// Degree of every label at x, after clamping x into the universe.
inline std::map<std::string, double> fuzzify(const FuzzyVariable& v, double x) {
  const double cx = v.clamp(x);
  std::map<std::string, double> out;
  for (const auto& s : v.sets) out[s.label] = s.fn.degree(cx);
  return out;
}

struct Term {
  std::string variable;
  std::string label;
  bool operator==(const Term&) const = default;
};

struct Rule {
  std::vector<Term> antecedents;  // joined with AND
  Term consequent;
  bool operator==(const Rule&) const = default;
};

inline constexpr std::size_t kDefaultSamples = 201;
inline constexpr std::size_t kMinSamples = 51;

class FuzzySystem {
 public:
  FuzzySystem(std::vector<FuzzyVariable> inputs, std::vector<FuzzyVariable> outputs,
              std::vector<Rule> rules, std::size_t samples = kDefaultSamples)
      : inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        rules_(std::move(rules)),
        samples_(samples) {
    if (samples_ < kMinSamples) {
      throw Error(ErrorCode::BadVariable, "need at least 51 defuzzification samples");
    }
    for (const auto* group : {&inputs_, &outputs_})
      for (const auto& v : *group) validate(v);
    for (const auto& r : rules_) resolved_.push_back(resolve(r));
  }

  const std::vector<FuzzyVariable>& inputs() const noexcept { return inputs_; }
  const std::vector<FuzzyVariable>& outputs() const noexcept { return outputs_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t samples() const noexcept { return samples_; }

  /// Crisp outputs, in output-variable order, from inputs in input-variable order.
  std::vector<double> infer(std::span<const double> inputs) const {
    if (inputs.size() != inputs_.size()) {
      throw Error(ErrorCode::MissingInput, "expected " + std::to_string(inputs_.size()) + " inputs");
    }
    std::vector<double> firing(resolved_.size());
    for (std::size_t r = 0; r < resolved_.size(); ++r) {
      double f = 1.0;
      for (const auto& [var, set] : resolved_[r].antecedents) {
        const auto& v = inputs_[var];
        f = std::min(f, v.sets[set].fn.degree(v.clamp(inputs[var])));
      }
      firing[r] = f;
    }

    std::vector<double> crisp(outputs_.size());
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
      const auto& v = outputs_[o];
      const double step = (v.max - v.min) / static_cast<double>(samples_ - 1);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < samples_; ++k) {
        const double x = v.min + step * static_cast<double>(k);
        double mu = 0.0;
        for (std::size_t r = 0; r < resolved_.size(); ++r) {
          if (resolved_[r].output != o || firing[r] == 0.0) continue;
          mu = std::max(mu, std::min(firing[r], v.sets[resolved_[r].output_set].fn.degree(x)));
        }
        num += mu * x;
        den += mu;
      }
      if (den == 0.0) throw Error(ErrorCode::NoRuleFired, "no rule fired for '" + v.name + "'");
      crisp[o] = num / den;
    }
    return crisp;
  }

  std::map<std::string, double> infer(const std::map<std::string, double>& inputs) const {
    std::vector<double> values;
    for (const auto& v : inputs_) {
      const auto it = inputs.find(v.name);
      if (it == inputs.end()) throw Error(ErrorCode::MissingInput, "no value for '" + v.name + "'");
      values.push_back(it->second);
    }
    const auto crisp = infer(std::span<const double>(values));
    std::map<std::string, double> out;
    for (std::size_t o = 0; o < outputs_.size(); ++o) out[outputs_[o].name] = crisp[o];
    return out;
  }

 private:
  struct Resolved {
    std::vector<std::pair<std::size_t, std::size_t>> antecedents;  // (input, set)
    std::size_t output = 0;
    std::size_t output_set = 0;
  };

  static void validate(const FuzzyVariable& v) {
    if (!(v.min < v.max)) throw Error(ErrorCode::BadVariable, "'" + v.name + "' has an empty universe");
    if (v.sets.size() < 2) throw Error(ErrorCode::BadVariable, "'" + v.name + "' needs two labels");
    for (const auto& s : v.sets) {
      const auto& f = s.fn;
      if (!(f.a <= f.b && f.b <= f.c && f.c <= f.d)) {
        throw Error(ErrorCode::BadMembership, "'" + v.name + "." + s.label + "' breakpoints decrease");
      }
      if (f.a < v.min || f.d > v.max) {
        throw Error(ErrorCode::BadMembership, "'" + v.name + "." + s.label + "' leaves the universe");
      }
    }
  }

  static std::pair<std::size_t, std::size_t> lookup(const std::vector<FuzzyVariable>& vars,
                                                    const Term& t) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name != t.variable) continue;
      const auto s = vars[i].find(t.label);
      if (!s) throw Error(ErrorCode::UnknownLabel, t.variable + "." + t.label);
      return {i, *s};
    }
    throw Error(ErrorCode::UnknownVariable, t.variable);
  }

  Resolved resolve(const Rule& r) const {
    Resolved out;
    if (r.antecedents.empty()) throw Error(ErrorCode::BadVariable, "rule without antecedents");
    for (const auto& t : r.antecedents) out.antecedents.push_back(lookup(inputs_, t));
    const auto [o, s] = lookup(outputs_, r.consequent);
    out.output = o;
    out.output_set = s;
    return out;
  }

  std::vector<FuzzyVariable> inputs_;
  std::vector<FuzzyVariable> outputs_;
  std::vector<Rule> rules_;
  std::size_t samples_;
  std::vector<Resolved> resolved_;
};

}  // namespace flybot::fuzzy
