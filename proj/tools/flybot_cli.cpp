// Batch command-line front end. JSON goes to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 domain error, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flybot/flybot.hpp"
#include "flybot/io/json.hpp"

namespace {

using flybot::Error;
using flybot::ErrorCode;
using ojson = nlohmann::ordered_json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Files are staged next to their destination and renamed only once every
// output of the command is ready, so a failing command leaves nothing behind.
class OutputFiles {
 public:
  void stage(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".partial";
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    staged_.emplace_back(tmp, path);
  }

  void stage(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    stage(path, std::string(bytes.begin(), bytes.end()));
  }

  void commit() {
    for (const auto& [tmp, path] : staged_) std::filesystem::rename(tmp, path);
    staged_.clear();
  }

  ~OutputFiles() {
    std::error_code ec;
    for (const auto& [tmp, path] : staged_) std::filesystem::remove(tmp, ec);
  }

 private:
  std::vector<std::pair<std::string, std::string>> staged_;
};

double round_to(double x, double quantum) { return std::round(x / quantum) * quantum; }

void emit(const ojson& doc) { std::cout << doc.dump() << '\n'; }

std::vector<std::size_t> parse_layers(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = -1;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 0) throw Error(ErrorCode::BadTopology, "bad layer size '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return v;
}

int run_otsu(const std::string& in, const std::string& out) {
  const auto gray = flybot::raster::to_grayscale(flybot::raster::read_pnm_file(in));
  const auto result = flybot::vision::otsu_threshold(flybot::raster::histogram(gray));
  if (result.degenerate) {
    throw Error(ErrorCode::DegenerateHistogram,
                "all pixels have value " + std::to_string(result.threshold));
  }
  const auto mask = flybot::vision::apply_threshold(gray, result.threshold);
  std::size_t fg = 0;
  for (auto v : mask.samples()) fg += v != 0;
  OutputFiles files;
  if (!out.empty()) files.stage(out, flybot::raster::write_pnm(mask));
  files.commit();
  emit({{"threshold", result.threshold},
        {"foreground_fraction", static_cast<double>(fg) / static_cast<double>(gray.pixel_count())}});
  return 0;
}

int run_green(const std::string& in, int threshold, const std::string& mask_path) {
  const auto img = flybot::raster::read_pnm_file(in);
  const auto green = flybot::vision::green_density(img, threshold);
  OutputFiles files;
  if (!mask_path.empty()) files.stage(mask_path, flybot::raster::write_pnm(green.mask));
  files.commit();
  emit({{"density", green.fraction}, {"threshold", threshold}, {"pixels", img.pixel_count()}});
  return 0;
}

int run_dose(const std::string& in, const std::string& system_path) {
  const auto sys = system_path.empty()
                       ? flybot::fuzzy::dose_system()
                       : flybot::io::fuzzy_system_from_json(flybot::io::read_json_file(system_path));
  const auto img = flybot::raster::read_pnm_file(in);
  const double density = flybot::vision::green_density(img).fraction;
  emit({{"density", density}, {"dose", flybot::fuzzy::pesticide_dose(sys, density)}});
  return 0;
}

int run_lines(const std::string& in, double theta_step, int min_votes) {
  const auto edges = flybot::raster::to_grayscale(flybot::raster::read_pnm_file(in));
  ojson lines = ojson::array();
  for (const auto& h : flybot::vision::hough_lines(edges, theta_step, min_votes)) {
    lines.push_back({{"rho", h.rho}, {"theta", h.theta}, {"votes", h.votes}});
  }
  emit({{"lines", lines}});
  return 0;
}

int run_circles(const std::string& in, int r_min, int r_max, int min_votes) {
  const auto edges = flybot::raster::to_grayscale(flybot::raster::read_pnm_file(in));
  ojson circles = ojson::array();
  for (const auto& h : flybot::vision::hough_circles(edges, r_min, r_max, min_votes)) {
    circles.push_back({{"cx", h.cx}, {"cy", h.cy}, {"r", h.radius}, {"votes", h.votes}});
  }
  emit({{"circles", circles}});
  return 0;
}

int run_inspect(const std::string& in, double sigma, int block, const std::string& overlay,
                const std::string& report_path) {
  flybot::sidewalk::InspectConfig cfg;
  cfg.strip.sigma = sigma;
  cfg.strip.block_length = block;
  cfg.strip.band_height = block;
  const auto result = flybot::sidewalk::inspect(flybot::raster::read_pnm_file(in), cfg);
  const std::string report = flybot::io::to_json(result.report).dump();
  OutputFiles files;
  if (!overlay.empty()) files.stage(overlay, flybot::raster::write_pnm(result.overlay));
  if (!report_path.empty()) files.stage(report_path, report + "\n");
  files.commit();
  std::cout << report << '\n';
  return 0;
}

int run_thermal(std::optional<double> to_temp, std::optional<double> to_radiance) {
  if (to_temp) {
    emit({{"radiance_w_m2", *to_temp},
          {"temperature_k", flybot::vision::radiance_to_temperature(*to_temp)}});
  } else {
    emit({{"temperature_k", *to_radiance},
          {"radiance_w_m2", flybot::vision::temperature_to_radiance(*to_radiance)}});
  }
  return 0;
}

int run_thrust(const std::string& table_path, int rotors, double safety) {
  const auto table = flybot::flight::load_mass_table(table_path);
  const double grams = flybot::flight::total_mass(table);
  const double kgf = flybot::flight::thrust_per_rotor({grams / 1000.0, rotors, safety});
  ojson doc;
  if (grams == std::floor(grams) && grams < 9e15) {
    doc["total_g"] = static_cast<long long>(grams);
  } else {
    doc["total_g"] = grams;
  }
  // Trimmed to 1e-9 so the decimal form is stable (19.2114, not 19.211399999999998).
  doc["per_rotor_kgf"] = round_to(kgf, 1e-9);
  doc["per_rotor_n"] = round_to(flybot::flight::kgf_to_newtons(kgf), 1e-9);
  emit(doc);
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& trace_path) {
  const auto cfg = flybot::io::sim_config_from_json(flybot::io::read_json_file(config_path));
  const auto trace = flybot::flight::simulate_hover(cfg);
  const double weight = cfg.vehicle_mass * flybot::flight::kStandardGravity;
  double worst = 0.0;
  for (const auto& s : trace) {
    double sum = 0.0;
    for (double f : s.rotor_thrusts) sum += f;
    worst = std::max(worst, std::abs(sum - weight));
  }
  OutputFiles files;
  if (!trace_path.empty()) files.stage(trace_path, flybot::flight::trace_csv(trace));
  files.commit();
  emit({{"steps", trace.size() - 1},
        {"controller", cfg.controller},
        {"max_tilt_rad", flybot::flight::max_tilt(trace)},
        {"max_thrust_sum_error_n", worst},
        {"final_roll", trace.back().roll},
        {"final_pitch", trace.back().pitch}});
  return 0;
}

int run_nn_demo(bool gradient_check, std::uint64_t seed, const std::string& layers_text,
                const std::string& activation_name) {
  using namespace flybot::neural;
  const auto layers = parse_layers(layers_text);
  const auto kind = parse_activation_kind(activation_name);
  const Activation act = kind == ActivationKind::LeakyReLU ? Activation::leaky() : Activation{kind};
  const Mlp net = mlp_init(layers, act, seed);
  std::mt19937_64 rng(seed);
  ojson doc{{"mode", gradient_check ? "gradient-check" : "diagnose"},
            {"seed", seed},
            {"layers", layers},
            {"activation", to_string(kind)}};
  if (gradient_check) {
    // Redraw until the point is clear of every ReLU kink.
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const auto x = uniform_vector(rng, net.inputs());
      const auto target = uniform_vector(rng, net.outputs());
      try {
        doc["max_relative_error"] = flybot::neural::gradient_check(net, x, target, 1e-5);
        emit(doc);
        return 0;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NearKink) throw;
      }
    }
    throw Error(ErrorCode::NearKink, "no kink-free evaluation point found");
  }
  std::vector<std::vector<double>> inputs;
  for (int i = 0; i < 32; ++i) inputs.push_back(uniform_vector(rng, net.inputs()));
  const auto report = diagnose(net, inputs);
  const auto body = flybot::io::to_json(report);
  doc["gradients"] = ojson::parse(body["layers"].dump());
  doc["dead"] = ojson::parse(body["dead"].dump());
  emit(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flybot: inspection-drone perception and control toolkit", "flybot"};
  app.require_subcommand(1);

  std::string input, out_path, mask_path, system_path, overlay_path, report_path;
  std::string table_path, config_path, trace_path;
  int exg_threshold = flybot::vision::kDefaultExgThreshold;
  double theta_step = 1.0;
  int line_votes = 10, circle_votes = 20, r_min = 0, r_max = 0;
  double sigma = 2.0;
  int block = 16;
  std::optional<double> to_temp, to_radiance;
  int rotors = 0;
  double safety = 1.2;
  bool grad_check = false, diagnose = false;
  std::uint64_t seed = 1;
  std::string layers = "2,3,1", activation = "sigmoid";

  auto* otsu = app.add_subcommand("otsu", "Otsu threshold of a PGM/PPM image");
  otsu->add_option("input", input, "input image")->required();
  otsu->add_option("--out", out_path, "write the binary mask as PGM");

  auto* green = app.add_subcommand("green-density", "fraction of vegetation pixels in a PPM");
  green->add_option("input", input, "input RGB image")->required();
  green->add_option("--threshold", exg_threshold, "excess-green threshold (2G-R-B)");
  green->add_option("--mask", mask_path, "write the vegetation mask as PGM");

  auto* dose = app.add_subcommand("dose", "fuzzy pesticide dose from green density");
  dose->add_option("input", input, "input RGB image")->required();
  dose->add_option("--system", system_path, "fuzzy system JSON (default: built-in dosing rules)");

  auto* lines = app.add_subcommand("detect-lines", "Hough line detection on an edge map");
  lines->add_option("input", input, "binary edge image")->required();
  lines->add_option("--theta-step", theta_step, "angular resolution in degrees");
  lines->add_option("--min-votes", line_votes, "minimum accumulator votes");

  auto* circles = app.add_subcommand("detect-circles", "Hough circle detection on an edge map");
  circles->add_option("input", input, "binary edge image")->required();
  circles->add_option("--r-min", r_min, "smallest radius")->required();
  circles->add_option("--r-max", r_max, "largest radius")->required();
  circles->add_option("--min-votes", circle_votes, "minimum accumulator votes");

  auto* inspect = app.add_subcommand("inspect-sidewalk", "find curb blocks that need repainting");
  inspect->add_option("input", input, "curb image")->required();
  inspect->add_option("--sigma", sigma, "Mexican-Hat scale in pixels");
  inspect->add_option("--block", block, "block length in pixels");
  inspect->add_option("--overlay", overlay_path, "write the annotated image as PGM");
  inspect->add_option("--report", report_path, "write the JSON report to a file");

  auto* thermal = app.add_subcommand("thermal", "Stefan-Boltzmann radiance/temperature conversion");
  auto* temp_opt = thermal->add_option("--to-temp", to_temp, "radiance in W/m^2 to temperature");
  auto* rad_opt = thermal->add_option("--to-radiance", to_radiance, "temperature in K to radiance");
  temp_opt->excludes(rad_opt);
  thermal->require_option(1);

  auto* thrust = app.add_subcommand("thrust", "per-rotor thrust from a mass table");
  thrust->add_option("--mass-table", table_path, "CSV with name,grams,count")->required();
  thrust->add_option("--rotors", rotors, "rotor count (4, 6 or 8)")->required();
  thrust->add_option("--safety", safety, "safety factor (>= 1)");

  auto* simulate = app.add_subcommand("simulate", "octocopter hover simulation");
  simulate->add_option("--config", config_path, "simulation config JSON")->required();
  simulate->add_option("--trace", trace_path, "write the state trace as CSV");

  auto* nn = app.add_subcommand("nn-demo", "MLP gradient check or training diagnostics");
  auto* gc_flag = nn->add_flag("--gradient-check", grad_check, "compare backprop with finite differences");
  auto* dg_flag = nn->add_flag("--diagnose", diagnose, "report gradient magnitudes and dead neurons");
  gc_flag->excludes(dg_flag);
  nn->add_option("--seed", seed, "initialization seed");
  nn->add_option("--layers", layers, "comma-separated layer sizes");
  nn->add_option("--activation", activation, "sigmoid, relu or leaky")
      ->check(CLI::IsMember({"sigmoid", "relu", "leaky"}));

  try {
    app.parse(argc, argv);
    if (nn->parsed() && !grad_check && !diagnose) {
      throw CLI::ValidationError("nn-demo", "one of --gradient-check or --diagnose is required");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (otsu->parsed()) return run_otsu(input, out_path);
    if (green->parsed()) return run_green(input, exg_threshold, mask_path);
    if (dose->parsed()) return run_dose(input, system_path);
    if (lines->parsed()) return run_lines(input, theta_step, line_votes);
    if (circles->parsed()) return run_circles(input, r_min, r_max, circle_votes);
    if (inspect->parsed()) return run_inspect(input, sigma, block, overlay_path, report_path);
    if (thermal->parsed()) return run_thermal(to_temp, to_radiance);
    if (thrust->parsed()) return run_thrust(table_path, rotors, safety);
    if (simulate->parsed()) return run_simulate(config_path, trace_path);
    if (nn->parsed()) return run_nn_demo(grad_check, seed, layers, activation);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return flybot::is_domain_error(e.code()) ? kExitDomain : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
