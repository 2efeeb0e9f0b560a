// Runs the hover simulation twice, with and without the fuzzy stabilizer,
// and compares the peak tilt.
//
//   hover_demo assets/sim_arm_sweep.json

#include <cmath>
#include <cstdio>
#include <numbers>

#include "flybot/flybot.hpp"
#include "flybot/io/json.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <sim.json>\n", argv[0]);
    return 2;
  }
  try {
    auto cfg = flybot::io::sim_config_from_json(flybot::io::read_json_file(argv[1]));
    constexpr double deg = 180.0 / std::numbers::pi;
    for (bool on : {true, false}) {
      cfg.controller = on;
      const auto trace = flybot::flight::simulate_hover(cfg);
      std::printf("controller %-3s  max tilt %10.4f deg over %zu steps\n", on ? "on" : "off",
                  flybot::flight::max_tilt(trace) * deg, trace.size());
    }
  } catch (const flybot::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
