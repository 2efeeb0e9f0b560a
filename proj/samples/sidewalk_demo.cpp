// Renders a synthetic curb from a generator JSON file, writes it as PGM and
// prints the blocks the inspection flags for repainting.
//
//   sidewalk_demo assets/sidewalk_example.json curb.pgm

#include <cstdio>
#include <fstream>

#include "flybot/flybot.hpp"
#include "flybot/io/json.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <generator.json> <out.pgm>\n", argv[0]);
    return 2;
  }
  try {
    const auto spec = flybot::io::sidewalk_spec_from_json(flybot::io::read_json_file(argv[1]));
    const auto img = flybot::sidewalk::generate_sidewalk(spec);
    const auto bytes = flybot::raster::write_pnm(img);
    std::ofstream(argv[2], std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                                   static_cast<std::streamsize>(bytes.size()));

    const auto result = flybot::sidewalk::inspect(img);
    std::printf("%dx%d image, %zu blocks found\n", img.width(), img.height(),
                result.report.strip.blocks.size());
    for (const auto& d : result.report.decisions) {
      std::printf("  window %zu: %s\n", d.start, std::string(flybot::sidewalk::to_string(d.verdict)).c_str());
    }
    std::printf("flagged:");
    for (auto idx : result.report.flagged) std::printf(" %zu", idx);
    std::printf("\n");
  } catch (const flybot::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
