// Regenerates the committed fixtures from their seeds:
//   make_fixtures <fixtures-dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <fixtures-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const auto synthetic = doclens::testing::generate_synthetic(20231);
  std::ofstream(dir / "synthetic_topics.json") << doclens::testing::to_json(synthetic).dump() << '\n';
  doclens::testing::write_text_corpus(dir / "text_corpus", 7);
  std::cout << "wrote fixtures to " << dir << '\n';
  return 0;
}
