// Regenerates data/wire_vectors.json from the shared case list. Run after an
// intentional wire-format change, then review the diff.
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "wire_cases.hpp"

using nlohmann::json;
using namespace sibra;
using namespace sibra::wirecases;

int main(int argc, char** argv) {
  std::string out_path = argc > 1 ? argv[1] : "data/wire_vectors.json";

  json doc;
  doc["format"] = 1;

  json toks = json::array();
  for (const auto& c : build_token_cases()) {
    auto w = c.result.wire();
    toks.push_back({{"name", c.name}, {"wire", to_hex(w.data(), w.size())}});
  }
  doc["tokens"] = toks;

  json hdrs = json::array();
  for (const auto& [name, h] : build_header_cases()) {
    auto w = encode_header(h);
    hdrs.push_back({{"name", name}, {"wire", to_hex(w.data(), w.size())}});
  }
  doc["headers"] = hdrs;

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  out << doc.dump(2) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}
