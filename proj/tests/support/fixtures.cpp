#include "fixtures.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stipula/parser.hpp"

namespace stipula::testing {

std::string fixture_path(const std::string& name) { return std::string(STIPULA_FIXTURES_DIR) + "/" + name + ".stipula"; }

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ContractAst load_fixture(const std::string& name) { return load_contract(read_fixture(name)); }

const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names{"license", "deposit", "loan", "betting"};
  return names;
}

std::string normalize_ws(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace stipula::testing
