#include "rfopt/config_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace rfopt {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line_no, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line_no << ": " << msg;
  throw Error(ErrorCode::kParseError, os.str());
}

template <typename T>
T parse_number(const std::string& text, int line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if constexpr (std::is_integral_v<T>) {
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      parse_fail(line_no, "expected integer, got '" + text + "'");
    }
  } else {
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      parse_fail(line_no, "expected number, got '" + text + "'");
    }
  }
  return value;
}

}  // namespace

SystemConfig parse_config(std::istream& in, SystemConfig base) {
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    std::string line = trim(raw);
    if (line.empty()) continue;

    std::string key, value;
    if (const auto eq = line.find('='); eq != std::string::npos) {
      key = trim(line.substr(0, eq));
      value = trim(line.substr(eq + 1));
    } else {
      const auto ws = line.find_first_of(" \t");
      if (ws == std::string::npos) parse_fail(line_no, "missing value");
      key = trim(line.substr(0, ws));
      value = trim(line.substr(ws));
    }

    if (key == "n_antennas") {
      base.n_antennas = parse_number<int>(value, line_no);
    } else if (key == "n_users") {
      base.n_users = parse_number<int>(value, line_no);
    } else if (key == "p_max") {
      base.p_max = parse_number<double>(value, line_no);
    } else if (key == "p_c") {
      base.p_c = parse_number<double>(value, line_no);
    } else {
      parse_fail(line_no, "unknown key '" + key + "'");
    }
  }
  return base;
}

SystemConfig load_config_file(const std::string& path, SystemConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  return parse_config(in, base);
}

}  // namespace rfopt
