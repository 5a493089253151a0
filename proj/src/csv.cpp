#include "rplsh/csv.hpp"

#include <cstdio>

namespace rplsh {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    std::string_view field = line.substr(start, end == std::string_view::npos ? line.npos : end - start);
    const auto first = field.find_first_not_of(" \t\r\n");
    const auto last = field.find_last_not_of(" \t\r\n");
    out.emplace_back(first == field.npos ? std::string_view{} : field.substr(first, last - first + 1));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace rplsh
