#include "rheokin/csv.hpp"

#include <cstdio>
#include <fstream>

#include "rheokin/errors.hpp"

namespace rheokin::csv {

std::string g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  return out;
}

void write_file(const std::string& path, const std::string& header,
                const std::vector<std::string>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path);
  os << header << '\n';
  for (const auto& r : rows) os << r << '\n';
  if (!os) throw ConfigError("failed writing " + path);
}

}  // namespace rheokin::csv
