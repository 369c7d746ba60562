#include "hencky/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hencky/errors.hpp"

namespace hencky::csv {

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void Table::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::validation_error, "cannot open output file " + path);
  out << to_string();
}

}  // namespace hencky::csv
