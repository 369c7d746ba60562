#pragma once

#include <string>
#include <vector>

namespace hencky::csv {

// Round-trip safe, locale-independent formatting; empty optional cells stay
// empty so output files are byte-stable.
std::string format(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const std::string& path) const;
  std::string to_string() const;
};

}  // namespace hencky::csv
