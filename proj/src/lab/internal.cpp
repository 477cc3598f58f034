#include "internal.hpp"

#include <sstream>

namespace phlab {

std::string sampling_label(const std::vector<int>& grid) {
  std::ostringstream os;
  os << "jittered grid ";
  for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? "x" : "") << grid[i];
  os << ", shuffled";
  return os.str();
}

std::string short_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace phlab
