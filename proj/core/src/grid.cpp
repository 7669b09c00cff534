#include "amhd/grid.hpp"

#include <algorithm>
#include <string>

#include "amhd/errors.hpp"

namespace amhd {

Grid::Grid(int n1, int n2, int n3, double length) : dims_{n1, n2, n3}, length_(length) {
  for (int n : dims_) {
    if (n < 8 || n % 2 != 0) {
      throw ArgumentError("grid size must be an even integer >= 8, got " + std::to_string(n));
    }
  }
  if (!(length > 0.0)) throw ArgumentError("box length must be positive");
}

double Grid::min_spacing() const {
  return length_ / *std::max_element(dims_.begin(), dims_.end());
}

std::size_t Grid::physical_size() const {
  return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
}

std::size_t Grid::spectral_size() const {
  return static_cast<std::size_t>(dims_[0]) * dims_[1] * (dims_[2] / 2 + 1);
}

}  // namespace amhd
