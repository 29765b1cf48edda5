#pragma once

#include <cstdint>
#include <vector>

namespace pcirc {

/// Square 0/1 matrix, row-major.
struct IntMatrix {
  int order = 0;
  std::vector<uint8_t> entries;

  static IntMatrix zero(int order) {
    return {order, std::vector<uint8_t>(static_cast<std::size_t>(order) * order, 0)};
  }
  static IntMatrix identity(int order) {
    IntMatrix m = zero(order);
    for (int i = 0; i < order; ++i) m.at(i, i) = 1;
    return m;
  }

  uint8_t& at(int row, int col) { return entries[static_cast<std::size_t>(row) * order + col]; }
  uint8_t at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * order + col];
  }

  int column_count(int col) const {
    int k = 0;
    for (int i = 0; i < order; ++i) k += at(i, col);
    return k;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.order == b.order && a.entries == b.entries;
  }
};

}  // namespace pcirc
