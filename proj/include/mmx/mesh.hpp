#pragma once

#include <cstddef>
#include <vector>

namespace mmx {

/// Barycentric mesh of the n-simplex with the given denominator: all
/// lambda = k/d with k a nonnegative integer composition of d.
inline std::vector<std::vector<double>> simplex_mesh(std::size_t n, int density) {
  std::vector<std::vector<double>> out;
  std::vector<int> k(n, 0);
  // enumerate compositions in lexicographic order
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == n) {
      k[pos] = left;
      std::vector<double> lam(n);
      for (std::size_t i = 0; i < n; ++i) lam[i] = static_cast<double>(k[i]) / density;
      out.push_back(std::move(lam));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  if (n == 0) return out;
  if (n == 1) {
    out.push_back({1.0});
    return out;
  }
  rec(rec, 0, density);
  return out;
}

}  // namespace mmx
