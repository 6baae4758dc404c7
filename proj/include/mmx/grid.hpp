#pragma once

#include <cstddef>
#include <vector>

#include "mmx/extreal.hpp"
#include "mmx/pwl.hpp"

namespace mmx {

/// Extended-real values sampled on a finite rectangular grid in 1 or 2
/// dimensions. Values are stored row-major in axis order.
class GridFunction {
 public:
  GridFunction(std::vector<std::vector<double>> axes, std::vector<ExtReal> values);

  static GridFunction sample(const PwlFunction& f, std::vector<double> axis);

  std::size_t dims() const { return axes_.size(); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<ExtReal>& values() const { return values_; }

  std::size_t size(std::size_t axis) const { return axes_[axis].size(); }

  ExtReal at(std::size_t i) const { return values_[i]; }                  // 1-D
  ExtReal at(std::size_t i, std::size_t j) const;                         // 2-D
  ExtReal& at(std::size_t i);
  ExtReal& at(std::size_t i, std::size_t j);

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<ExtReal> values_;
};

ExtReal grid_eval(const GridFunction& f, std::size_t i);
ExtReal grid_eval(const GridFunction& f, std::size_t i, std::size_t j);
ExtReal grid_inf(const GridFunction& f);
ExtReal grid_sup(const GridFunction& f);

/// Discrete midpoint convexity along every axis-aligned triple of collinear
/// equally spaced nodes, within tol.
bool grid_convexity_check(const GridFunction& f, double tol = 1e-9);

}  // namespace mmx
