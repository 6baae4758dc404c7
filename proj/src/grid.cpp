#include "mmx/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace mmx {

GridFunction::GridFunction(std::vector<std::vector<double>> axes, std::vector<ExtReal> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  if (axes_.empty() || axes_.size() > 2)
    throw std::invalid_argument("GridFunction: dimension must be 1 or 2");
  std::size_t n = 1;
  for (const auto& ax : axes_) {
    if (ax.empty()) throw std::invalid_argument("GridFunction: empty axis");
    for (std::size_t i = 0; i + 1 < ax.size(); ++i)
      if (!(ax[i] < ax[i + 1]))
        throw std::invalid_argument("GridFunction: axis must increase strictly");
    n *= ax.size();
  }
  if (values_.size() != n) throw std::invalid_argument("GridFunction: value count mismatch");
}

GridFunction GridFunction::sample(const PwlFunction& f, std::vector<double> axis) {
  std::vector<ExtReal> vals;
  vals.reserve(axis.size());
  for (double x : axis) vals.push_back(f.evaluate(x));
  return GridFunction({std::move(axis)}, std::move(vals));
}

ExtReal GridFunction::at(std::size_t i, std::size_t j) const {
  return values_[i * axes_[1].size() + j];
}
ExtReal& GridFunction::at(std::size_t i) { return values_[i]; }
ExtReal& GridFunction::at(std::size_t i, std::size_t j) { return values_[i * axes_[1].size() + j]; }

ExtReal grid_eval(const GridFunction& f, std::size_t i) { return f.at(i); }
ExtReal grid_eval(const GridFunction& f, std::size_t i, std::size_t j) { return f.at(i, j); }

ExtReal grid_inf(const GridFunction& f) { return fold_inf(f.values()); }
ExtReal grid_sup(const GridFunction& f) { return fold_sup(f.values()); }

namespace {

bool midpoint_ok(ExtReal a, ExtReal m, ExtReal b, double tol) {
  ExtReal rhs = add(scale(0.5, a), scale(0.5, b));
  return le_within(m, rhs, tol);
}

}  // namespace

bool grid_convexity_check(const GridFunction& f, double tol) {
  if (f.dims() == 1) {
    const auto& ax = f.axes()[0];
    for (std::size_t i = 1; i + 1 < ax.size(); ++i) {
      double dl = ax[i] - ax[i - 1], dr = ax[i + 1] - ax[i];
      if (std::abs(dl - dr) > 1e-9 * std::max(1.0, std::abs(dl))) continue;
      if (!midpoint_ok(f.at(i - 1), f.at(i), f.at(i + 1), tol)) return false;
    }
    return true;
  }
  const auto& ax0 = f.axes()[0];
  const auto& ax1 = f.axes()[1];
  for (std::size_t i = 0; i < ax0.size(); ++i)
    for (std::size_t j = 1; j + 1 < ax1.size(); ++j) {
      double dl = ax1[j] - ax1[j - 1], dr = ax1[j + 1] - ax1[j];
      if (std::abs(dl - dr) > 1e-9 * std::max(1.0, std::abs(dl))) continue;
      if (!midpoint_ok(f.at(i, j - 1), f.at(i, j), f.at(i, j + 1), tol)) return false;
    }
  for (std::size_t j = 0; j < ax1.size(); ++j)
    for (std::size_t i = 1; i + 1 < ax0.size(); ++i) {
      double dl = ax0[i] - ax0[i - 1], dr = ax0[i + 1] - ax0[i];
      if (std::abs(dl - dr) > 1e-9 * std::max(1.0, std::abs(dl))) continue;
      if (!midpoint_ok(f.at(i - 1, j), f.at(i, j), f.at(i + 1, j), tol)) return false;
    }
  return true;
}

}  // namespace mmx
