#include "mmx/simplex_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmx {

namespace {

constexpr double kEps = 1e-9;
const double kInf = std::numeric_limits<double>::infinity();

// Dense tableau simplex on  min c.x  s.t.  A x = b, x >= 0  (b normalized
// nonnegative, artificial start, two phases). Bland's rule throughout: the
// entering column is the smallest eligible index, ratio ties leave by the
// smallest basis index, so no cycle can form on degenerate bases.
class StandardLp {
 public:
  StandardLp(std::size_t nvars, std::vector<std::vector<double>> rows, std::vector<double> rhs)
      : n_(nvars), m_(rows.size()) {
    for (std::size_t i = 0; i < m_; ++i)
      if (rhs[i] < 0) {
        for (double& v : rows[i]) v = -v;
        rhs[i] = -rhs[i];
      }
    total_ = n_ + m_;  // + one artificial per row
    tab_.assign(m_, std::vector<double>(total_ + 1, 0.0));
    basis_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = rows[i][j];
      tab_[i][n_ + i] = 1.0;
      tab_[i][total_] = rhs[i];
      basis_[i] = static_cast<int>(n_ + i);
    }
  }

  enum class Outcome { optimal, infeasible, unbounded };

  Outcome solve(const std::vector<double>& cost, std::vector<double>& x_out) {
    // phase 1: minimize the artificial sum
    std::vector<double> phase1(total_, 0.0);
    for (std::size_t j = n_; j < total_; ++j) phase1[j] = 1.0;
    if (run(phase1, total_) == RunResult::unbounded)
      throw std::logic_error("simplex: phase 1 cannot be unbounded");
    double art = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= static_cast<int>(n_)) art += tab_[i][total_];
    if (art > 1e-7) return Outcome::infeasible;
    drive_out_artificials();

    std::vector<double> phase2(total_, 0.0);
    for (std::size_t j = 0; j < n_ && j < cost.size(); ++j) phase2[j] = cost[j];
    if (run(phase2, n_) == RunResult::unbounded) return Outcome::unbounded;

    x_out.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < static_cast<int>(n_)) x_out[static_cast<std::size_t>(basis_[i])] = tab_[i][total_];
    return Outcome::optimal;
  }

 private:
  enum class RunResult { optimal, unbounded };

  RunResult run(const std::vector<double>& cost, std::size_t allowed_cols) {
    std::vector<double> red(total_ + 1, 0.0);
    for (std::size_t j = 0; j < total_; ++j) red[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost[static_cast<std::size_t>(basis_[i])];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= total_; ++j) red[j] -= cb * tab_[i][j];
    }
    for (long iter = 0; iter < 200000; ++iter) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (red[j] < -kEps) {
          enter = j;
          break;
        }
      if (enter == allowed_cols) return RunResult::optimal;

      int leave = -1;
      double best = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= kEps) continue;
        double r = tab_[i][total_] / tab_[i][enter];
        if (leave < 0) {
          best = r;
          leave = static_cast<int>(i);
          continue;
        }
        double width = 1e-9 * std::max(1.0, std::abs(best));
        if (r < best - width) {
          best = r;
          leave = static_cast<int>(i);
        } else if (r <= best + width && basis_[i] < basis_[static_cast<std::size_t>(leave)]) {
          best = std::min(best, r);
          leave = static_cast<int>(i);
        }
      }
      if (leave < 0) return RunResult::unbounded;
      pivot(static_cast<std::size_t>(leave), enter, red);
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }

  void pivot(std::size_t row, std::size_t col, std::vector<double>& red) {
    double p = tab_[row][col];
    for (double& v : tab_[row]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      double f = tab_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= total_; ++j) tab_[i][j] -= f * tab_[row][j];
    }
    double f = red[col];
    if (f != 0.0)
      for (std::size_t j = 0; j <= total_; ++j) red[j] -= f * tab_[row][j];
    basis_[row] = static_cast<int>(col);
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<int>(n_)) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(tab_[i][j]) > kEps) {
          col = j;
          break;
        }
      if (col == n_) continue;  // redundant row; artificial stays basic at zero
      std::vector<double> dummy(total_ + 1, 0.0);
      pivot(i, col, dummy);
    }
  }

  std::size_t n_, m_, total_;
  std::vector<std::vector<double>> tab_;
  std::vector<int> basis_;
};

}  // namespace

LpResult maximize_over_simplex(std::size_t n, const std::vector<LpRow>& upper,
                               const std::vector<LpRow>& feas) {
  // variables: lambda (n), t+, t-, slack per upper row, surplus per feas row
  const std::size_t iu = upper.size(), ifs = feas.size();
  const std::size_t nvars = n + 2 + iu + ifs;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  for (std::size_t r = 0; r < iu; ++r) {
    std::vector<double> row(nvars, 0.0);
    row[n] = 1.0;
    row[n + 1] = -1.0;
    for (std::size_t k = 0; k < n; ++k) row[k] = -upper[r].a[k];
    row[n + 2 + r] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(upper[r].b);
  }
  for (std::size_t r = 0; r < ifs; ++r) {
    std::vector<double> row(nvars, 0.0);
    for (std::size_t k = 0; k < n; ++k) row[k] = feas[r].a[k];
    row[n + 2 + iu + r] = -1.0;
    rows.push_back(std::move(row));
    rhs.push_back(-feas[r].b);
  }
  {
    std::vector<double> row(nvars, 0.0);
    for (std::size_t k = 0; k < n; ++k) row[k] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(1.0);
  }

  std::vector<double> cost(nvars, 0.0);
  cost[n] = -1.0;  // min -t+ + t-  ==  max t
  cost[n + 1] = 1.0;

  StandardLp lp(nvars, std::move(rows), std::move(rhs));
  std::vector<double> x;
  LpResult res;
  switch (lp.solve(cost, x)) {
    case StandardLp::Outcome::infeasible:
      res.status = LpResult::Status::infeasible;
      return res;
    case StandardLp::Outcome::unbounded:
      res.status = LpResult::Status::unbounded;
      return res;
    case StandardLp::Outcome::optimal:
      break;
  }
  res.status = LpResult::Status::optimal;
  res.value = x[n] - x[n + 1];
  res.lambda.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  // clean tiny negatives and renormalize onto the simplex
  double sum = 0.0;
  for (double& l : res.lambda) {
    if (l < 0) l = 0;
    sum += l;
  }
  if (sum > 0)
    for (double& l : res.lambda) l /= sum;
  return res;
}

LpResult minimize_over_simplex(std::size_t n, const std::vector<LpRow>& lower,
                               const std::vector<LpRow>& feas) {
  std::vector<LpRow> negated(lower.size());
  for (std::size_t r = 0; r < lower.size(); ++r) {
    negated[r].a.resize(n);
    for (std::size_t k = 0; k < n; ++k) negated[r].a[k] = -lower[r].a[k];
    negated[r].b = -lower[r].b;
  }
  LpResult res = maximize_over_simplex(n, negated, feas);
  if (res.status == LpResult::Status::optimal) res.value = -res.value;
  return res;
}

}  // namespace mmx
