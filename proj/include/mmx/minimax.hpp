#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmx/extreal.hpp"
#include "mmx/grid.hpp"
#include "mmx/interval.hpp"
#include "mmx/pwl.hpp"

namespace mmx {

/// Point of the n-simplex: nonnegative weights summing to one.
struct SimplexPoint {
  std::vector<double> weights;

  SimplexPoint() = default;
  explicit SimplexPoint(std::vector<double> w);
  static SimplexPoint vertex(std::size_t n, std::size_t k);
  static SimplexPoint barycenter(std::size_t n);
  std::size_t size() const { return weights.size(); }
};

/// Concave-in-lambda family f(lambda, y) = sum_k scale(lambda_k, g_k(y)),
/// optionally localized to a y-interval B (realizing f + I_B).
struct BifunctionFamily {
  std::vector<PwlFunction> generators;
  std::optional<Interval> y_restriction;

  std::size_t arity() const { return generators.size(); }
  PwlFunction at_unrestricted(std::span<const double> lambda) const;
  PwlFunction at(std::span<const double> lambda) const;  // + I_B when restricted
};

/// Brute-force bifunction values on finite node sets. On a finite grid every
/// row is lsc, so this mode cannot distinguish A0 from A1 membership beyond
/// properness and discrete convexity.
struct BifunctionGrid {
  std::vector<double> x_nodes;
  std::vector<double> y_nodes;
  std::vector<ExtReal> values;  // x-major

  ExtReal at(std::size_t i, std::size_t j) const { return values[i * y_nodes.size() + j]; }
};

/// Finite truncation of a net of grid functions over a common compact grid.
struct FunctionSequence {
  std::vector<GridFunction> terms;
};

struct FaceStatus {
  std::vector<std::size_t> support;
  bool member = false;
};

struct Classification {
  std::vector<std::pair<std::vector<double>, bool>> probes;
  /// Exact face decomposition; present when every generator is convex, in
  /// which case membership is constant on relative interiors of faces.
  std::optional<std::vector<FaceStatus>> faces;

  std::size_t member_count() const;
  bool any_member() const;
};

Classification classify_A0(const BifunctionFamily& fam, int mesh_density = 8);
Classification classify_A1(const BifunctionFamily& fam, int mesh_density = 8);

std::vector<bool> classify_rows_A0(const BifunctionGrid& grid);
std::vector<bool> classify_rows_A1(const BifunctionGrid& grid);

struct DualValue {
  ExtReal value = ExtReal::minus_inf();
  SimplexPoint maximizer;
  std::string mode;
};

/// max over the simplex of g(lambda) = inf_y f(lambda, y); exact. Proper
/// families solve one LP over merged breakpoint and limit rows plus recession
/// feasibility; families with -inf values enumerate support faces and solve
/// the face-restricted LPs.
DualValue rhs_value(const BifunctionFamily& fam);

enum class SubsetKind { A0, A1, full };

struct LhsValue {
  ExtReal value = ExtReal::minus_inf();
  bool empty_subset = false;
  bool sup_identically_plus_inf = false;
};

/// inf_y of the supremum of f(., y) over the classified subset. Exact via
/// the face decomposition when available; otherwise the sampled sup is a
/// lower bound, which keeps inequality verification conservative.
LhsValue lhs_value(const BifunctionFamily& fam, SubsetKind subset, const Classification& cls);

struct MinimaxReport {
  std::string theorem;
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  bool vacuous = false;
  ExtReal lhs = ExtReal::minus_inf();
  ExtReal rhs = ExtReal::plus_inf();
  double gap = 0.0;
  bool holds = false;
  std::size_t subset_size = 0;
  SimplexPoint lambda_star;
  std::string mode;
  bool degenerate_empty_subset = false;
  bool degenerate_sup_plus_inf = false;
};

MinimaxReport verify_mm1(const BifunctionFamily& fam, double tol = 1e-9);
MinimaxReport verify_mmb(const BifunctionFamily& fam, double tol = 1e-9);
MinimaxReport verify_localized(const BifunctionFamily& fam, double tol = 1e-9);

MinimaxReport verify_mm1_grid(const BifunctionGrid& grid, double tol = 1e-9);
MinimaxReport verify_mmb_grid(const BifunctionGrid& grid, double tol = 1e-9);

/// Sample a family onto a lambda-mesh x y-node grid.
BifunctionGrid sample_family(const BifunctionFamily& fam, int density,
                             std::span<const double> y_nodes);

struct DualityReport {
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  ExtReal primal = ExtReal::plus_inf();
  ExtReal dual = ExtReal::minus_inf();
  SimplexPoint lambda_star;
  std::string mode;
  double gap = 0.0;
  bool holds = false;
};

/// inf max_k f_k versus the exact simplex dual max_lambda inf f_lambda.
DualityReport simplex_duality(std::span<const PwlFunction> funcs, double tol = 1e-9);

struct InteriorEqualityReport {
  bool cond_interior_finite = false;  // int(A) meets {f(., y) > -inf} for every y
  bool cond_interior_gamma0 = false;  // f(lambda, .) in Gamma0 on the interior
  bool vacuous = false;
  ExtReal lhs = ExtReal::plus_inf();
  ExtReal rhs = ExtReal::minus_inf();
  bool holds = false;
};

InteriorEqualityReport interior_equality(const BifunctionFamily& fam, double tol = 1e-9);

struct MonotoneReport {
  ExtReal lhs = ExtReal::plus_inf();
  ExtReal rhs = ExtReal::minus_inf();
  bool holds = false;
  bool non_decreasing = false;
  ExtReal lhs_plain = ExtReal::plus_inf();
  ExtReal rhs_plain = ExtReal::minus_inf();
  bool plain_holds = true;
};

/// Tail-infimum minimax identity over a finite sequence on a compact grid
/// (closure is the identity there); the plain identity is additionally
/// asserted for non-decreasing sequences.
MonotoneReport monotone_minimax(const FunctionSequence& seq);

struct MarginalReport {
  bool convex_ok = false;
  int density_used = 0;
  std::size_t dual_nodes = 0;
  bool lp_polish = false;
};

/// Discrete convexity of the marginal y* -> min over probed lambda of
/// (f(lambda, .))*(y*). Mesh refinement doubles the density; if the cap is
/// reached the probe set is augmented with the exact per-node minimizers
/// obtained from the dual LP.
MarginalReport marginal_check(const BifunctionFamily& fam, int initial_density = 8,
                              int max_density = 64, double tol = 1e-6);

}  // namespace mmx
