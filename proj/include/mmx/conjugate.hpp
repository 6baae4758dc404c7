#pragma once

#include <string>
#include <vector>

#include "mmx/grid.hpp"
#include "mmx/pwl.hpp"

namespace mmx {

/// Legendre-Fenchel conjugate f*(s) = sup_x { s*x - f(x) }, exact for PWL
/// inputs and total: a function taking -inf anywhere conjugates to +inf,
/// and the conjugate of the constant +inf is the constant -inf.
PwlFunction conjugate(const PwlFunction& f);

/// Brute-force discrete transform over the sampled primal nodes: the
/// independent oracle for conjugate(). 1-D only.
GridFunction conjugate_grid(const GridFunction& f, std::vector<double> dual_axis);

/// conjugate(conjugate(f)), restricted to the primal axis.
PwlFunction biconjugate(const PwlFunction& f);

struct IdentityReport {
  std::string identity;
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  bool holds = false;
  double max_discrepancy = 0.0;
};

/// f** = cl co f when cl co f is proper; additionally f** = f on Gamma0
/// inputs. When the hull is improper the hypothesis fails and nothing is
/// asserted.
IdentityReport check_moreau(const PwlFunction& f, double tol = 1e-9);

/// (inf_k f_k)* = sup_k f_k*, unconditionally.
IdentityReport conj_of_inf(std::span<const PwlFunction> family, double tol = 1e-9);

/// (sup_k f_k)* = cl co (inf_k f_k*), under f_k and sup f_k in Gamma0.
IdentityReport conj_of_sup(std::span<const PwlFunction> family, double tol = 1e-9);

/// Pasch-Hausdorff envelope inf_x { R|x0 - x| + f(x) }.
ExtReal lipschitz_envelope(const PwlFunction& f, double radius, double x0);
ExtReal lipschitz_envelope(const GridFunction& f, double radius, double x0);

}  // namespace mmx
