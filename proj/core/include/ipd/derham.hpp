#pragma once

// Algebraic de Rham cohomology of (O, nabla) on U = P^1 - D computed as the
// cokernel of nabla between finite lattices of sections and forms.

#include <memory>
#include <string>
#include <vector>

#include "ipd/connection.hpp"

namespace ipd {

struct PointBound {
  Point point;
  int section_order = 0;  // largest pole order of sections
  int form_order = 0;     // largest pole order of forms
};

struct LatticeBounds {
  std::vector<PointBound> points;  // same order as the singular set

  /// Section bounds doubled; form bounds recomputed from the new section bounds.
  LatticeBounds doubled(const Connection& c) const;
  friend bool operator==(const LatticeBounds& a, const LatticeBounds& b);
};

/// Section bound m + 2 (pushed up to a positive integer residue at simple
/// poles), form bound section bound + max(m, 1).
LatticeBounds default_lattice_bounds(const Connection& c);

class LatticeReducer;

struct CohomologyBasis {
  int h0_dim = 0;
  int h1_dim = 0;
  std::vector<RationalFunction> basis_forms;
  LatticeBounds bounds;
  std::shared_ptr<const LatticeReducer> reducer;
};

/// 1 iff exp(-integral of alpha) is a rational function.
int h0_dimension(const Connection& c);

/// Cohomology at default bounds, certified by stability under enlargement.
CohomologyBasis h1_basis(const Connection& c);
/// Cohomology at the given bounds, no stability check.
CohomologyBasis h1_basis_at(const Connection& c, const LatticeBounds& bounds);

/// Coordinates v with form = sum v_i basis_i + nabla(g) for a lattice section g.
std::vector<ExactScalar> reduce_form(const Connection& c, const CohomologyBasis& basis, const RationalFunction& form);
std::vector<ExactScalar> reduce_form(const Connection& c, const RationalFunction& form);

/// nabla(g) = g' + alpha g, as a dz-coefficient.
RationalFunction apply_connection(const Connection& c, const RationalFunction& g);

/// Monomial / partial-fraction basis of the section lattice.
std::vector<RationalFunction> lattice_section_basis(const Connection& c, const LatticeBounds& bounds);

struct PoleBlock {
  int pole_order = 0;
  int dim = 1;
};

struct EulerCharacteristics {
  long chi_dr = 0;
  long chi_top = 0;
  /// Some point carries m = 0; the lattice formula does not apply there.
  bool non_reduced_divisor = false;
};

/// chi_dR = -rk(2g-2) - sum m dimM, chi_top = -rk(2g-2+n) with n = blocks.size().
EulerCharacteristics euler_characteristics(int rank, int genus, const std::vector<std::vector<PoleBlock>>& blocks);
EulerCharacteristics euler_characteristics(const Connection& c);

}  // namespace ipd
