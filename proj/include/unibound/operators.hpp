#pragma once

#include <string>
#include <vector>

#include "unibound/eigensolve.hpp"
#include "unibound/spectrum.hpp"

namespace unibound {

/// Sparse symmetric discretization with its grid. Interior unknowns are
/// ordered with axis 0 fastest.
struct DiscreteOperator {
  SparseMatrix matrix;
  std::vector<double> extents;
  std::vector<int> points;
  std::vector<double> spacing;
  std::string stencil;  // "fd-laplacian", "fd-clamped", "fd-kohn"
  Problem problem = Problem::euclidean_polyharmonic;
  int n = 1;  // Euclidean dimension, or Heisenberg n
  int l = 1;  // power realized by the stencil itself
};

/// First `count` Dirichlet-Laplacian eigenvalues pi^2 sum_j (p_j/a_j)^2 of a
/// box, with multiplicity.
SpectrumPrefix box_spectrum(const std::vector<double>& sides, int count);

/// Second-order central-difference -Delta with Dirichlet conditions,
/// h_j = a_j / (N_j + 1).
DiscreteOperator fd_laplacian(const std::vector<double>& sides, const std::vector<int>& grid);

/// (sum_j L_j)^2 stencil (13 points in 2D) for Delta^2 with u = du/dnu = 0;
/// the ghost value beyond the boundary mirrors the first interior value.
DiscreteOperator fd_clamped_plate(const std::vector<double>& sides, const std::vector<int>& grid);

/// Skew-symmetric discretizations of X = d/dx + (y/2) d/dt, Y = d/dy - (x/2) d/dt
/// and T = d/dt on the box [-a/2, a/2] x [-b/2, b/2] x [-c/2, c/2] (n = 1).
struct KohnFields {
  SparseMatrix X, Y, T;
  DiscreteOperator laplacian;  // X^T X + Y^T Y
};

KohnFields kohn_fd(int n, const std::vector<double>& sides, const std::vector<int>& grid);

/// max |([Y,X] - T) phi| / max |T phi| over grid indices 1..N-2 on every
/// axis, for phi the product of the first Dirichlet sine modes on a cube of
/// side `side` with N points per axis.
double kohn_commutator_residual(double side, int N);

/// Eigenvalues of the operator raised to the l-th power, ascending. For
/// l > 1 on the Laplacian stencil the label is "navier-power" (powers of a
/// Dirichlet discretization realize Navier, not clamped, conditions).
SpectrumPrefix operator_power_spectrum(const DiscreteOperator& op, int l, int count,
                                       const SmallestEigsOptions& options = {});

}  // namespace unibound
