#pragma once

#include "deadoil/coefficients.hpp"
#include "deadoil/grid.hpp"
#include "deadoil/linalg.hpp"

#include <utility>

namespace deadoil {

// Saturation/pressure pair on a common grid.
struct StateSolution {
  Field u;
  Field p;
};

bool within_validity(const CoefficientModel& m, const StateSolution& s);

// Flux-form diffusion operator L_a = -div_h(a grad_h .) for a nodal
// coefficient field: the face value is the arithmetic mean of the two
// adjacent nodal values, and faces on the boundary use a_boundary for the
// missing node. Symmetric by construction, SPD when a > 0.
SparseMatrix assemble_flux_operator(const Field& a, double a_boundary);

// Standard 5-point Laplacian (zero Dirichlet ghost values).
SparseMatrix assemble_laplacian(const Grid& g);

// Nodal central-difference gradient, boundary values taken as zero.
std::pair<Field, Field> nodal_gradient(const Field& v);

// Residual of the coupled steady system
//   F1 = -Lap_h phi(u) - div_h(g(u) grad_h p) - s1
//   F2 = -div_h(d(u) grad_h p) - f
// where -Lap_h phi(u) is the 5-point Laplacian applied to the nodal field
// phi(u) with ghost value phi(0), and the divergence terms are flux-form with
// arithmetic face means (boundary nodes carry g(0), d(0)). The optional
// sat_source s1 exists only for the manufactured-solution harness.
std::pair<Field, Field> state_residual(const CoefficientModel& m,
                                       const StateSolution& s, const Field& f,
                                       const Field* sat_source = nullptr);

// Jacobian of the discrete residual with respect to the stacked unknowns
// (saturation direction e first, pressure direction w second).
//
// The phi block is the exact chain-rule derivative Lap_h(phi'(u) e): per face
// it splits into the phi'-face-mean flux of e plus the e-face-mean times the
// difference of nodal phi' values, so both continuous derivative terms
// -div(phi' grad e) and -div(phi'' e grad u) are present in flux form. The
// coefficient couplings -div(g'(u) e grad p) and -div(d'(u) e grad p) carry
// face values equal to the arithmetic mean of the nodal products, which is
// exactly the derivative of the residual's face means.
//
// dF2/df = -identity is kept as the flag below instead of stored entries.
struct LinearizedOperator {
  SparseMatrix op;  // 2N x 2N
  bool control_block_is_negative_identity = true;
};

LinearizedOperator assemble_linearized(const CoefficientModel& m,
                                       const StateSolution& s);

// Adjoint operator in the form the optimality system is usually written:
// acting on stacked (e1, p1),
//   row 1:  div(phi'(u) grad e1) - phi''(u) grad u . grad e1
//           - g'(u) grad p . grad e1 - d'(u) grad p . grad p1
//   row 2:  div(g(u) grad e1) + div(d(u) grad p1)
// with the advection-like products using nodal central differences. This is
// an independent discretization of the transposed linearization (up to sign:
// it approaches -transpose(assemble_linearized) under refinement), which the
// verification suite exploits as a consistency check.
SparseMatrix assemble_adjoint_continuous(const CoefficientModel& m,
                                    const StateSolution& s);

}  // namespace deadoil
