#pragma once

#include <functional>
#include <string>
#include <vector>

namespace deadoil {

// Scalar coefficient triple (phi, g, d) of the saturation/pressure system
// together with the analytic derivatives the solvers and adjoint need and the
// declared bound constants they are supposed to respect on the compact
// validity interval:
//   c1 <= d, g, phi <= c2        c3 <= d', phi', phi'' <= c4       |phi'''| <= c_h3
struct CoefficientModel {
  std::string name;

  std::function<double(double)> phi, dphi, d2phi, d3phi;
  std::function<double(double)> g, dg, d2g;
  std::function<double(double)> d, dd;

  double c1 = 0.0, c2 = 0.0;  // value bounds
  double c3 = 0.0, c4 = 0.0;  // derivative bounds
  double c_h3 = 0.0;          // third-derivative bound for phi
  double validity_lo = 0.0, validity_hi = 0.0;
};

// Built-in models:
//   smooth_bounded        tanh-shaped d and g, strictly convex cubic phi;
//                         satisfies every declared bound on [-2,2]
//   verification_constant d = 1, g = 0, phi(r) = r (decoupled Poisson case)
//   verification_linear_phi d = 1, g = 1, phi(r) = r (linear coupled case)
CoefficientModel builtin_model(const std::string& name);

// Model from polynomial coefficient lists (constant term first, degree <= 6).
// Derivatives are formed from the coefficients; bound constants are taken as
// the sampled extrema over the validity interval.
CoefficientModel polynomial_model(const std::vector<double>& phi_coeffs,
                                  const std::vector<double>& g_coeffs,
                                  const std::vector<double>& d_coeffs,
                                  double validity_lo, double validity_hi);

struct BoundsRow {
  std::string quantity;  // e.g. "g", "phi''", "|phi'''|"
  std::string relation;  // e.g. "c1 <= g", "phi'' <= c4"
  double observed = 0.0; // the extremum compared against the bound
  double bound = 0.0;
  bool pass = false;
};

struct DerivativeCheckRow {
  std::string pair;  // e.g. "phi' vs FD(phi)"
  double max_rel_err = 0.0;
  bool pass = false;
};

struct BoundsReport {
  std::string model;
  int samples = 0;
  std::vector<BoundsRow> rows;
  std::vector<DerivativeCheckRow> derivative_rows;
  bool all_pass = false;
};

// Samples the model on an equispaced sweep of its validity interval, tags each
// declared bound pass/fail, and cross-checks every analytic derivative against
// a 4th-order central difference of its primitive. Advisory: callers decide
// what to do with failures.
BoundsReport validate_bounds(const CoefficientModel& m, int samples);

}  // namespace deadoil
