#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>

namespace deadoil {

// Uniform tensor grid on the rectangle [0,lx] x [0,ly]. Only interior nodes
// carry unknowns; every field is understood to vanish on the boundary, so the
// node (i,j) with 0 <= i < nx, 0 <= j < ny sits at ((i+1)*hx, (j+1)*hy) with
// hx = lx/(nx+1), hy = ly/(ny+1).
struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  double hx = 0.0;
  double hy = 0.0;

  int size() const { return nx * ny; }
  // Row-major over (i,j): i is the slow index.
  int index(int i, int j) const { return i * ny + j; }
  double x(int i) const { return (i + 1) * hx; }
  double y(int j) const { return (j + 1) * hy; }
  // Weight of the nodal quadrature rule (one cell per interior node).
  double cell_weight() const { return hx * hy; }

  bool operator==(const Grid&) const = default;
};

Grid create_grid(int nx, int ny, double lx, double ly);

// Scalar field sampled at the interior nodes of a grid, stored row-major
// over (i,j). The boundary trace is structurally zero and not stored.
struct Field {
  Grid grid;
  Eigen::VectorXd values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(Eigen::VectorXd::Zero(g.size())) {}
  Field(const Grid& g, Eigen::VectorXd v);

  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
  bool finite() const { return values.allFinite(); }
};

// Samples a callable (x,y) -> value at the interior nodes.
Field field_from(const Grid& g, const std::function<double(double, double)>& fn);

// Nodal quadrature of |v|^r over the rectangle, i.e. the r-th power of the
// discrete L^r norm. Exact for the nodal rule itself; as an approximation of
// the continuum integral it carries the usual O(h^2) quadrature error for
// smooth v. Requires r >= 1.
double lp_power_norm(const Field& v, double r);

// Discrete L^2 pairing sum_ij hx*hy*a_ij*b_ij. Grids must match exactly.
double inner_product(const Field& a, const Field& b);

// sqrt(lp_power_norm(v, 2))
double l2_norm(const Field& v);
double linf_norm(const Field& v);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

// Named analytic profiles used for sources and targets.
Field gaussian_bump(const Grid& g, double cx, double cy, double radius,
                    double amplitude);
Field sinusoid(const Grid& g, int kx, int ky, double amplitude);

// CSV exchange format: header "x,y,value", one row per interior node in
// row-major order, every number printed with 17 significant digits so a
// write/read cycle reproduces the doubles bit for bit.
void write_field_csv(const Field& f, std::ostream& os);
void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const Grid& g, std::istream& is);
Field read_field_csv(const Grid& g, const std::string& path);

}  // namespace deadoil
