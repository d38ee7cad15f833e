#include "deadoil/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace deadoil {

Grid create_grid(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("create_grid: nx and ny must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("create_grid: lx and ly must be positive");
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.hx = lx / (nx + 1);
  g.hy = ly / (ny + 1);
  return g;
}

Field::Field(const Grid& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("Field: value count does not match grid size");
}

Field field_from(const Grid& g, const std::function<double(double, double)>& fn) {
  Field out(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) out(i, j) = fn(g.x(i), g.y(j));
  return out;
}

double lp_power_norm(const Field& v, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("lp_power_norm: r must be >= 1");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < v.values.size(); ++k)
    acc += std::pow(std::abs(v.values[k]), r);
  return v.grid.cell_weight() * acc;
}

static void require_same_grid(const Field& a, const Field& b, const char* who) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner_product");
  return a.grid.cell_weight() * a.values.dot(b.values);
}

double l2_norm(const Field& v) { return std::sqrt(lp_power_norm(v, 2.0)); }

double linf_norm(const Field& v) {
  return v.values.size() == 0 ? 0.0 : v.values.cwiseAbs().maxCoeff();
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b, "operator+");
  return Field(a.grid, a.values + b.values);
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b, "operator-");
  return Field(a.grid, a.values - b.values);
}

Field operator*(double s, const Field& a) { return Field(a.grid, s * a.values); }

Field gaussian_bump(const Grid& g, double cx, double cy, double radius,
                    double amplitude) {
  if (!(radius > 0.0)) throw std::invalid_argument("gaussian_bump: radius must be positive");
  return field_from(g, [=](double x, double y) {
    const double dx = x - cx, dy = y - cy;
    return amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * radius * radius));
  });
}

Field sinusoid(const Grid& g, int kx, int ky, double amplitude) {
  if (kx < 1 || ky < 1) throw std::invalid_argument("sinusoid: wave numbers must be >= 1");
  const double ax = kx * M_PI / g.lx, ay = ky * M_PI / g.ly;
  return field_from(g, [=](double x, double y) {
    return amplitude * std::sin(ax * x) * std::sin(ay * y);
  });
}

void write_field_csv(const Field& f, std::ostream& os) {
  char buf[96];
  os << "x,y,value\n";
  const Grid& g = f.grid;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), g.y(j), f(i, j));
      os << buf;
    }
}

void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  write_field_csv(f, os);
}

Field read_field_csv(const Grid& g, std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,y,value")
    throw std::runtime_error("read_field_csv: missing 'x,y,value' header");
  Field out(g);
  int row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (row >= g.size())
      throw std::runtime_error("read_field_csv: more rows than grid nodes");
    double x = 0, y = 0, v = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
      throw std::runtime_error("read_field_csv: malformed row '" + line + "'");
    const int i = row / g.ny, j = row % g.ny;
    if (std::abs(x - g.x(i)) > 1e-12 * (1.0 + g.lx) ||
        std::abs(y - g.y(j)) > 1e-12 * (1.0 + g.ly))
      throw std::runtime_error("read_field_csv: node coordinates do not match grid");
    out.values[row] = v;
    ++row;
  }
  if (row != g.size())
    throw std::runtime_error("read_field_csv: fewer rows than grid nodes");
  return out;
}

Field read_field_csv(const Grid& g, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_field_csv: cannot open " + path);
  return read_field_csv(g, is);
}

}  // namespace deadoil
