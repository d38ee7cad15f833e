#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deadoil/grid.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace deadoil;

namespace {
Field constant_field(const Grid& g, double v) {
  return field_from(g, [&](double, double) { return v; });
}
}  // namespace

TEST_CASE("grid geometry on the unit square") {
  Grid g = create_grid(3, 3, 1.0, 1.0);
  CHECK(g.hx == doctest::Approx(0.25));
  CHECK(g.hy == doctest::Approx(0.25));
  CHECK(g.size() == 9);
  // interior nodes only: first node sits one spacing inside the boundary
  CHECK(g.x(0) == doctest::Approx(0.25));
  CHECK(g.y(2) == doctest::Approx(0.75));
  CHECK(g.cell_weight() == doctest::Approx(1.0 / 16.0));
  // row-major with the second index fastest
  CHECK(g.index(0, 0) == 0);
  CHECK(g.index(0, 2) == 2);
  CHECK(g.index(1, 0) == 3);
  CHECK(g.index(2, 2) == 8);
}

TEST_CASE("grid geometry on a rectangle") {
  Grid g = create_grid(4, 2, 2.0, 1.0);
  CHECK(g.hx == doctest::Approx(0.4));
  CHECK(g.hy == doctest::Approx(1.0 / 3.0));
  CHECK(g.size() == 8);
  CHECK(g.cell_weight() == doctest::Approx(0.4 / 3.0));
  CHECK(g.x(3) == doctest::Approx(1.6));
  CHECK(g.y(1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("power norm against hand-computed values") {
  Grid g = create_grid(3, 3, 1.0, 1.0);
  Field ones = constant_field(g, 1.0);
  Field twos = constant_field(g, 2.0);
  // sum of 9 cells of weight 1/16
  CHECK(lp_power_norm(ones, 1.0) == doctest::Approx(0.5625));
  CHECK(lp_power_norm(ones, 2.0) == doctest::Approx(0.5625));
  CHECK(lp_power_norm(twos, 1.0) == doctest::Approx(1.125));
  CHECK(lp_power_norm(twos, 2.0) == doctest::Approx(2.25));
  CHECK(lp_power_norm(twos, 3.0) == doctest::Approx(4.5));
  CHECK(l2_norm(twos) == doctest::Approx(1.5));
  CHECK(linf_norm(twos) == doctest::Approx(2.0));
  CHECK_THROWS(lp_power_norm(ones, 0.5));
}

TEST_CASE("power norm homogeneity and inner product bilinearity") {
  Grid g = create_grid(5, 4, 1.5, 0.7);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Field a(g), b(g), c(g);
  for (int k = 0; k < g.size(); ++k) {
    a.values[k] = unif(rng);
    b.values[k] = unif(rng);
    c.values[k] = unif(rng);
  }
  const double r = 1.7, alpha = -2.3;
  CHECK(lp_power_norm(alpha * a, r) ==
        doctest::Approx(std::pow(std::abs(alpha), r) * lp_power_norm(a, r)));
  CHECK(inner_product(a + b, c) ==
        doctest::Approx(inner_product(a, c) + inner_product(b, c)));
  CHECK(inner_product(alpha * a, b) ==
        doctest::Approx(alpha * inner_product(a, b)));
  CHECK(inner_product(a, b) == doctest::Approx(inner_product(b, a)));
  CHECK(l2_norm(a) == doctest::Approx(std::sqrt(inner_product(a, a))));
}

TEST_CASE("analytic profiles take their defining values") {
  Grid g = create_grid(3, 3, 1.0, 1.0);
  Field bump = gaussian_bump(g, 0.5, 0.5, 0.1, 2.5);
  CHECK(bump(1, 1) == doctest::Approx(2.5));  // center node
  // one node away: exp(-(0.25^2) / (2 * 0.1^2))
  CHECK(bump(0, 1) == doctest::Approx(2.5 * std::exp(-0.0625 / 0.02)));
  Field wave = sinusoid(g, 1, 1, 0.3);
  CHECK(wave(1, 1) == doctest::Approx(0.3));
  CHECK(wave(0, 0) == doctest::Approx(0.3 * 0.5));  // sin(pi/4)^2 = 1/2
  CHECK_THROWS(sinusoid(g, 0, 1, 1.0));
}

TEST_CASE("csv round trip is bit exact") {
  Grid g = create_grid(7, 5, 1.25, 0.75);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  Field f(g);
  for (int k = 0; k < g.size(); ++k) f.values[k] = unif(rng);
  f.values[3] = 1.0 / 3.0;  // not representable exactly in decimal

  std::stringstream ss;
  write_field_csv(f, ss);
  Field back = read_field_csv(g, ss);
  for (int k = 0; k < g.size(); ++k) CHECK(back.values[k] == f.values[k]);

  // writing again produces byte-identical text
  std::stringstream ss2, ss3;
  write_field_csv(f, ss2);
  write_field_csv(back, ss3);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("csv reader rejects malformed input") {
  Grid g = create_grid(2, 2, 1.0, 1.0);
  {
    std::stringstream ss("nope\n");
    CHECK_THROWS(read_field_csv(g, ss));
  }
  {
    std::stringstream ss("x,y,value\n0.3333333333333333,0.3333333333333333,1\n");
    CHECK_THROWS(read_field_csv(g, ss));  // too few rows
  }
  {
    // right length, wrong coordinates
    std::stringstream ss;
    Field f(g);
    write_field_csv(f, ss);
    Grid shifted = create_grid(2, 2, 2.0, 1.0);
    CHECK_THROWS(read_field_csv(shifted, ss));
  }
}

TEST_CASE("field arithmetic matches nodewise evaluation") {
  Grid g = create_grid(3, 2, 1.0, 1.0);
  Field a = field_from(g, [](double x, double y) { return x + y; });
  Field b = field_from(g, [](double x, double y) { return x * y; });
  Field s = a + (-2.0) * b;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      CHECK(s(i, j) ==
            doctest::Approx(g.x(i) + g.y(j) - 2.0 * g.x(i) * g.y(j)));
  Field d = a - b;
  CHECK(d(2, 1) == doctest::Approx(a(2, 1) - b(2, 1)));
  CHECK(a.finite());
}
