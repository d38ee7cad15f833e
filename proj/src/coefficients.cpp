#include "deadoil/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace deadoil {

namespace {

double sech2(double r) {
  const double t = std::tanh(r);
  return 1.0 - t * t;
}

CoefficientModel smooth_bounded() {
  CoefficientModel m;
  m.name = "smooth_bounded";
  m.d = [](double r) { return 1.0 + 0.5 * std::tanh(r); };
  m.dd = [](double r) { return 0.5 * sech2(r); };
  m.g = [](double r) { return 1.0 + 0.25 * std::tanh(r); };
  m.dg = [](double r) { return 0.25 * sech2(r); };
  m.d2g = [](double r) { return -0.5 * sech2(r) * std::tanh(r); };
  // Strictly convex cubic: phi'' = 0.3 + 0.12 r stays in [0.06, 0.54] and
  // phi stays positive on [-2, 2].
  m.phi = [](double r) { return 2.5 + r + 0.15 * r * r + 0.02 * r * r * r; };
  m.dphi = [](double r) { return 1.0 + 0.3 * r + 0.06 * r * r; };
  m.d2phi = [](double r) { return 0.3 + 0.12 * r; };
  m.d3phi = [](double) { return 0.12; };
  m.c1 = 0.5;
  m.c2 = 5.5;
  m.c3 = 0.03;
  m.c4 = 2.0;
  m.c_h3 = 0.15;
  m.validity_lo = -2.0;
  m.validity_hi = 2.0;
  return m;
}

CoefficientModel verification_constant() {
  CoefficientModel m;
  m.name = "verification_constant";
  m.d = [](double) { return 1.0; };
  m.dd = [](double) { return 0.0; };
  m.g = [](double) { return 0.0; };
  m.dg = [](double) { return 0.0; };
  m.d2g = [](double) { return 0.0; };
  m.phi = [](double r) { return r; };
  m.dphi = [](double) { return 1.0; };
  m.d2phi = [](double) { return 0.0; };
  m.d3phi = [](double) { return 0.0; };
  m.c1 = 1.0;
  m.c2 = 2.0;
  m.c3 = 0.5;
  m.c4 = 1.0;
  m.c_h3 = 1.0;
  m.validity_lo = -2.0;
  m.validity_hi = 2.0;
  return m;
}

CoefficientModel verification_linear_phi() {
  CoefficientModel m = verification_constant();
  m.name = "verification_linear_phi";
  m.g = [](double) { return 1.0; };
  return m;
}

double polyval(const std::vector<double>& c, double r) {
  double acc = 0.0;
  for (size_t k = c.size(); k-- > 0;) acc = acc * r + c[k];
  return acc;
}

std::vector<double> polyder(const std::vector<double>& c) {
  std::vector<double> d;
  for (size_t k = 1; k < c.size(); ++k) d.push_back(k * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

}  // namespace

CoefficientModel builtin_model(const std::string& name) {
  if (name == "smooth_bounded") return smooth_bounded();
  if (name == "verification_constant") return verification_constant();
  if (name == "verification_linear_phi") return verification_linear_phi();
  throw std::invalid_argument("builtin_model: unknown model '" + name + "'");
}

CoefficientModel polynomial_model(const std::vector<double>& phi_coeffs,
                                  const std::vector<double>& g_coeffs,
                                  const std::vector<double>& d_coeffs,
                                  double validity_lo, double validity_hi) {
  for (const auto* c : {&phi_coeffs, &g_coeffs, &d_coeffs}) {
    if (c->empty() || c->size() > 7)
      throw std::invalid_argument("polynomial_model: coefficient lists must have degree <= 6");
  }
  if (!(validity_lo < validity_hi))
    throw std::invalid_argument("polynomial_model: empty validity interval");

  CoefficientModel m;
  m.name = "polynomial";
  m.validity_lo = validity_lo;
  m.validity_hi = validity_hi;
  const auto bind = [](std::vector<double> c) {
    return [c = std::move(c)](double r) { return polyval(c, r); };
  };
  const auto dphi_c = polyder(phi_coeffs), d2phi_c = polyder(dphi_c);
  const auto dg_c = polyder(g_coeffs);
  m.phi = bind(phi_coeffs);
  m.dphi = bind(dphi_c);
  m.d2phi = bind(d2phi_c);
  m.d3phi = bind(polyder(d2phi_c));
  m.g = bind(g_coeffs);
  m.dg = bind(dg_c);
  m.d2g = bind(polyder(dg_c));
  m.d = bind(d_coeffs);
  m.dd = bind(polyder(d_coeffs));

  // Declared constants from a dense sweep; validate_bounds then re-observes
  // them, so a polynomial model is consistent with itself by construction.
  const int n = 10000;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  double smin = vmin, smax = -vmin, h3 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = validity_lo + (validity_hi - validity_lo) * k / n;
    for (double v : {m.d(r), m.g(r), m.phi(r)}) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    for (double s : {m.dd(r), m.dphi(r), m.d2phi(r)}) {
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    h3 = std::max(h3, std::abs(m.d3phi(r)));
  }
  m.c1 = vmin;
  m.c2 = vmax;
  m.c3 = smin;
  m.c4 = smax;
  m.c_h3 = h3;
  return m;
}

namespace {

// 4th-order central difference used to cross-check the analytic derivatives.
double fd4(const std::function<double(double)>& f, double r, double h) {
  return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h);
}

}  // namespace

BoundsReport validate_bounds(const CoefficientModel& m, int samples) {
  if (samples < 2) throw std::invalid_argument("validate_bounds: need at least 2 samples");
  BoundsReport rep;
  rep.model = m.name;
  rep.samples = samples;

  const double lo = m.validity_lo, hi = m.validity_hi;
  auto sweep_min = [&](const std::function<double(double)>& f) {
    double v = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k)
      v = std::min(v, f(lo + (hi - lo) * k / (samples - 1)));
    return v;
  };
  auto sweep_max = [&](const std::function<double(double)>& f) {
    double v = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k)
      v = std::max(v, f(lo + (hi - lo) * k / (samples - 1)));
    return v;
  };

  auto lower = [&](const std::string& q, const std::function<double(double)>& f,
                   double bound, const std::string& bname) {
    const double obs = sweep_min(f);
    rep.rows.push_back({q, bname + " <= " + q, obs, bound, obs >= bound});
  };
  auto upper = [&](const std::string& q, const std::function<double(double)>& f,
                   double bound, const std::string& bname) {
    const double obs = sweep_max(f);
    rep.rows.push_back({q, q + " <= " + bname, obs, bound, obs <= bound});
  };

  lower("d", m.d, m.c1, "c1");
  lower("g", m.g, m.c1, "c1");
  lower("phi", m.phi, m.c1, "c1");
  upper("d", m.d, m.c2, "c2");
  upper("g", m.g, m.c2, "c2");
  upper("phi", m.phi, m.c2, "c2");
  lower("d'", m.dd, m.c3, "c3");
  lower("phi'", m.dphi, m.c3, "c3");
  lower("phi''", m.d2phi, m.c3, "c3");
  upper("d'", m.dd, m.c4, "c4");
  upper("phi'", m.dphi, m.c4, "c4");
  upper("phi''", m.d2phi, m.c4, "c4");
  upper("|phi'''|", [&](double r) { return std::abs(m.d3phi(r)); }, m.c_h3, "c_h3");

  // Derivative consistency at equispaced interior points, 4th-order stencil.
  // Small enough that the h^4 truncation clears the tolerance with two
  // orders to spare, large enough that cancellation stays near roundoff.
  const double fd_h = 1e-3 * std::max(1.0, hi - lo);
  const int pts = 100;
  auto deriv_row = [&](const std::string& label,
                       const std::function<double(double)>& prim,
                       const std::function<double(double)>& der) {
    double worst = 0.0;
    for (int k = 0; k < pts; ++k) {
      const double r = lo + (hi - lo) * (k + 0.5) / pts;
      const double fd = fd4(prim, r, fd_h);
      const double an = der(r);
      worst = std::max(worst, std::abs(an - fd) / std::max(1.0, std::abs(an)));
    }
    rep.derivative_rows.push_back({label, worst, worst <= 1e-8});
  };
  deriv_row("phi' vs FD(phi)", m.phi, m.dphi);
  deriv_row("phi'' vs FD(phi')", m.dphi, m.d2phi);
  deriv_row("phi''' vs FD(phi'')", m.d2phi, m.d3phi);
  deriv_row("g' vs FD(g)", m.g, m.dg);
  deriv_row("g'' vs FD(g')", m.dg, m.d2g);
  deriv_row("d' vs FD(d)", m.d, m.dd);

  rep.all_pass = true;
  for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
  for (const auto& r : rep.derivative_rows) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

}  // namespace deadoil
