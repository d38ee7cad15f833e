#include "deadoil/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace deadoil {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
    fail(line, key + ": expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE ||
      v > 1000000000L || v < -1000000000L)
    fail(line, key + ": expected an integer, got '" + tok + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& val, int line,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split_ws(val)) out.push_back(parse_double(tok, line, key));
  if (out.empty()) fail(line, key + ": expected at least one number");
  return out;
}

std::vector<int> parse_int_list(const std::string& val, int line,
                                const std::string& key) {
  std::vector<int> out;
  for (const auto& tok : split_ws(val)) out.push_back(parse_int(tok, line, key));
  if (out.empty()) fail(line, key + ": expected at least one integer");
  return out;
}

SourceSpec parse_source(const std::string& val, int line,
                        const std::string& key) {
  auto toks = split_ws(val);
  if (toks.empty()) fail(line, key + ": empty profile");
  SourceSpec s;
  const std::string& kind = toks[0];
  auto arity = [&](size_t n) {
    if (toks.size() != n + 1)
      fail(line, key + ": profile '" + kind + "' takes " + std::to_string(n) +
                     " argument(s), got " + std::to_string(toks.size() - 1));
  };
  if (kind == "zero") {
    arity(0);
    s.kind = SourceSpec::Kind::zero;
  } else if (kind == "constant") {
    arity(1);
    s.kind = SourceSpec::Kind::constant;
    s.value = parse_double(toks[1], line, key);
  } else if (kind == "gaussian_bump") {
    arity(4);
    s.kind = SourceSpec::Kind::gaussian_bump;
    s.cx = parse_double(toks[1], line, key);
    s.cy = parse_double(toks[2], line, key);
    s.radius = parse_double(toks[3], line, key);
    s.amplitude = parse_double(toks[4], line, key);
    if (s.radius <= 0) fail(line, key + ": gaussian_bump radius must be > 0");
  } else if (kind == "sinusoid") {
    arity(3);
    s.kind = SourceSpec::Kind::sinusoid;
    s.kx = parse_int(toks[1], line, key);
    s.ky = parse_int(toks[2], line, key);
    s.amplitude = parse_double(toks[3], line, key);
    if (s.kx < 1 || s.ky < 1)
      fail(line, key + ": sinusoid mode numbers must be >= 1");
  } else if (kind == "file") {
    arity(1);
    s.kind = SourceSpec::Kind::file;
    s.path = toks[1];
  } else {
    fail(line, key + ": unknown profile kind '" + kind +
                   "' (expected zero, constant, gaussian_bump, sinusoid, file)");
  }
  return s;
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"grid", {"nx", "ny", "lx", "ly"}},
    {"model",
     {"name", "phi_coeffs", "g_coeffs", "d_coeffs", "validity"}},
    {"control",
     {"beta1", "q0", "eps_smooth", "f", "target", "target_control", "target_u",
      "target_p", "target_u_file", "target_p_file"}},
    {"solver",
     {"method", "tol_nonlinear", "maxit_nonlinear", "tol_linear",
      "maxit_linear", "armijo_c", "armijo_shrink", "min_step", "dense_cap",
      "max_outer", "tol_stationarity", "step0", "adjoint_mode"}},
    {"output", {"directory"}},
    {"verify",
     {"cases", "pressure_grids", "coupled_grids", "adjoint_grids",
      "taylor_grid", "taylor_samples", "gradient_grid", "gradient_samples"}},
};

[[noreturn]] void bad_value(const std::string& dotted, const std::string& why) {
  throw ConfigError("config: " + dotted + " " + why);
}

void check_positive(double v, const std::string& dotted) {
  if (!(v > 0)) bad_value(dotted, "must be > 0");
}

void validate(const RunConfig& c, bool saw_nx, bool saw_ny) {
  if (!saw_nx) throw ConfigError("config: grid.nx is required");
  if (!saw_ny) throw ConfigError("config: grid.ny is required");
  if (c.nx < 1) bad_value("grid.nx", "must be >= 1");
  if (c.ny < 1) bad_value("grid.ny", "must be >= 1");
  check_positive(c.lx, "grid.lx");
  check_positive(c.ly, "grid.ly");

  bool poly = c.model_name == "polynomial";
  if (!poly && c.model_name != "smooth_bounded" &&
      c.model_name != "verification_constant" &&
      c.model_name != "verification_linear_phi")
    bad_value("model.name", "must be one of smooth_bounded, "
              "verification_constant, verification_linear_phi, polynomial");
  if (poly) {
    if (c.phi_coeffs.empty() || c.g_coeffs.empty() || c.d_coeffs.empty())
      throw ConfigError(
          "config: model.name = polynomial requires model.phi_coeffs, "
          "model.g_coeffs, and model.d_coeffs");
    if (!(c.validity_lo < c.validity_hi))
      bad_value("model.validity", "must be an increasing pair lo hi");
  } else if (!c.phi_coeffs.empty() || !c.g_coeffs.empty() ||
             !c.d_coeffs.empty()) {
    throw ConfigError(
        "config: model coefficient lists require model.name = polynomial");
  }

  check_positive(c.beta1, "control.beta1");
  if (!(c.q0 > 1.0 && c.q0 < 2.0))
    bad_value("control.q0", "must lie in the open interval (1, 2)");
  if (c.eps_smooth < 0) bad_value("control.eps_smooth", "must be >= 0");

  using TK = RunConfig::TargetKind;
  if (c.target == TK::profiles) {
    // target_u/target_p default to zero profiles, which is allowed
  } else if (c.target == TK::files) {
    if (c.target_u_file.empty() || c.target_p_file.empty())
      throw ConfigError(
          "config: control.target = files requires control.target_u_file and "
          "control.target_p_file");
  }

  if (c.method != "newton" && c.method != "picard")
    bad_value("solver.method", "must be newton or picard");
  if (c.adjoint_mode != "discrete" && c.adjoint_mode != "continuous")
    bad_value("solver.adjoint_mode", "must be discrete or continuous");
  check_positive(c.solver.tol_nonlinear, "solver.tol_nonlinear");
  check_positive(c.solver.tol_linear, "solver.tol_linear");
  if (c.solver.maxit_nonlinear < 1)
    bad_value("solver.maxit_nonlinear", "must be >= 1");
  if (c.solver.maxit_linear < 1) bad_value("solver.maxit_linear", "must be >= 1");
  if (!(c.solver.armijo_c > 0 && c.solver.armijo_c < 1))
    bad_value("solver.armijo_c", "must lie in (0, 1)");
  if (!(c.solver.armijo_shrink > 0 && c.solver.armijo_shrink < 1))
    bad_value("solver.armijo_shrink", "must lie in (0, 1)");
  check_positive(c.solver.min_step, "solver.min_step");
  if (c.solver.dense_cap < 1) bad_value("solver.dense_cap", "must be >= 1");
  if (c.max_outer < 0) bad_value("solver.max_outer", "must be >= 0");
  check_positive(c.tol_stationarity, "solver.tol_stationarity");
  check_positive(c.step0, "solver.step0");

  static const std::set<std::string> kCases = {
      "pressure_mms", "coupled_mms", "taylor", "gradient",
      "adjoint_consistency"};
  for (const auto& name : c.verify_cases)
    if (!kCases.count(name))
      bad_value("verify.cases", "contains unknown case '" + name + "'");
  auto check_grids = [](const std::vector<int>& g, const std::string& dotted) {
    for (int n : g)
      if (n < 2) bad_value(dotted, "entries must be >= 2");
  };
  check_grids(c.pressure_grids, "verify.pressure_grids");
  check_grids(c.coupled_grids, "verify.coupled_grids");
  check_grids(c.adjoint_grids, "verify.adjoint_grids");
  if (c.taylor_grid < 2) bad_value("verify.taylor_grid", "must be >= 2");
  if (c.taylor_samples < 1) bad_value("verify.taylor_samples", "must be >= 1");
  if (c.gradient_grid < 2) bad_value("verify.gradient_grid", "must be >= 2");
  if (c.gradient_samples < 1)
    bad_value("verify.gradient_samples", "must be >= 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  bool saw_nx = false, saw_ny = false, saw_target = false;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!kSchema.count(section))
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      fail(line, "expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' appears before any section");
    if (!kSchema.at(section).count(key))
      fail(line, "unknown key '" + key + "' in section [" + section + "]");
    if (val.empty()) fail(line, section + "." + key + ": empty value");
    std::string dotted = section + "." + key;

    if (section == "grid") {
      if (key == "nx") { c.nx = parse_int(val, line, dotted); saw_nx = true; }
      else if (key == "ny") { c.ny = parse_int(val, line, dotted); saw_ny = true; }
      else if (key == "lx") c.lx = parse_double(val, line, dotted);
      else c.ly = parse_double(val, line, dotted);
    } else if (section == "model") {
      if (key == "name") c.model_name = val;
      else if (key == "phi_coeffs") c.phi_coeffs = parse_double_list(val, line, dotted);
      else if (key == "g_coeffs") c.g_coeffs = parse_double_list(val, line, dotted);
      else if (key == "d_coeffs") c.d_coeffs = parse_double_list(val, line, dotted);
      else {
        auto v = parse_double_list(val, line, dotted);
        if (v.size() != 2) fail(line, dotted + ": expected two numbers lo hi");
        c.validity_lo = v[0];
        c.validity_hi = v[1];
      }
    } else if (section == "control") {
      if (key == "beta1") c.beta1 = parse_double(val, line, dotted);
      else if (key == "q0") c.q0 = parse_double(val, line, dotted);
      else if (key == "eps_smooth") c.eps_smooth = parse_double(val, line, dotted);
      else if (key == "f") c.f = parse_source(val, line, dotted);
      else if (key == "target") {
        if (val == "zero") c.target = RunConfig::TargetKind::zero;
        else if (val == "forward") c.target = RunConfig::TargetKind::forward;
        else if (val == "profiles") c.target = RunConfig::TargetKind::profiles;
        else if (val == "files") c.target = RunConfig::TargetKind::files;
        else fail(line, dotted + ": must be zero, forward, profiles, or files");
        saw_target = true;
      } else if (key == "target_control")
        c.target_control = parse_source(val, line, dotted);
      else if (key == "target_u") c.target_u = parse_source(val, line, dotted);
      else if (key == "target_p") c.target_p = parse_source(val, line, dotted);
      else if (key == "target_u_file") c.target_u_file = val;
      else c.target_p_file = val;
    } else if (section == "solver") {
      if (key == "method") c.method = val;
      else if (key == "adjoint_mode") c.adjoint_mode = val;
      else if (key == "tol_nonlinear") c.solver.tol_nonlinear = parse_double(val, line, dotted);
      else if (key == "maxit_nonlinear") c.solver.maxit_nonlinear = parse_int(val, line, dotted);
      else if (key == "tol_linear") c.solver.tol_linear = parse_double(val, line, dotted);
      else if (key == "maxit_linear") c.solver.maxit_linear = parse_int(val, line, dotted);
      else if (key == "armijo_c") c.solver.armijo_c = parse_double(val, line, dotted);
      else if (key == "armijo_shrink") c.solver.armijo_shrink = parse_double(val, line, dotted);
      else if (key == "min_step") c.solver.min_step = parse_double(val, line, dotted);
      else if (key == "dense_cap") c.solver.dense_cap = parse_int(val, line, dotted);
      else if (key == "max_outer") c.max_outer = parse_int(val, line, dotted);
      else if (key == "tol_stationarity") c.tol_stationarity = parse_double(val, line, dotted);
      else c.step0 = parse_double(val, line, dotted);
    } else if (section == "output") {
      c.output_dir = val;
    } else {  // verify
      if (key == "cases") c.verify_cases = split_ws(val);
      else if (key == "pressure_grids") c.pressure_grids = parse_int_list(val, line, dotted);
      else if (key == "coupled_grids") c.coupled_grids = parse_int_list(val, line, dotted);
      else if (key == "adjoint_grids") c.adjoint_grids = parse_int_list(val, line, dotted);
      else if (key == "taylor_grid") c.taylor_grid = parse_int(val, line, dotted);
      else if (key == "taylor_samples") c.taylor_samples = parse_int(val, line, dotted);
      else if (key == "gradient_grid") c.gradient_grid = parse_int(val, line, dotted);
      else c.gradient_samples = parse_int(val, line, dotted);
    }
  }
  if (!saw_target) c.target = RunConfig::TargetKind::zero;
  validate(c, saw_nx, saw_ny);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

Field realize_source(const Grid& g, const SourceSpec& s) {
  switch (s.kind) {
    case SourceSpec::Kind::zero:
      return Field(g);
    case SourceSpec::Kind::constant:
      return field_from(g, [&](double, double) { return s.value; });
    case SourceSpec::Kind::gaussian_bump:
      return gaussian_bump(g, s.cx, s.cy, s.radius, s.amplitude);
    case SourceSpec::Kind::sinusoid:
      return sinusoid(g, s.kx, s.ky, s.amplitude);
    case SourceSpec::Kind::file: {
      try {
        return read_field_csv(g, s.path);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("reading field file failed: ") + e.what());
      }
    }
  }
  throw ConfigError("unreachable profile kind");
}

Grid make_grid(const RunConfig& cfg) {
  return create_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
}

CoefficientModel make_model(const RunConfig& cfg) {
  if (cfg.model_name == "polynomial")
    return polynomial_model(cfg.phi_coeffs, cfg.g_coeffs, cfg.d_coeffs,
                            cfg.validity_lo, cfg.validity_hi);
  return builtin_model(cfg.model_name);
}

}  // namespace deadoil
