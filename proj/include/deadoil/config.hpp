#pragma once

#include "deadoil/control.hpp"

#include <string>
#include <vector>

namespace deadoil {

// Raised for malformed config text, unknown keys, out-of-range values, and
// missing input files named by the config.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A field source named in the config: an analytic profile or a CSV file.
struct SourceSpec {
  enum class Kind { zero, constant, gaussian_bump, sinusoid, file };
  Kind kind = Kind::zero;
  double value = 0.0;                      // constant
  double cx = 0, cy = 0, radius = 0, amplitude = 0;  // gaussian_bump
  int kx = 0, ky = 0;                      // sinusoid (amplitude shared)
  std::string path;                        // file
};

Field realize_source(const Grid& g, const SourceSpec& s);

// Everything a run needs, parsed from sectioned key=value text. Sections and
// keys are closed sets: anything unknown is rejected with its line number.
struct RunConfig {
  // [grid]
  int nx = 0, ny = 0;
  double lx = 1.0, ly = 1.0;

  // [model]
  std::string model_name = "smooth_bounded";
  std::vector<double> phi_coeffs, g_coeffs, d_coeffs;
  double validity_lo = -2.0, validity_hi = 2.0;

  // [control]
  double beta1 = 0.1, q0 = 1.5, eps_smooth = 1e-8;
  SourceSpec f;  // source for solve, initial control for optimize
  enum class TargetKind { zero, forward, profiles, files };
  TargetKind target = TargetKind::zero;
  SourceSpec target_control;  // forward: targets are the state this produces
  SourceSpec target_u, target_p;
  std::string target_u_file, target_p_file;

  // [solver]
  SolverSettings solver;
  std::string method = "newton";  // newton | picard
  int max_outer = 200;
  double tol_stationarity = 1e-6;
  double step0 = 1.0;
  std::string adjoint_mode = "discrete";  // discrete | continuous

  // [output]
  std::string output_dir = "out";

  // [verify]
  std::vector<std::string> verify_cases = {"pressure_mms", "coupled_mms",
                                           "taylor", "gradient",
                                           "adjoint_consistency"};
  std::vector<int> pressure_grids = {32, 64, 128};
  std::vector<int> coupled_grids = {16, 32, 64};
  std::vector<int> adjoint_grids = {8, 16, 32};
  int taylor_grid = 8, taylor_samples = 5;
  int gradient_grid = 8, gradient_samples = 3;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

Grid make_grid(const RunConfig& cfg);
CoefficientModel make_model(const RunConfig& cfg);

}  // namespace deadoil
