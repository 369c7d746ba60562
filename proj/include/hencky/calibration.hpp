// Material-parameter calibration against uniaxial stretch-stress data:
// dataset ingestion, the max-normalized RMS objective, initial-stiffness shear
// modulus estimation, and box-constrained quasi-Newton fitting with
// finite-difference gradients and multi-start.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hencky/drivers.hpp"

namespace hencky {

struct ExperimentDataset {
  enum class Direction { circumferential, axial };

  std::string label;
  Direction direction = Direction::circumferential;
  std::vector<std::pair<double, double>> points;  // (stretch, Cauchy stress kPa)
};

// CSV with header `stretch,stress_kpa`. Malformed rows raise parse_error with
// the line number; a non-monotone stretch column or a negative stress raises
// validation_error.
ExperimentDataset load_dataset(const std::string& path, const std::string& label,
                               ExperimentDataset::Direction direction);
void save_dataset(const std::string& path, const ExperimentDataset& dataset);
void validate_dataset(const ExperimentDataset& dataset);

// Shear modulus from the initial tangent: the incompressible uniaxial relation
// sigma = 3 mu log(lambda) inverted at each dataset's first measuring point,
// averaged over the datasets. Throws ill_conditioned when the first point is
// too close to the identity.
double estimate_mu(std::span<const ExperimentDataset> datasets);

// Sum over experiments of the RMS of max-normalized stress residuals. Inner
// Newton failures contribute a penalty residual of 10 and set the flag.
double objective(const IsotropicModel& isotropic, const FiberModel& fiber_model,
                 std::span<const ExperimentDataset> datasets, double beta_f_deg,
                 bool* newton_penalty = nullptr);

// Which energies the fit assembles: W_H or W_eH host plus the switched
// log-strain fiber energy with exponent i and switchover regularization eps.
struct FitModelFamily {
  bool exponentiated_iso = true;
  int fiber_exponent = 2;
  double fiber_eps = 0.1;
};

// Parameter names: mu, k, mu1, k1, beta_f. Positive scale parameters are
// optimized in log space; beta_f stays linear.
struct ParamSpec {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool log_scale = true;
};

struct FitConfig {
  std::vector<ParamSpec> free_parameters;
  std::map<std::string, double> fixed_parameters;
  std::optional<std::vector<double>> start;  // aligned with free_parameters
  int max_iterations = 200;
  double gradient_tol = 1e-8;
  double step_tol = 1e-10;
  int multi_starts = 8;
  std::uint64_t seed = 42;
};

struct FitTracePoint {
  int start_index = 0;
  int iteration = 0;
  double f = 0.0;
  double gradient_norm = 0.0;
  double step_norm = 0.0;
};

struct ResidualCurve {
  std::string label;
  std::vector<double> stretch;
  std::vector<double> stress_exp;
  std::vector<double> stress_sim;
};

struct FitResult {
  std::map<std::string, double> parameters;  // free + fixed
  double f_obj = 0.0;
  std::vector<FitTracePoint> trace;
  std::vector<ResidualCurve> curves;
  bool no_progress = false;      // stopped without meeting the tolerances
  bool newton_penalty = false;   // some inner Newton solves failed at the optimum
  int best_start = 0;
};

FitResult fit(const FitModelFamily& family, std::span<const ExperimentDataset> datasets,
              const FitConfig& config);

// Model assembly used by the objective and the fit.
IsotropicModel make_isotropic(const FitModelFamily& family,
                              const std::map<std::string, double>& params);
FiberModel make_fiber(const FitModelFamily& family, const std::map<std::string, double>& params);

}  // namespace hencky
