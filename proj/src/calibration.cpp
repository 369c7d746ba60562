#include "hencky/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "hencky/csv.hpp"

namespace hencky {

namespace {

constexpr double kNewtonPenalty = 10.0;

int load_axis_of(ExperimentDataset::Direction d) {
  return d == ExperimentDataset::Direction::circumferential ? 0 : 1;
}

}  // namespace

void validate_dataset(const ExperimentDataset& dataset) {
  if (dataset.points.size() < 3)
    throw Error(ErrorCode::validation_error,
                "dataset " + dataset.label + ": needs at least 3 points");
  const double first = dataset.points.front().first;
  if (first < 1.0 || first > 1.01)
    throw Error(ErrorCode::validation_error,
                "dataset " + dataset.label + ": first stretch must lie in [1, 1.01]");
  for (std::size_t i = 0; i < dataset.points.size(); ++i) {
    if (dataset.points[i].second < 0.0)
      throw Error(ErrorCode::validation_error, "dataset " + dataset.label +
                                                   ": negative stress in row " +
                                                   std::to_string(i + 1));
    if (i > 0 && dataset.points[i].first <= dataset.points[i - 1].first)
      throw Error(ErrorCode::validation_error, "dataset " + dataset.label +
                                                   ": stretch not strictly increasing at row " +
                                                   std::to_string(i + 1));
  }
}

ExperimentDataset load_dataset(const std::string& path, const std::string& label,
                               ExperimentDataset::Direction direction) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open dataset file " + path);
  ExperimentDataset ds;
  ds.label = label;
  ds.direction = direction;

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, path + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "stretch,stress_kpa")
    throw Error(ErrorCode::parse_error, path + ": expected header 'stretch,stress_kpa'");

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw Error(ErrorCode::parse_error,
                  path + ": line " + std::to_string(lineno) + ": expected two columns");
    try {
      std::size_t pos_a = 0, pos_b = 0;
      const double stretch = std::stod(a, &pos_a);
      const double stress = std::stod(b, &pos_b);
      if (pos_a != a.size() || pos_b != b.size()) throw std::invalid_argument("trailing junk");
      ds.points.emplace_back(stretch, stress);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error,
                  path + ": line " + std::to_string(lineno) + ": malformed number");
    }
  }
  validate_dataset(ds);
  return ds;
}

void save_dataset(const std::string& path, const ExperimentDataset& dataset) {
  csv::Table t;
  t.header = {"stretch", "stress_kpa"};
  for (const auto& [stretch, stress] : dataset.points)
    t.rows.push_back({csv::format(stretch), csv::format(stress)});
  t.write(path);
}

double estimate_mu(std::span<const ExperimentDataset> datasets) {
  if (datasets.empty())
    throw Error(ErrorCode::validation_error, "estimate_mu: no datasets");
  double sum = 0.0;
  for (const ExperimentDataset& ds : datasets) {
    const auto& [stretch, stress] = ds.points.front();
    if (stretch - 1.0 < 1e-4)
      throw Error(ErrorCode::ill_conditioned,
                  "estimate_mu: first stretch of " + ds.label + " is too close to 1");
    sum += stress / (3.0 * std::log(stretch));
  }
  return sum / static_cast<double>(datasets.size());
}

double objective(const IsotropicModel& isotropic, const FiberModel& fiber_model,
                 std::span<const ExperimentDataset> datasets, double beta_f_deg,
                 bool* newton_penalty) {
  if (newton_penalty) *newton_penalty = false;
  double total = 0.0;
  for (const ExperimentDataset& ds : datasets) {
    std::vector<double> stretches;
    stretches.reserve(ds.points.size());
    double max_exp = 0.0;
    for (const auto& [stretch, stress] : ds.points) {
      stretches.push_back(stretch);
      max_exp = std::max(max_exp, stress);
    }
    const std::vector<TwoFiberPoint> sim =
        uniaxial_two_fiber(isotropic, fiber_model, beta_f_deg, stretches, load_axis_of(ds.direction));
    double acc = 0.0;
    for (std::size_t i = 0; i < sim.size(); ++i) {
      double res;
      if (!sim[i].converged) {
        res = kNewtonPenalty;
        if (newton_penalty) *newton_penalty = true;
      } else {
        res = (ds.points[i].second - sim[i].sigma) / max_exp;
      }
      acc += res * res;
    }
    total += std::sqrt(acc / static_cast<double>(sim.size()));
  }
  return total;
}

IsotropicModel make_isotropic(const FitModelFamily& family,
                              const std::map<std::string, double>& params) {
  const double mu = params.at("mu");
  // kappa and khat are inert under the exact incompressibility of the solver
  if (family.exponentiated_iso) return IsoExpHencky{mu, mu, params.at("k"), 1.0};
  return IsoHencky{mu, mu};
}

FiberModel make_fiber(const FitModelFamily& family, const std::map<std::string, double>& params) {
  FiberH f;
  f.mu1 = params.at("mu1");
  f.k1 = params.at("k1");
  f.exponent = family.fiber_exponent;
  f.eps = family.fiber_eps;
  f.switched = true;
  return f;
}

namespace {

struct Problem {
  const FitModelFamily* family;
  std::span<const ExperimentDataset> datasets;
  std::map<std::string, double> fixed;
  std::vector<ParamSpec> free_specs;

  // z is the internal coordinate: log(x) for log-scale parameters
  double to_internal(const ParamSpec& spec, double x) const {
    return spec.log_scale ? std::log(x) : x;
  }
  double to_external(const ParamSpec& spec, double z) const {
    return spec.log_scale ? std::exp(z) : z;
  }

  std::map<std::string, double> assemble(const std::vector<double>& z) const {
    std::map<std::string, double> p = fixed;
    for (std::size_t i = 0; i < free_specs.size(); ++i)
      p[free_specs[i].name] = to_external(free_specs[i], z[i]);
    return p;
  }

  double eval(const std::vector<double>& z, bool* penalty = nullptr) const {
    const std::map<std::string, double> p = assemble(z);
    try {
      return objective(make_isotropic(*family, p), make_fiber(*family, p), datasets,
                       p.at("beta_f"), penalty);
    } catch (const Error&) {
      // overflowing parameter combinations rank above any attainable value
      if (penalty) *penalty = true;
      return 10.0 * static_cast<double>(datasets.size()) + 1.0;
    }
  }
};

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

std::vector<double> fd_gradient(const Problem& prob, const std::vector<double>& z,
                                const std::vector<double>& lo, const std::vector<double>& hi) {
  std::vector<double> g(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
    const double hp = std::min(h, hi[i] - z[i]);
    const double hm = std::min(h, z[i] - lo[i]);
    std::vector<double> zp = z, zm = z;
    zp[i] += hp;
    zm[i] -= hm;
    if (hp + hm <= 0.0) {
      g[i] = 0.0;
      continue;
    }
    g[i] = (prob.eval(zp) - prob.eval(zm)) / (hp + hm);
  }
  return g;
}

struct LocalResult {
  std::vector<double> z;
  double f = 0.0;
  bool no_progress = false;
};

// Projected BFGS with Armijo backtracking; accepted iterates never increase f.
LocalResult minimize_local(const Problem& prob, std::vector<double> z,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           const FitConfig& cfg, int start_index,
                           std::vector<FitTracePoint>& trace) {
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) z[i] = clamp(z[i], lo[i], hi[i]);

  double f = prob.eval(z);
  std::vector<double> g = fd_gradient(prob, z, lo, hi);

  // inverse Hessian approximation
  std::vector<std::vector<double>> B(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) B[i][i] = 1.0;

  LocalResult result{z, f, false};

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    // projected gradient for the termination test
    double pg_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double pg = g[i];
      if (z[i] <= lo[i] && pg > 0.0) pg = 0.0;
      if (z[i] >= hi[i] && pg < 0.0) pg = 0.0;
      pg_norm += pg * pg;
    }
    pg_norm = std::sqrt(pg_norm);
    trace.push_back({start_index, iter, f, pg_norm, 0.0});
    if (pg_norm <= cfg.gradient_tol) break;

    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i] -= B[i][j] * g[j];
    double dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) dg += d[i] * g[i];
    if (!(dg < 0.0)) {  // reset to steepest descent
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) B[i][j] = 0.0;
        B[i][i] = 1.0;
        d[i] = -g[i];
      }
    }

    // backtracking with projection; a second pass falls back to steepest
    // descent before giving up
    std::vector<double> zn(n);
    double fn = f;
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) B[i][j] = 0.0;
          B[i][i] = 1.0;
          d[i] = -g[i];
        }
      }
      double dmax = 0.0;
      for (double di : d) dmax = std::max(dmax, std::abs(di));
      if (dmax == 0.0) break;
      double t = std::min(1.0, 2.0 / dmax);  // keep first probes moderate
      for (int ls = 0; ls < 60; ++ls) {
        double decrease_ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          zn[i] = clamp(z[i] + t * d[i], lo[i], hi[i]);
          decrease_ref += g[i] * (z[i] - zn[i]);
        }
        fn = prob.eval(zn);
        if (fn <= f - 1e-4 * decrease_ref && fn < f) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      // greedy expansion: nearly flat valleys would otherwise crawl
      while (accepted) {
        const double t2 = 2.0 * t;
        std::vector<double> z2(n);
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          z2[i] = clamp(z[i] + t2 * d[i], lo[i], hi[i]);
          moved = moved || z2[i] != zn[i];
        }
        if (!moved) break;
        const double f2 = prob.eval(z2);
        if (!(f2 < fn)) break;
        t = t2;
        zn = z2;
        fn = f2;
      }
    }
    if (!accepted) {
      result.no_progress = true;
      break;
    }

    std::vector<double> gn = fd_gradient(prob, zn, lo, hi);
    double step_norm = 0.0;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = zn[i] - z[i];
      y[i] = gn[i] - g[i];
      step_norm += s[i] * s[i];
    }
    step_norm = std::sqrt(step_norm);
    trace.back().step_norm = step_norm;

    // BFGS inverse update when curvature is usable
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sy += s[i] * y[i];
      ss += s[i] * s[i];
      yy += y[i] * y[i];
    }
    if (sy > 1e-8 * std::sqrt(ss * yy)) {
      std::vector<double> by(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) by[i] += B[i][j] * y[j];
      double yby = 0.0;
      for (std::size_t i = 0; i < n; ++i) yby += y[i] * by[i];
      const double c1 = (sy + yby) / (sy * sy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          B[i][j] += c1 * s[i] * s[j] - (by[i] * s[j] + s[i] * by[j]) / sy;
    }

    z = zn;
    f = fn;
    g = gn;
    result.z = z;
    result.f = f;
    if (step_norm <= cfg.step_tol) break;
  }
  return result;
}

}  // namespace

FitResult fit(const FitModelFamily& family, std::span<const ExperimentDataset> datasets,
              const FitConfig& config) {
  if (datasets.empty()) throw Error(ErrorCode::validation_error, "fit: no datasets");
  if (config.free_parameters.empty())
    throw Error(ErrorCode::invalid_config, "fit: no free parameters");

  Problem prob;
  prob.family = &family;
  prob.datasets = datasets;
  prob.fixed = config.fixed_parameters;
  prob.free_specs = config.free_parameters;

  const std::size_t n = prob.free_specs.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ParamSpec& spec = prob.free_specs[i];
    if (!(spec.lower < spec.upper) || !std::isfinite(spec.lower) || !std::isfinite(spec.upper))
      throw Error(ErrorCode::invalid_config, "fit: bad bounds for " + spec.name);
    if (spec.log_scale && spec.lower <= 0.0)
      throw Error(ErrorCode::invalid_config,
                  "fit: log-scale parameter " + spec.name + " needs a positive lower bound");
    lo[i] = prob.to_internal(spec, spec.lower);
    hi[i] = prob.to_internal(spec, spec.upper);
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FitResult best;
  bool have_best = false;
  double best_norm = 0.0;

  const int starts = std::max(1, config.multi_starts);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> z0(n);
    if (s == 0 && config.start) {
      if (config.start->size() != n)
        throw Error(ErrorCode::invalid_config, "fit: start vector size mismatch");
      for (std::size_t i = 0; i < n; ++i)
        z0[i] = prob.to_internal(prob.free_specs[i], (*config.start)[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) z0[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    }

    std::vector<FitTracePoint> trace;
    const LocalResult local = minimize_local(prob, z0, lo, hi, config, s, trace);

    double norm = 0.0;
    for (double zi : local.z) norm += zi * zi;

    if (!have_best || local.f < best.f_obj ||
        (local.f == best.f_obj && norm < best_norm)) {
      have_best = true;
      best.f_obj = local.f;
      best.parameters = prob.assemble(local.z);
      best.no_progress = local.no_progress;
      best.best_start = s;
      best_norm = norm;
      best.trace = std::move(trace);
    }
  }

  // recompute at the winner to populate curves and the penalty flag
  bool penalty = false;
  const std::map<std::string, double>& p = best.parameters;
  const IsotropicModel iso = make_isotropic(family, p);
  const FiberModel fib = make_fiber(family, p);
  best.f_obj = objective(iso, fib, datasets, p.at("beta_f"), &penalty);
  best.newton_penalty = penalty;
  for (const ExperimentDataset& ds : datasets) {
    ResidualCurve curve;
    curve.label = ds.label;
    std::vector<double> stretches;
    for (const auto& [stretch, stress] : ds.points) {
      curve.stretch.push_back(stretch);
      curve.stress_exp.push_back(stress);
      stretches.push_back(stretch);
    }
    const auto sim = uniaxial_two_fiber(iso, fib, p.at("beta_f"), stretches,
                                        load_axis_of(ds.direction));
    for (const TwoFiberPoint& pt : sim) curve.stress_sim.push_back(pt.sigma);
    best.curves.push_back(std::move(curve));
  }
  return best;
}

}  // namespace hencky
