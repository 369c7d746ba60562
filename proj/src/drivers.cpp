#include "hencky/drivers.hpp"

#include <algorithm>
#include <cmath>

#include "hencky/stress.hpp"

namespace hencky {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRatioFloor = 1e-14;  // sigma11 below this: ratio degenerate

void emit_invariants(CurvePoint& pt, const DeformationState& state, const StructuralTensor& m) {
  for (int i = 1; i <= 4; ++i) {
    pt.invariants["I4C" + std::to_string(i)] =
        mixed_invariant(state, m, InvariantFamily::cauchy_green, i);
    pt.invariants["I4H" + std::to_string(i)] =
        mixed_invariant(state, m, InvariantFamily::hencky, i);
  }
}

SymTensor3 aniso_cauchy(const FiberModel& fiber_model, const Mat3& f,
                        std::span<const StructuralTensor> fibers) {
  SymTensor3 sigma;
  for (const StructuralTensor& st : fibers) {
    const MaterialModel m = std::visit([](const auto& x) { return MaterialModel{x}; }, fiber_model);
    const StructuralTensor one[] = {st};
    sigma += full_response(m, f, one).sigma;
  }
  return sigma;
}

void normalize_curve(std::vector<CurvePoint>& pts) {
  double peak = 0.0;
  for (const CurvePoint& p : pts)
    for (int s = 0; s < 6; ++s) peak = std::max(peak, std::abs(p.sigma_aniso[s]));
  if (peak == 0.0) return;
  for (CurvePoint& p : pts) {
    p.sigma_aniso *= 1.0 / peak;
    p.normalized = true;
  }
}

int threshold_sign(double v) { return v > 1e-14 ? 1 : (v < -1e-14 ? -1 : 0); }

}  // namespace

std::vector<CurvePoint> drive_uniaxial(const FiberModel& fiber_model, double lambda_lo,
                                       double lambda_hi, int steps, bool normalize) {
  if (!(lambda_lo > 0.0) || !(lambda_hi > 0.0) || steps < 1)
    throw Error(ErrorCode::validation_error, "drive_uniaxial: stretches must be positive");
  const StructuralTensor fiber = StructuralTensor::from_direction({{1, 0, 0}});
  std::vector<CurvePoint> pts;
  pts.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    const double lam = lambda_lo + (lambda_hi - lambda_lo) * n / std::max(1, steps - 1);
    const Mat3 f = Mat3::diag(lam, 1.0 / std::sqrt(lam), 1.0 / std::sqrt(lam));
    CurvePoint pt;
    pt.control = lam;
    emit_invariants(pt, state_from_F(f), fiber);
    const StructuralTensor one[] = {fiber};
    pt.sigma_aniso = aniso_cauchy(fiber_model, f, one);
    pts.push_back(std::move(pt));
  }
  if (normalize) normalize_curve(pts);
  return pts;
}

std::vector<CurvePoint> drive_simple_shear(const FiberModel& fiber_model, double gamma_hi,
                                           int steps, bool normalize) {
  if (gamma_hi < 0.0 || steps < 1)
    throw Error(ErrorCode::validation_error, "drive_simple_shear: gamma must be >= 0");
  const StructuralTensor fiber = StructuralTensor::from_direction({{1, 0, 0}});
  std::vector<CurvePoint> pts;
  pts.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    const double gamma = gamma_hi * n / std::max(1, steps - 1);
    Mat3 f = Mat3::identity();
    f(0, 2) = gamma;
    CurvePoint pt;
    pt.control = gamma;
    emit_invariants(pt, state_from_F(f), fiber);
    const StructuralTensor one[] = {fiber};
    pt.sigma_aniso = aniso_cauchy(fiber_model, f, one);
    pts.push_back(std::move(pt));
  }
  if (normalize) normalize_curve(pts);
  return pts;
}

namespace {

std::vector<CurvePoint> biaxial_sweep(const FiberModel& fiber_model, double beta_f_deg,
                                      const std::vector<std::pair<double, double>>& stretches,
                                      bool normalize, bool emit_beta_act) {
  const auto [fib1, fib2] = fiber_pair(beta_f_deg);
  const StructuralTensor fibs[] = {fib1, fib2};
  std::vector<CurvePoint> pts;
  pts.reserve(stretches.size());
  for (const auto& [l1, l2] : stretches) {
    const Mat3 f = Mat3::diag(l1, l2, 1.0 / (l1 * l2));
    CurvePoint pt;
    pt.control = l1;
    const DeformationState state = state_from_F(f);
    emit_invariants(pt, state, fib1);
    pt.sigma_aniso = aniso_cauchy(fiber_model, f, fibs);
    if (std::abs(pt.sigma_aniso[0]) >= kRatioFloor)
      pt.sigma_ratio = pt.sigma_aniso[1] / pt.sigma_aniso[0];
    if (emit_beta_act) {
      const Vec3 fa = f * fib1.A;
      const double beta_act = std::acos(fa[0] / fa.norm());
      pt.invariants["tan2_beta_act"] = std::tan(beta_act) * std::tan(beta_act);
    }
    pts.push_back(std::move(pt));
  }
  if (normalize) normalize_curve(pts);
  return pts;
}

}  // namespace

std::vector<CurvePoint> drive_biaxial(const FiberModel& fiber_model, double beta_f_deg, double r1,
                                      double r2, int steps, bool normalize) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || steps < 1)
    throw Error(ErrorCode::validation_error, "drive_biaxial: stretch ratios must be positive");
  std::vector<std::pair<double, double>> stretches;
  stretches.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) / std::max(1, steps - 1);
    stretches.emplace_back(1.0 + t * (r1 - 1.0), 1.0 + t * (r2 - 1.0));
  }
  return biaxial_sweep(fiber_model, beta_f_deg, stretches, normalize, true);
}

std::vector<CurvePoint> drive_biaxial_tc(const FiberModel& fiber_model, double beta_f_deg,
                                         double lambda1_hi, int steps, bool normalize) {
  if (!(lambda1_hi >= 1.0) || steps < 1)
    throw Error(ErrorCode::validation_error, "drive_biaxial_tc: lambda1 must be >= 1");
  std::vector<std::pair<double, double>> stretches;
  stretches.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    const double l1 = 1.0 + (lambda1_hi - 1.0) * n / std::max(1, steps - 1);
    stretches.emplace_back(l1, 1.0 / std::sqrt(l1));  // F33 = F22
  }
  return biaxial_sweep(fiber_model, beta_f_deg, stretches, normalize, false);
}

SphereGrid sphere_map(const std::array<double, 3>& eigenvalues, InvariantFamily family,
                      int exponent, int n_theta, int n_phi) {
  SphereGrid grid;
  grid.eigenvalues = eigenvalues;
  grid.family = family;
  grid.exponent = exponent;
  grid.n_theta = n_theta;
  grid.n_phi = n_phi;
  grid.values.resize(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
  grid.signs.resize(grid.values.size());

  std::array<double, 3> base{};
  for (int k = 0; k < 3; ++k) {
    double b = family == InvariantFamily::cauchy_green
                   ? eigenvalues[static_cast<std::size_t>(k)]
                   : 0.5 * std::log(eigenvalues[static_cast<std::size_t>(k)]);
    double p = 1.0;
    for (int q = 0; q < exponent; ++q) p *= b;
    base[static_cast<std::size_t>(k)] = p;
  }

  for (int it = 0; it < n_theta; ++it) {
    const double theta = kPi * it / (n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = -kPi + 2.0 * kPi * ip / (n_phi - 1);
      const double a1 = std::sin(theta) * std::cos(phi);
      const double a2 = std::sin(theta) * std::sin(phi);
      const double a3 = std::cos(theta);
      const double v = base[0] * a1 * a1 + base[1] * a2 * a2 + base[2] * a3 * a3;
      const double criterion = family == InvariantFamily::cauchy_green ? v - 1.0 : v;
      grid.values[static_cast<std::size_t>(it * n_phi + ip)] = v;
      grid.signs[static_cast<std::size_t>(it * n_phi + ip)] = threshold_sign(criterion);
    }
  }
  return grid;
}

Composite two_fiber_composite(const IsotropicModel& isotropic, const FiberModel& fiber_model,
                              double beta_f_deg) {
  Composite c;
  c.isotropic = isotropic;
  const auto [fib1, fib2] = fiber_pair(beta_f_deg);
  c.fibers.emplace_back(fiber_model, fib1);
  c.fibers.emplace_back(fiber_model, fib2);
  return c;
}

namespace {

double modulus_scale(const Composite& c) {
  // |S33| convergence scale: mu + mu1
  const double mu = std::visit([](const auto& iso) { return iso.mu; }, c.isotropic);
  double mu1 = 0.0;
  for (const auto& [fib, st] : c.fibers)
    mu1 = std::max(mu1, std::visit([](const auto& f) { return f.mu1; }, fib));
  return mu + mu1;
}

}  // namespace

std::vector<TwoFiberPoint> uniaxial_two_fiber(const IsotropicModel& isotropic,
                                              const FiberModel& fiber_model, double beta_f_deg,
                                              std::span<const double> lambda1, int load_axis) {
  const Composite model = two_fiber_composite(isotropic, fiber_model, beta_f_deg);
  const int a = load_axis;
  const int b = 1 - load_axis;
  const double res_tol = 1e-10 * modulus_scale(model);
  constexpr int kMaxIter = 50;

  // diagonal second Piola-Kirchhoff response of the unconstrained model
  auto s_model = [&](double la_hat, double lb_hat) {
    std::array<double, 3> lam_hat{};
    lam_hat[static_cast<std::size_t>(a)] = la_hat;
    lam_hat[static_cast<std::size_t>(b)] = lb_hat;
    lam_hat[2] = 1.0 / (la_hat * lb_hat);
    const Mat3 f = Mat3::diag(std::sqrt(lam_hat[0]), std::sqrt(lam_hat[1]), std::sqrt(lam_hat[2]));
    return full_response(model, f).S;
  };

  std::vector<TwoFiberPoint> out;
  out.reserve(lambda1.size());
  double lb_hat_guess = -1.0;  // continuation along the sweep

  for (const double la : lambda1) {
    const double la_hat = la * la;
    TwoFiberPoint pt;
    pt.lambda1 = la;
    double lb_hat = lb_hat_guess > 0.0 ? lb_hat_guess : 1.0 / la;

    // residual of S33 = 0 once p is eliminated from S_bb = 0
    auto residual = [&](double lb) {
      const SymTensor3 s = s_model(la_hat, lb);
      return s[2] - la_hat * lb * lb * s[b];
    };

    double r = residual(lb_hat);
    pt.residual_trace.push_back(std::abs(r));
    int iter = 0;
    while (std::abs(r) > res_tol && iter < kMaxIter) {
      const double h = 1e-7 * std::max(1.0, lb_hat);
      const double slope = (residual(lb_hat + h) - residual(lb_hat - h)) / (2.0 * h);
      double step = -r / slope;
      double next = lb_hat + step;
      while (next <= 0.1 * lb_hat || next >= 10.0 * lb_hat) {  // keep the iterate on the SPD branch
        step *= 0.5;
        next = lb_hat + step;
      }
      lb_hat = next;
      r = residual(lb_hat);
      pt.residual_trace.push_back(std::abs(r));
      ++iter;
    }
    pt.converged = std::abs(r) <= res_tol;

    const SymTensor3 s = s_model(la_hat, lb_hat);
    pt.lambda2 = std::sqrt(lb_hat);
    pt.pressure = -0.5 * lb_hat * s[b];
    pt.sigma = la_hat * s[a] - lb_hat * s[b];
    lb_hat_guess = lb_hat;
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace hencky
