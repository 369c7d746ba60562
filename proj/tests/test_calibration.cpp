#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hencky/calibration.hpp"
#include "support/test_util.hpp"

using namespace hencky;
using namespace hencky::testing;

namespace {

ExperimentDataset synthesize(const IsotropicModel& iso, const FiberModel& fib, double beta_deg,
                             ExperimentDataset::Direction dir, const std::string& label,
                             int n_points = 12, double top = 1.35) {
  ExperimentDataset ds;
  ds.label = label;
  ds.direction = dir;
  std::vector<double> stretches;
  for (int n = 0; n < n_points; ++n)
    stretches.push_back(1.002 + (top - 1.002) * n / (n_points - 1));
  const auto pts = uniaxial_two_fiber(iso, fib, beta_deg, stretches,
                                      dir == ExperimentDataset::Direction::circumferential ? 0 : 1);
  for (std::size_t n = 0; n < stretches.size(); ++n) {
    REQUIRE(pts[n].converged);
    ds.points.emplace_back(stretches[n], pts[n].sigma);
  }
  return ds;
}

const IsotropicModel kIsoM4{IsoExpHencky{31.16, 31.16, 3.38, 1.0}};
const FiberModel kFibM4{FiberH{726.09, 1848.66, 2, 0.1, true}};
const double kBetaM4 = 40.68;

}  // namespace

TEST_CASE("dataset loading and validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hencky_test_datasets";
  fs::create_directories(dir);

  const fs::path good = dir / "good.csv";
  {
    std::ofstream out(good);
    out << "stretch,stress_kpa\n1.003,0.5\n1.05,2.0\n1.1,5.0\n1.2,11.0\n1.3,28.0\n";
  }
  const ExperimentDataset ds =
      load_dataset(good.string(), "good", ExperimentDataset::Direction::circumferential);
  CHECK(ds.points.size() == 5);
  CHECK(ds.points[2].second == doctest::Approx(5.0));

  // save -> load round trip
  const fs::path copy = dir / "copy.csv";
  save_dataset(copy.string(), ds);
  const ExperimentDataset ds2 =
      load_dataset(copy.string(), "copy", ExperimentDataset::Direction::circumferential);
  REQUIRE(ds2.points.size() == ds.points.size());
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    CHECK(ds2.points[i].first == ds.points[i].first);
    CHECK(ds2.points[i].second == ds.points[i].second);
  }

  const fs::path bad_header = dir / "bad_header.csv";
  {
    std::ofstream out(bad_header);
    out << "lambda,sigma\n1.0,0\n";
  }
  CHECK_THROWS_AS(
      (void)load_dataset(bad_header.string(), "x", ExperimentDataset::Direction::circumferential),
      Error);

  const fs::path non_monotone = dir / "non_monotone.csv";
  {
    std::ofstream out(non_monotone);
    out << "stretch,stress_kpa\n1.003,0.5\n1.1,2.0\n1.05,3.0\n1.2,4.0\n";
  }
  try {
    (void)load_dataset(non_monotone.string(), "x", ExperimentDataset::Direction::circumferential);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation_error);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }

  const fs::path malformed = dir / "malformed.csv";
  {
    std::ofstream out(malformed);
    out << "stretch,stress_kpa\n1.003,0.5\nnot-a-number,2.0\n";
  }
  try {
    (void)load_dataset(malformed.string(), "x", ExperimentDataset::Direction::circumferential);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse_error);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  // fewer than three points
  const fs::path tiny = dir / "tiny.csv";
  {
    std::ofstream out(tiny);
    out << "stretch,stress_kpa\n1.003,0.5\n1.1,2.0\n";
  }
  CHECK_THROWS_AS(
      (void)load_dataset(tiny.string(), "x", ExperimentDataset::Direction::circumferential), Error);
}

TEST_CASE("objective formula") {
  // one experiment, one point: |(10 - 8)/10| = 0.2
  ExperimentDataset ds;
  ds.label = "single";
  ds.points = {{1.08, 10.0}};
  // an isotropic model tuned so sigma(1.08) = 8: sigma = 3 mu log(lambda)
  const double mu = 8.0 / (3.0 * std::log(1.08));
  const FiberModel none{FiberH{1e-30, 1.0, 1, 0.0, false}};
  const double f =
      objective(IsotropicModel{IsoHencky{mu, mu}}, none, {&ds, 1}, 30.0);
  CHECK(f == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("objective vanishes on self-generated data") {
  const ExperimentDataset circ = synthesize(kIsoM4, kFibM4, kBetaM4,
                                            ExperimentDataset::Direction::circumferential, "circ");
  const ExperimentDataset axial =
      synthesize(kIsoM4, kFibM4, kBetaM4, ExperimentDataset::Direction::axial, "axial");
  const ExperimentDataset both[] = {circ, axial};
  CHECK(objective(kIsoM4, kFibM4, both, kBetaM4) <= 1e-10);
}

TEST_CASE("objective is invariant under rescaling an experiment's stress unit") {
  // max-normalization makes each experiment's contribution unit free: scaling
  // its recorded stresses together with the moduli (sigma is homogeneous of
  // degree one in mu and mu1) leaves f_obj unchanged
  ExperimentDataset circ = synthesize(kIsoM4, kFibM4, kBetaM4,
                                      ExperimentDataset::Direction::circumferential, "circ");
  // perturbed model so residuals are nonzero
  const FiberModel fib{FiberH{500.0, 1500.0, 2, 0.1, true}};
  const ExperimentDataset one[] = {circ};
  const double f0 = objective(kIsoM4, fib, one, kBetaM4);
  CHECK(f0 > 1e-3);

  const double c = 7.5;
  for (auto& [stretch, stress] : circ.points) stress *= c;
  const IsotropicModel iso_scaled{IsoExpHencky{31.16 * c, 31.16 * c, 3.38, 1.0}};
  const FiberModel fib_scaled{FiberH{500.0 * c, 1500.0, 2, 0.1, true}};
  const ExperimentDataset scaled[] = {circ};
  const double f1 = objective(iso_scaled, fib_scaled, scaled, kBetaM4);
  CHECK(f1 == doctest::Approx(f0).epsilon(1e-9));
}

TEST_CASE("shear modulus estimation") {
  const double mu_true = 31.16;
  // synthetic quadratic-Hencky data: sigma = 3 mu log(lambda)
  auto make = [&](double first_stretch, double mu, ExperimentDataset::Direction dir) {
    ExperimentDataset ds;
    ds.label = "synt";
    ds.direction = dir;
    for (double lam : {first_stretch, 1.1, 1.2, 1.3})
      ds.points.emplace_back(lam, 3.0 * mu * std::log(lam));
    return ds;
  };
  const ExperimentDataset two[] = {
      make(1.02, mu_true, ExperimentDataset::Direction::circumferential),
      make(1.02, mu_true, ExperimentDataset::Direction::axial)};
  CHECK(rel_err(estimate_mu(two), mu_true) < 0.02);

  // mismatched stiffnesses average
  const ExperimentDataset pair[] = {make(1.02, 10.0, ExperimentDataset::Direction::circumferential),
                                    make(1.02, 20.0, ExperimentDataset::Direction::axial)};
  CHECK(estimate_mu(pair) == doctest::Approx(15.0).epsilon(1e-9));

  // first point too close to the identity
  const ExperimentDataset degenerate[] = {
      make(1.0 + 5e-5, mu_true, ExperimentDataset::Direction::circumferential)};
  CHECK_THROWS_AS((void)estimate_mu(degenerate), Error);
}

TEST_CASE("fit from the true parameters converges immediately") {
  const ExperimentDataset circ = synthesize(kIsoM4, kFibM4, kBetaM4,
                                            ExperimentDataset::Direction::circumferential, "circ");
  const ExperimentDataset axial =
      synthesize(kIsoM4, kFibM4, kBetaM4, ExperimentDataset::Direction::axial, "axial");
  const ExperimentDataset both[] = {circ, axial};

  FitModelFamily family;
  family.exponentiated_iso = true;
  family.fiber_exponent = 2;

  FitConfig cfg;
  cfg.fixed_parameters = {{"mu", 31.16}};
  cfg.free_parameters = {{"k", 1e-8, 100.0, true},
                         {"mu1", 1e-4, 1e7, true},
                         {"k1", 1e-4, 1e7, true},
                         {"beta_f", 1e-4, 89.9, false}};
  cfg.start = std::vector<double>{3.38, 726.09, 1848.66, 40.68};
  cfg.multi_starts = 1;

  const FitResult res = fit(family, both, cfg);
  CHECK(res.f_obj <= 1e-8);
  CHECK(res.parameters.at("mu") == 31.16);  // fixed parameters stay bit-identical
  CHECK(res.parameters.at("beta_f") == doctest::Approx(40.68).epsilon(1e-6));
  // accepted iterations never increase the objective
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    if (res.trace[i].start_index == res.trace[i - 1].start_index)
      CHECK(res.trace[i].f <= res.trace[i - 1].f + 1e-15);
}

TEST_CASE("synthetic recovery from a perturbed start") {
  const ExperimentDataset circ = synthesize(kIsoM4, kFibM4, kBetaM4,
                                            ExperimentDataset::Direction::circumferential, "circ");
  const ExperimentDataset axial =
      synthesize(kIsoM4, kFibM4, kBetaM4, ExperimentDataset::Direction::axial, "axial");
  const ExperimentDataset both[] = {circ, axial};

  FitModelFamily family;
  family.exponentiated_iso = true;
  family.fiber_exponent = 2;

  FitConfig cfg;
  cfg.fixed_parameters = {{"mu", 31.16}};
  cfg.free_parameters = {{"k", 1e-8, 100.0, true},
                         {"mu1", 1e-4, 1e7, true},
                         {"k1", 1e-4, 1e7, true},
                         {"beta_f", 1e-4, 89.9, false}};
  cfg.start = std::vector<double>{3.38 * 1.5, 726.09 * 1.5, 1848.66 * 1.5, 40.68 * 1.5};
  cfg.multi_starts = 1;
  cfg.max_iterations = 300;

  const FitResult res = fit(family, both, cfg);
  CHECK(res.f_obj <= 1e-3);
  CHECK(res.curves.size() == 2);
  CHECK_FALSE(res.newton_penalty);
}

TEST_CASE("fiber angle bound activates exactly") {
  // data generated beyond the bound
  const ExperimentDataset circ = synthesize(kIsoM4, kFibM4, 80.0,
                                            ExperimentDataset::Direction::circumferential, "circ");
  const ExperimentDataset axial =
      synthesize(kIsoM4, kFibM4, 80.0, ExperimentDataset::Direction::axial, "axial");
  const ExperimentDataset both[] = {circ, axial};

  FitModelFamily family;
  family.exponentiated_iso = true;
  family.fiber_exponent = 2;

  FitConfig cfg;
  cfg.fixed_parameters = {{"mu", 31.16}, {"k", 3.38}, {"mu1", 726.09}, {"k1", 1848.66}};
  cfg.free_parameters = {{"beta_f", 1e-4, 75.0, false}};
  cfg.start = std::vector<double>{60.0};
  cfg.multi_starts = 1;

  const FitResult res = fit(family, both, cfg);
  CHECK(res.parameters.at("beta_f") == 75.0);  // exact bound activation
}

TEST_CASE("stored objective value matches a recomputation from the returned parameters") {
  const ExperimentDataset circ = synthesize(kIsoM4, kFibM4, kBetaM4,
                                            ExperimentDataset::Direction::circumferential, "circ");
  const ExperimentDataset both[] = {circ};
  FitModelFamily family;
  family.exponentiated_iso = true;
  family.fiber_exponent = 2;
  FitConfig cfg;
  cfg.fixed_parameters = {{"mu", 31.16}, {"k", 3.38}};
  cfg.free_parameters = {{"mu1", 1e-4, 1e7, true}, {"k1", 1e-4, 1e7, true},
                         {"beta_f", 1e-4, 89.9, false}};
  cfg.start = std::vector<double>{500.0, 1500.0, 35.0};
  cfg.multi_starts = 1;
  cfg.max_iterations = 25;
  const FitResult res = fit(family, both, cfg);
  const double recomputed = objective(make_isotropic(family, res.parameters),
                                      make_fiber(family, res.parameters), both,
                                      res.parameters.at("beta_f"));
  CHECK(std::abs(recomputed - res.f_obj) <= 1e-12 * std::max(1.0, res.f_obj));
}
