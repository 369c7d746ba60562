// Batch front end: model/config parsing, dispatch to the homogeneous
// deformation drivers, sphere maps, reference-tangent printing, derivative
// verification, and calibration. Configs are JSON (comments allowed); all
// angles are degrees, all moduli kPa. Exit codes: 0 success, 2 config error,
// 3 numerical failure, 4 fit non-convergence.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "hencky/calibration.hpp"
#include "hencky/csv.hpp"
#include "hencky/drivers.hpp"
#include "hencky/fdcheck.hpp"
#include "hencky/stress.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hencky;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitFit = 4;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::invalid_config, message);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) config_error(where + ": unknown key '" + key + "'");
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    config_error(where + ": missing numeric '" + key + "'");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? obj[key].get<double>() : fallback;
}

int int_or(const json& obj, const std::string& key, int fallback) {
  return obj.contains(key) ? obj[key].get<int>() : fallback;
}

StructuralTensor parse_fiber(const json& f, const std::string& where) {
  check_keys(f, {"direction", "angle_deg", "plane"}, where);
  if (f.contains("direction")) {
    const auto v = f["direction"].get<std::vector<double>>();
    if (v.size() != 3) config_error(where + ": direction needs 3 components");
    return StructuralTensor::from_direction({{v[0], v[1], v[2]}});
  }
  if (!f.contains("angle_deg")) config_error(where + ": needs 'direction' or 'angle_deg'");
  int a1 = 0, a2 = 1;
  if (f.contains("plane")) {
    const auto p = f["plane"].get<std::vector<int>>();
    if (p.size() != 2 || p[0] < 0 || p[0] > 2 || p[1] < 0 || p[1] > 2 || p[0] == p[1])
      config_error(where + ": plane needs two distinct axes in 0..2");
    a1 = p[0];
    a2 = p[1];
  }
  return StructuralTensor::from_angle(f["angle_deg"].get<double>(), a1, a2);
}

std::vector<StructuralTensor> parse_fibers(const json& cfg) {
  std::vector<StructuralTensor> fibers;
  if (!cfg.contains("fibers")) return fibers;
  int n = 0;
  for (const json& f : cfg["fibers"]) fibers.push_back(parse_fiber(f, "fibers[" + std::to_string(n++) + "]"));
  return fibers;
}

// either kappa directly or the Lame constant lambda
double kappa_from(const json& m, double mu_like, const std::string& where) {
  if (m.contains("kappa") && m.contains("lambda")) config_error(where + ": give kappa or lambda, not both");
  if (m.contains("kappa")) return m["kappa"].get<double>();
  if (m.contains("lambda")) return m["lambda"].get<double>() + 2.0 * mu_like / 3.0;
  config_error(where + ": missing 'kappa' or 'lambda'");
}

MaterialModel parse_material(const json& m, const std::string& where);

FiberModel parse_fiber_model(const json& m, const std::string& where) {
  const MaterialModel model = parse_material(m, where);
  return std::visit(
      [&](const auto& x) -> FiberModel {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiberC> || std::is_same_v<T, FiberH> ||
                      std::is_same_v<T, FiberPolyC> || std::is_same_v<T, FiberHGO>)
          return FiberModel{x};
        else
          config_error(where + ": expected a fiber model (fiber_c, fiber_h, fiber_poly_c, fiber_hgo)");
      },
      model);
}

MaterialModel parse_material(const json& m, const std::string& where) {
  if (!m.is_object() || !m.contains("type") || !m["type"].is_string())
    config_error(where + ": model needs a string 'type'");
  const std::string type = m["type"].get<std::string>();

  MaterialModel model;
  if (type == "iso_hencky") {
    check_keys(m, {"type", "mu", "kappa", "lambda"}, where);
    const double mu = need_number(m, "mu", where);
    model = IsoHencky{mu, kappa_from(m, mu, where)};
  } else if (type == "iso_exp_hencky") {
    check_keys(m, {"type", "mu", "kappa", "lambda", "k", "khat"}, where);
    const double mu = need_number(m, "mu", where);
    model = IsoExpHencky{mu, kappa_from(m, mu, where), need_number(m, "k", where),
                         need_number(m, "khat", where)};
  } else if (type == "ti_hencky" || type == "ti_exp_hencky") {
    check_keys(m, {"type", "mu_t", "kappa", "lambda", "alpha", "beta", "mu_l", "k"}, where);
    const double mu_t = need_number(m, "mu_t", where);
    const double kappa = kappa_from(m, mu_t, where);
    const double alpha = number_or(m, "alpha", 0.0);
    const double beta = number_or(m, "beta", 0.0);
    const double mu_l = need_number(m, "mu_l", where);
    if (type == "ti_hencky") {
      TIHencky ti;
      ti.mu_t = mu_t;
      ti.kappa = kappa;
      ti.alpha = alpha;
      ti.beta = beta;
      ti.mu_l = mu_l;
      model = ti;
    } else {
      TIExpHencky ti;
      ti.mu_t = mu_t;
      ti.kappa = kappa;
      ti.alpha = alpha;
      ti.beta = beta;
      ti.mu_l = mu_l;
      if (m.contains("k")) {
        const auto k = m["k"].get<std::vector<double>>();
        if (k.size() != 5) config_error(where + ": ti_exp_hencky needs 5 entries in 'k'");
        std::copy(k.begin(), k.end(), ti.k.begin());
      }
      model = ti;
    }
  } else if (type == "ortho_hencky" || type == "ortho_exp_hencky") {
    check_keys(m,
               {"type", "mu", "kappa", "lambda", "alpha1", "alpha2", "mu1", "mu2", "beta1",
                "beta2", "beta3", "k"},
               where);
    const double mu = need_number(m, "mu", where);
    OrthoExpHencky oe;
    oe.mu = mu;
    oe.kappa = kappa_from(m, mu, where);
    oe.alpha1 = number_or(m, "alpha1", 0.0);
    oe.alpha2 = number_or(m, "alpha2", 0.0);
    oe.mu1 = number_or(m, "mu1", 0.0);
    oe.mu2 = number_or(m, "mu2", 0.0);
    oe.beta1 = number_or(m, "beta1", 0.0);
    oe.beta2 = number_or(m, "beta2", 0.0);
    oe.beta3 = number_or(m, "beta3", 0.0);
    if (type == "ortho_hencky") {
      OrthoHencky o;
      o.mu = oe.mu;
      o.kappa = oe.kappa;
      o.alpha1 = oe.alpha1;
      o.alpha2 = oe.alpha2;
      o.mu1 = oe.mu1;
      o.mu2 = oe.mu2;
      o.beta1 = oe.beta1;
      o.beta2 = oe.beta2;
      o.beta3 = oe.beta3;
      model = o;
    } else {
      if (m.contains("k")) {
        const auto k = m["k"].get<std::vector<double>>();
        if (k.size() != 9) config_error(where + ": ortho_exp_hencky needs 9 entries in 'k'");
        std::copy(k.begin(), k.end(), oe.k.begin());
      }
      model = oe;
    }
  } else if (type == "fiber_c") {
    check_keys(m, {"type", "mu1", "k1", "i", "switch"}, where);
    model = FiberC{need_number(m, "mu1", where), need_number(m, "k1", where),
                   int_or(m, "i", 1), m.value("switch", false)};
  } else if (type == "fiber_h") {
    check_keys(m, {"type", "mu1", "k1", "i", "eps", "switch"}, where);
    model = FiberH{need_number(m, "mu1", where), need_number(m, "k1", where), int_or(m, "i", 1),
                   number_or(m, "eps", 0.0), m.value("switch", false)};
  } else if (type == "fiber_poly_c") {
    check_keys(m, {"type", "mu1", "k1"}, where);
    model = FiberPolyC{need_number(m, "mu1", where), int_or(m, "k1", 2)};
  } else if (type == "fiber_hgo") {
    check_keys(m, {"type", "mu1", "k1", "switch"}, where);
    model = FiberHGO{need_number(m, "mu1", where), need_number(m, "k1", where),
                     m.value("switch", true)};
  } else if (type == "composite") {
    check_keys(m, {"type", "isotropic", "fibers"}, where);
    Composite comp;
    const MaterialModel iso = parse_material(m.at("isotropic"), where + ".isotropic");
    if (const IsoHencky* p = std::get_if<IsoHencky>(&iso))
      comp.isotropic = *p;
    else if (const IsoExpHencky* p2 = std::get_if<IsoExpHencky>(&iso))
      comp.isotropic = *p2;
    else
      config_error(where + ": composite isotropic part must be iso_hencky or iso_exp_hencky");
    for (const json& f : m.at("fibers")) {
      check_keys(f, {"model", "direction", "angle_deg", "plane"}, where + ".fibers");
      json dir = f;
      dir.erase("model");
      comp.fibers.emplace_back(parse_fiber_model(f.at("model"), where + ".fibers.model"),
                               parse_fiber(dir, where + ".fibers"));
    }
    model = comp;
  } else {
    config_error(where + ": unknown model type '" + type + "'");
  }
  validate(model);
  return model;
}

void warn_polyconvexity(const MaterialModel& model) {
  const IsoExpHencky* iso = std::get_if<IsoExpHencky>(&model);
  if (!iso) {
    if (const Composite* c = std::get_if<Composite>(&model))
      iso = std::get_if<IsoExpHencky>(&c->isotropic);
  }
  if (iso && iso->outside_polyconvex_range())
    std::cerr << "warning: k <= 1/3 or khat <= 1/8 leaves the 2D polyconvexity range\n";
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    config_error(std::string("config parse error: ") + e.what());
  }
}

fs::path ensure_outdir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------

int cmd_tangent(const json& cfg, const fs::path& outdir) {
  check_keys(cfg, {"model", "fibers"}, "tangent");
  const MaterialModel model = parse_material(cfg.at("model"), "model");
  warn_polyconvexity(model);
  const std::vector<StructuralTensor> fibers = parse_fibers(cfg);
  const Tensor4V cv = reference_tangent_voigt(model, fibers);

  csv::Table t;
  t.header = {"c1", "c2", "c3", "c4", "c5", "c6"};
  for (int i = 0; i < 6; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < 6; ++j) row.push_back(csv::format(cv(i, j)));
    t.rows.push_back(row);
  }
  t.write((outdir / "tangent.csv").string());

  std::printf("reference tangent (Voigt order 11,22,33,12,23,13):\n");
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) std::printf("%12.6g", cv(i, j));
    std::printf("\n");
  }
  std::printf("positive definite: %s\n", is_positive_definite_tangent(cv) ? "yes" : "no");
  return kExitOk;
}

int cmd_identify(const json& cfg, const fs::path& outdir) {
  check_keys(cfg, {"symmetry", "matrix"}, "identify");
  if (!cfg.contains("symmetry") || !cfg.contains("matrix"))
    config_error("identify: needs 'symmetry' and 'matrix'");
  const std::string symmetry = cfg["symmetry"].get<std::string>();
  const auto rows = cfg["matrix"].get<std::vector<std::vector<double>>>();
  if (rows.size() != 6) config_error("identify: matrix needs 6 rows");
  Tensor4V cv;
  for (int i = 0; i < 6; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != 6) config_error("identify: matrix needs 6 columns");
    for (int j = 0; j < 6; ++j) cv(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  csv::Table t;
  t.header = {"parameter", "value"};
  if (symmetry == "ti") {
    const TIParameters p = ti_identify(cv);
    t.rows = {{"mu_l", csv::format(p.mu_l)},
              {"mu_t", csv::format(p.mu_t)},
              {"lambda", csv::format(p.lambda)},
              {"alpha", csv::format(p.alpha)},
              {"beta", csv::format(p.beta)},
              {"kappa", csv::format(p.kappa())}};
  } else if (symmetry == "ortho") {
    const OrthoParameters p = ortho_identify(cv);
    t.rows = {{"mu", csv::format(p.mu)},         {"mu1", csv::format(p.mu1)},
              {"mu2", csv::format(p.mu2)},       {"lambda", csv::format(p.lambda)},
              {"alpha1", csv::format(p.alpha1)}, {"alpha2", csv::format(p.alpha2)},
              {"beta1", csv::format(p.beta1)},   {"beta2", csv::format(p.beta2)},
              {"beta3", csv::format(p.beta3)},   {"kappa", csv::format(p.kappa())}};
  } else {
    config_error("identify: symmetry must be 'ti' or 'ortho'");
  }
  t.write((outdir / "identify.csv").string());
  for (const auto& row : t.rows) std::printf("%-8s %s\n", row[0].c_str(), row[1].c_str());
  return kExitOk;
}

const std::vector<std::string> kDriveColumns = {
    "control", "I4C1", "I4C2", "I4C3", "I4C4", "I4H1",      "I4H2",    "I4H3",
    "I4H4",    "sig11", "sig13", "sig22", "sig33", "sig_ratio", "lambda2", "p"};

std::vector<std::string> curve_row(const CurvePoint& p) {
  std::vector<std::string> row;
  row.push_back(csv::format(p.control));
  for (const char* key : {"I4C1", "I4C2", "I4C3", "I4C4", "I4H1", "I4H2", "I4H3", "I4H4"})
    row.push_back(p.invariants.count(key) ? csv::format(p.invariants.at(key)) : "");
  row.push_back(csv::format(p.sigma_aniso[0]));
  row.push_back(csv::format(p.sigma_aniso[5]));  // 13 component
  row.push_back(csv::format(p.sigma_aniso[1]));
  row.push_back(csv::format(p.sigma_aniso[2]));
  row.push_back(p.sigma_ratio ? csv::format(*p.sigma_ratio) : "");
  row.push_back("");  // lambda2
  row.push_back("");  // p
  return row;
}

int cmd_drive(const json& cfg, const fs::path& outdir) {
  check_keys(cfg,
             {"driver", "model", "isotropic", "beta_f_deg", "lambda_range", "lambda_max",
              "gamma_max", "ratio", "steps", "normalize", "load_axis"},
             "drive");
  if (!cfg.contains("driver")) config_error("drive: missing 'driver'");
  const std::string driver = cfg["driver"].get<std::string>();
  const int steps = int_or(cfg, "steps", 100);
  const bool normalize = cfg.value("normalize", false);

  csv::Table t;
  t.header = kDriveColumns;

  if (driver == "uniaxial" || driver == "shear" || driver == "biaxial" || driver == "biaxial-tc") {
    const FiberModel fib = parse_fiber_model(cfg.at("model"), "model");
    std::vector<CurvePoint> pts;
    if (driver == "uniaxial") {
      const auto range = cfg.at("lambda_range").get<std::vector<double>>();
      if (range.size() != 2) config_error("drive: lambda_range needs [lo, hi]");
      pts = drive_uniaxial(fib, range[0], range[1], steps, normalize);
    } else if (driver == "shear") {
      pts = drive_simple_shear(fib, need_number(cfg, "gamma_max", "drive"), steps, normalize);
    } else if (driver == "biaxial") {
      const auto ratio = cfg.at("ratio").get<std::vector<double>>();
      if (ratio.size() != 2) config_error("drive: ratio needs [r1, r2]");
      pts = drive_biaxial(fib, need_number(cfg, "beta_f_deg", "drive"), ratio[0], ratio[1], steps,
                          normalize);
    } else {
      pts = drive_biaxial_tc(fib, need_number(cfg, "beta_f_deg", "drive"),
                             need_number(cfg, "lambda_max", "drive"), steps, normalize);
    }
    for (const CurvePoint& p : pts) t.rows.push_back(curve_row(p));
  } else if (driver == "uniaxial-two-fiber") {
    const MaterialModel iso_m = parse_material(cfg.at("isotropic"), "isotropic");
    IsotropicModel iso;
    if (const IsoHencky* p = std::get_if<IsoHencky>(&iso_m))
      iso = *p;
    else if (const IsoExpHencky* p2 = std::get_if<IsoExpHencky>(&iso_m))
      iso = *p2;
    else
      config_error("drive: 'isotropic' must be iso_hencky or iso_exp_hencky");
    const FiberModel fib = parse_fiber_model(cfg.at("model"), "model");
    const double beta = need_number(cfg, "beta_f_deg", "drive");
    const auto range = cfg.at("lambda_range").get<std::vector<double>>();
    if (range.size() != 2) config_error("drive: lambda_range needs [lo, hi]");
    std::vector<double> lams;
    for (int n = 0; n < steps; ++n)
      lams.push_back(range[0] + (range[1] - range[0]) * n / std::max(1, steps - 1));
    const auto pts = uniaxial_two_fiber(iso, fib, beta, lams, int_or(cfg, "load_axis", 0));
    bool all_converged = true;
    for (const TwoFiberPoint& p : pts) {
      all_converged = all_converged && p.converged;
      std::vector<std::string> row(16, "");
      row[0] = csv::format(p.lambda1);
      row[9] = csv::format(p.sigma);
      row[14] = csv::format(p.lambda2);
      row[15] = csv::format(p.pressure);
      t.rows.push_back(row);
    }
    if (!all_converged) {
      t.write((outdir / "drive.csv").string());
      throw Error(ErrorCode::newton_divergence, "inner Newton iteration failed at some points");
    }
  } else {
    config_error("drive: unknown driver '" + driver + "'");
  }

  t.write((outdir / "drive.csv").string());
  std::printf("drive %s: %zu points -> %s\n", driver.c_str(), t.rows.size(),
              (outdir / "drive.csv").string().c_str());
  return kExitOk;
}

int cmd_sphere(const json& cfg, const fs::path& outdir) {
  check_keys(cfg, {"eigenvalues", "family", "i", "resolution"}, "sphere");
  std::array<double, 3> eigs = sphere_default_eigenvalues();
  if (cfg.contains("eigenvalues")) {
    const auto v = cfg["eigenvalues"].get<std::vector<double>>();
    if (v.size() != 3) config_error("sphere: eigenvalues needs 3 entries");
    std::copy(v.begin(), v.end(), eigs.begin());
  }
  const std::string family = cfg.value("family", "C");
  if (family != "C" && family != "H") config_error("sphere: family must be 'C' or 'H'");
  const int exponent = int_or(cfg, "i", 1);
  int n_theta = 181, n_phi = 361;
  if (cfg.contains("resolution")) {
    const auto r = cfg["resolution"].get<std::vector<int>>();
    if (r.size() != 2 || r[0] < 2 || r[1] < 2) config_error("sphere: resolution needs [n_theta, n_phi] >= 2");
    n_theta = r[0];
    n_phi = r[1];
  }
  const SphereGrid grid = sphere_map(
      eigs, family == "C" ? InvariantFamily::cauchy_green : InvariantFamily::hencky, exponent,
      n_theta, n_phi);

  csv::Table t;
  t.header = {"theta_deg", "phi_deg", "value", "sign"};
  for (int it = 0; it < grid.n_theta; ++it)
    for (int ip = 0; ip < grid.n_phi; ++ip)
      t.rows.push_back({csv::format(grid.theta_deg(it)), csv::format(grid.phi_deg(ip)),
                        csv::format(grid.value(it, ip)), std::to_string(grid.sign(it, ip))});
  t.write((outdir / "sphere.csv").string());

  int active = 0;
  for (int s : grid.signs) active += s > 0;
  std::printf("sphere map %s^%d: %d of %zu directions active -> %s\n", family.c_str(), exponent,
              active, grid.signs.size(), (outdir / "sphere.csv").string().c_str());
  return kExitOk;
}

int cmd_fdcheck(const json& cfg, const fs::path& outdir, std::optional<std::uint64_t> seed_arg) {
  check_keys(cfg, {"states", "seed"}, "fdcheck");
  const int states = int_or(cfg, "states", 20);
  const std::uint64_t seed =
      seed_arg ? *seed_arg : static_cast<std::uint64_t>(cfg.value("seed", 42));
  const FdCheckReport report = run_fd_checks(seed, states);

  std::ofstream out(outdir / "fdcheck.csv", std::ios::binary);
  out << "# seed " << seed << "\n";
  out << "model,states,stress_err,tangent_err,s_err,cmat_err\n";
  for (const FdCheckEntry& e : report.entries)
    out << e.model << ',' << e.states << ',' << csv::format(e.max_stress_err) << ','
        << csv::format(e.max_tangent_err) << ',' << csv::format(e.max_s_err) << ','
        << csv::format(e.max_cmat_err) << "\n";

  double worst_grad = 0.0, worst_hess = 0.0;
  for (const FdCheckEntry& e : report.entries) {
    worst_grad = std::max({worst_grad, e.max_stress_err, e.max_s_err});
    worst_hess = std::max({worst_hess, e.max_tangent_err, e.max_cmat_err});
  }
  std::printf("fdcheck seed %llu: max gradient error %.3g (tol %.0e), max Hessian error %.3g (tol %.0e)\n",
              static_cast<unsigned long long>(seed), worst_grad, report.stress_tol, worst_hess,
              report.tangent_tol);
  if (!report.passed()) {
    std::fprintf(stderr, "error: numerical: finite-difference verification failed\n");
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_fit(const json& cfg, const fs::path& outdir, std::optional<std::uint64_t> seed_arg) {
  check_keys(cfg,
             {"datasets", "family", "free", "fixed", "start", "estimate_mu", "multi_starts",
              "max_iterations", "seed"},
             "fit");
  if (!cfg.contains("datasets")) config_error("fit: missing 'datasets'");

  std::vector<ExperimentDataset> datasets;
  for (const json& d : cfg["datasets"]) {
    check_keys(d, {"path", "direction", "label"}, "fit.datasets");
    const std::string path = d.at("path").get<std::string>();
    const std::string dir_name = d.value("direction", "circumferential");
    ExperimentDataset::Direction dir;
    if (dir_name == "circumferential")
      dir = ExperimentDataset::Direction::circumferential;
    else if (dir_name == "axial")
      dir = ExperimentDataset::Direction::axial;
    else
      config_error("fit: direction must be 'circumferential' or 'axial'");
    datasets.push_back(load_dataset(path, d.value("label", path), dir));
  }

  FitModelFamily family;
  if (cfg.contains("family")) {
    const json& fam = cfg["family"];
    check_keys(fam, {"isotropic", "exponent", "eps"}, "fit.family");
    const std::string iso = fam.value("isotropic", "exp_hencky");
    if (iso == "hencky")
      family.exponentiated_iso = false;
    else if (iso == "exp_hencky")
      family.exponentiated_iso = true;
    else
      config_error("fit: family.isotropic must be 'hencky' or 'exp_hencky'");
    family.fiber_exponent = int_or(fam, "exponent", 2);
    family.fiber_eps = number_or(fam, "eps", 0.1);
  }

  FitConfig fit_cfg;
  fit_cfg.multi_starts = int_or(cfg, "multi_starts", 8);
  fit_cfg.max_iterations = int_or(cfg, "max_iterations", 200);
  fit_cfg.seed = seed_arg ? *seed_arg : static_cast<std::uint64_t>(cfg.value("seed", 42));

  if (cfg.contains("fixed"))
    for (const auto& [key, value] : cfg["fixed"].items())
      fit_cfg.fixed_parameters[key] = value.get<double>();
  if (cfg.value("estimate_mu", false)) {
    const double mu = estimate_mu(datasets);
    fit_cfg.fixed_parameters["mu"] = mu;
    std::printf("estimated mu from initial tangents: %s kPa\n", csv::format(mu).c_str());
  }

  // canonical parameter order for the start vector
  const std::vector<std::string> order = {"mu", "k", "mu1", "k1", "beta_f"};
  if (!cfg.contains("free")) config_error("fit: missing 'free'");
  for (const std::string& name : order) {
    if (!cfg["free"].contains(name)) continue;
    const json& spec = cfg["free"][name];
    ParamSpec ps;
    ps.name = name;
    ps.log_scale = name != "beta_f";  // scale parameters optimize in log space
    if (spec.is_array()) {
      const auto b = spec.get<std::vector<double>>();
      if (b.size() != 2) config_error("fit: free." + name + " needs [lower, upper]");
      ps.lower = b[0];
      ps.upper = b[1];
    } else {
      check_keys(spec, {"lower", "upper", "log"}, "fit.free." + name);
      ps.lower = need_number(spec, "lower", "fit.free." + name);
      ps.upper = need_number(spec, "upper", "fit.free." + name);
      if (spec.contains("log")) ps.log_scale = spec["log"].get<bool>();
    }
    fit_cfg.free_parameters.push_back(ps);
  }
  for (const auto& [key, value] : cfg["free"].items()) {
    bool known = false;
    for (const std::string& name : order) known = known || name == key;
    if (!known) config_error("fit: unknown free parameter '" + key + "'");
  }

  if (cfg.contains("start")) {
    std::vector<double> start;
    for (const ParamSpec& ps : fit_cfg.free_parameters) {
      if (!cfg["start"].contains(ps.name)) config_error("fit: start missing '" + ps.name + "'");
      start.push_back(cfg["start"][ps.name].get<double>());
    }
    fit_cfg.start = start;
  }

  const FitResult res = fit(family, datasets, fit_cfg);

  // report mirroring the fitted-parameter tables
  {
    std::ofstream rep(outdir / "fit_report.txt", std::ios::binary);
    rep << "# seed " << fit_cfg.seed << "\n";
    rep << "family: " << (family.exponentiated_iso ? "W_eH" : "W_H") << " + 2x fiber_h(i="
        << family.fiber_exponent << ", eps=" << csv::format(family.fiber_eps) << ")\n";
    rep << "parameter,value\n";
    for (const std::string& name : order)
      if (res.parameters.count(name)) rep << name << ',' << csv::format(res.parameters.at(name)) << "\n";
    rep << "f_obj," << csv::format(res.f_obj) << "\n";
    rep << "best_start," << res.best_start << "\n";
    rep << "converged," << (res.no_progress ? "no_progress" : "yes") << "\n";
    rep << "newton_penalty," << (res.newton_penalty ? "yes" : "no") << "\n";
  }
  {
    std::ofstream tr(outdir / "fit_trace.csv", std::ios::binary);
    tr << "# seed " << fit_cfg.seed << "\n";
    tr << "start,iteration,f_obj,gradient_norm,step_norm\n";
    for (const FitTracePoint& p : res.trace)
      tr << p.start_index << ',' << p.iteration << ',' << csv::format(p.f) << ','
         << csv::format(p.gradient_norm) << ',' << csv::format(p.step_norm) << "\n";
  }
  {
    csv::Table t;
    t.header = {"dataset", "stretch", "stress_exp_kpa", "stress_sim_kpa"};
    for (const ResidualCurve& c : res.curves)
      for (std::size_t i = 0; i < c.stretch.size(); ++i)
        t.rows.push_back({c.label, csv::format(c.stretch[i]), csv::format(c.stress_exp[i]),
                          csv::format(c.stress_sim[i])});
    t.write((outdir / "fit_curves.csv").string());
  }

  std::printf("fit: f_obj = %s", csv::format(res.f_obj).c_str());
  for (const std::string& name : order)
    if (res.parameters.count(name))
      std::printf("  %s = %s", name.c_str(), csv::format(res.parameters.at(name)).c_str());
  std::printf("\n");

  const bool failed = res.newton_penalty || res.f_obj >= 10.0 * static_cast<double>(datasets.size());
  if (failed) {
    std::fprintf(stderr, "error: fit_failure: calibration did not converge\n");
    return kExitFit;
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_config:
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
      return kExitConfig;
    case ErrorCode::fit_failure:
      return kExitFit;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "constitutive-model laboratory for Hencky-type hyperelasticity\n"
      "config units: moduli in kPa, angles in degrees, k-parameters dimensionless"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (comments allowed)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed override");
  };

  CLI::App* tangent = app.add_subcommand("tangent", "print the 6x6 reference tangent of a model");
  CLI::App* identify = app.add_subcommand("identify", "recover parameters from a reference tangent");
  CLI::App* drive = app.add_subcommand("drive", "homogeneous deformation sweeps");
  CLI::App* sphere = app.add_subcommand("sphere", "invariant maps over fiber directions");
  CLI::App* fdcheck = app.add_subcommand("fdcheck", "finite-difference derivative verification");
  CLI::App* fit = app.add_subcommand("fit", "calibrate a two-fiber model against datasets");
  for (CLI::App* sub : {tangent, identify, drive, sphere, fdcheck, fit}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const json cfg = load_config(config_path);
    const fs::path outdir = ensure_outdir(out_dir);
    if (tangent->parsed()) return cmd_tangent(cfg, outdir);
    if (identify->parsed()) return cmd_identify(cfg, outdir);
    if (drive->parsed()) return cmd_drive(cfg, outdir);
    if (sphere->parsed()) return cmd_sphere(cfg, outdir);
    if (fdcheck->parsed()) return cmd_fdcheck(cfg, outdir, seed);
    if (fit->parsed()) return cmd_fit(cfg, outdir, seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.category(), e.what());
    return exit_code_for(e);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: invalid_config: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
