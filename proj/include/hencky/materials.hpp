// Strain-energy catalog in logarithmic strain space: quadratic and
// exponentiated Hencky energies, their transversely isotropic and orthotropic
// extensions, and the fiber energies in both Cauchy-Green and log-strain
// invariants with tension/compression switch logic. Every model exposes the
// energy plus its analytic first and second derivatives with respect to log U.
#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "hencky/kinematics.hpp"
#include "hencky/tensor.hpp"

namespace hencky {

struct LogSpaceResponse {
  double energy = 0.0;       // kPa
  SymTensor3 stress_h;       // d psi / d log U
  Tensor4V tangent_h;        // d^2 psi / d log U d log U
};

struct IsoHencky {
  double mu = 1.0;
  double kappa = 1.0;
};

struct IsoExpHencky {
  double mu = 1.0;
  double kappa = 1.0;
  double k = 1.0;
  double khat = 1.0;
  // 2D polyconvexity needs k > 1/3 and khat > 1/8; outside is allowed but
  // flagged.
  bool outside_polyconvex_range() const { return k <= 1.0 / 3.0 || khat <= 1.0 / 8.0; }
};

struct TIHencky {
  double mu_t = 1.0;
  double kappa = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double mu_l = 1.0;

  static TIHencky from_lame(double lambda, double mu_t, double alpha, double beta, double mu_l);
};

struct TIExpHencky {
  double mu_t = 1.0;
  double kappa = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double mu_l = 1.0;
  std::array<double, 5> k{1, 1, 1, 1, 1};

  static TIExpHencky from_lame(double lambda, double mu_t, double alpha, double beta, double mu_l,
                               const std::array<double, 5>& k);
};

struct OrthoHencky {
  double mu = 1.0;
  double kappa = 1.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double mu1 = 0.0, mu2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
};

struct OrthoExpHencky {
  double mu = 1.0;
  double kappa = 1.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double mu1 = 0.0, mu2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
  std::array<double, 9> k{1, 1, 1, 1, 1, 1, 1, 1, 1};
};

// Fiber energy in <C^i, M>, optionally switched off when <C^i, M> < 1.
struct FiberC {
  double mu1 = 1.0;
  double k1 = 1.0;
  int exponent = 1;
  bool switched = false;
};

// Fiber energy in <(log U)^i, M>, optionally switched off when <log U, M> < 0.
// A positive eps enables the <log U, M>^eps factor that removes the stress
// jump at the switchover point.
struct FiberH {
  double mu1 = 1.0;
  double k1 = 1.0;
  int exponent = 1;
  double eps = 0.0;
  bool switched = false;
};

// Polynomial fiber law mu1/(2 k1) (<C, M> - 1)^k1 with even k1.
struct FiberPolyC {
  double mu1 = 1.0;
  int k1 = 2;
};

// Classical arterial-wall exponential fiber energy (switched, i = 1).
struct FiberHGO {
  double mu1 = 1.0;
  double k1 = 1.0;
  bool switched = true;
};

using IsotropicModel = std::variant<IsoHencky, IsoExpHencky>;
using FiberModel = std::variant<FiberC, FiberH, FiberPolyC, FiberHGO>;

struct Composite {
  IsotropicModel isotropic;
  std::vector<std::pair<FiberModel, StructuralTensor>> fibers;
};

using MaterialModel = std::variant<IsoHencky, IsoExpHencky, TIHencky, TIExpHencky, OrthoHencky,
                                   OrthoExpHencky, FiberC, FiberH, FiberPolyC, FiberHGO, Composite>;

// Throws validation_error on non-positive moduli or an odd polynomial degree.
void validate(const MaterialModel& model);

// Structural tensors the model expects alongside the state (0 for isotropic
// and composite models, 1 for TI and single-fiber models, 2 for orthotropy).
std::size_t fiber_arity(const MaterialModel& model);

enum class SwitchCriterion { cauchy_green, hencky };

// Case-distinction branch: C-based checks <C^i, M> >= 1, H-based always
// checks <log U, M> >= 0 regardless of the energy's exponent.
bool fiber_switch(SwitchCriterion criterion, const DeformationState& state,
                  const StructuralTensor& m, int exponent);

LogSpaceResponse evaluate(const MaterialModel& model, const DeformationState& state,
                          std::span<const StructuralTensor> fibers = {});

LogSpaceResponse evaluate_fiber(const FiberModel& model, const DeformationState& state,
                                const StructuralTensor& m);

}  // namespace hencky
