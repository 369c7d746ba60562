// Finite-difference verification of the analytic derivatives over a built-in
// catalog of model variants: log-space stress against the energy gradient,
// log-space tangent against the stress Jacobian, and the assembled S and
// material tangent against differences in C.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hencky/materials.hpp"

namespace hencky {

struct FdCheckEntry {
  std::string model;
  int states = 0;
  double max_stress_err = 0.0;    // analytic vs FD of the energy
  double max_tangent_err = 0.0;   // analytic vs FD of the stress
  double max_s_err = 0.0;         // S vs 2 d(energy)/dC
  double max_cmat_err = 0.0;      // C against 2 dS/dC
};

struct FdCheckReport {
  std::uint64_t seed = 0;
  std::vector<FdCheckEntry> entries;
  double stress_tol = 1e-6;
  double tangent_tol = 1e-5;
  bool passed() const;
};

FdCheckReport run_fd_checks(std::uint64_t seed, int states_per_model);

}  // namespace hencky
