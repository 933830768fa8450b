// Built-in example kernels: the three single-atom profiles, the
// harmonizable cosine family with a discretized mixing measure, and the
// embedded mixed LFSM.
#pragma once

#include <string>
#include <vector>

#include "fracstable/integrability.hpp"
#include "fracstable/kernel.hpp"

namespace fracstable {

std::vector<std::string> registry_names();

/// Cosine kernel with mixing atoms lambda = sum w_i delta_{z_i}; each atom
/// has period 2*pi, unit b1, speed z_i, and the plain cosine profile.
KernelSpec make_cosine_kernel(const StableParams& params,
                              const std::vector<LambdaAtom>& lambda_atoms,
                              std::string label = "cosine");

/// Named registry entries. `linear`, `tent`, `indicator` are single-atom
/// unit-period kernels; `cosine` uses the default five-atom discretization
/// z = 1..5 with weights e^{-z}; `mixed-lfsm` embeds a single-atom LFSM.
KernelSpec make_registry_kernel(const std::string& name, double alpha,
                                double H);

/// Default mixing atoms of the registry cosine kernel.
std::vector<LambdaAtom> default_cosine_lambda();

}  // namespace fracstable
