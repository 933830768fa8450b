#include "fracstable/registry.hpp"

#include <cmath>
#include <stdexcept>

namespace fracstable {

std::vector<std::string> registry_names() {
  return {"linear", "tent", "indicator", "cosine", "mixed-lfsm"};
}

std::vector<LambdaAtom> default_cosine_lambda() {
  std::vector<LambdaAtom> atoms;
  for (int z = 1; z <= 5; ++z)
    atoms.push_back({static_cast<double>(z), std::exp(-static_cast<double>(z))});
  return atoms;
}

KernelSpec make_cosine_kernel(const StableParams& params,
                              const std::vector<LambdaAtom>& lambda_atoms,
                              std::string label) {
  if (lambda_atoms.empty())
    throw std::invalid_argument("cosine kernel needs at least one mixing atom");
  double zw = 0.0;
  for (const auto& a : lambda_atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight) || !std::isfinite(a.z) ||
        a.z == 0.0)
      throw std::invalid_argument(
          "cosine kernel: mixing atoms need nonzero finite z and positive "
          "weight");
    zw += std::pow(std::fabs(a.z), params.alpha) * a.weight;
  }
  if (!std::isfinite(zw))
    throw std::invalid_argument("cosine kernel: divergent |z|^alpha moment");

  double q = 2.0 * M_PI;
  std::vector<AtomSpec> atoms;
  for (const auto& a : lambda_atoms)
    atoms.emplace_back(a.weight, q, 1, a.z, ProfileFn::cosine(q, 1.0, 0.0),
                       ProfileFn::constant(q, 0.0), 0.0);
  return KernelSpec(params, std::move(atoms), std::move(label));
}

KernelSpec make_registry_kernel(const std::string& name, double alpha,
                                double H) {
  StableParams params(alpha, H);
  if (name == "linear") {
    std::vector<AtomSpec> atoms;
    atoms.emplace_back(1.0, 1.0, 1, 1.0, ProfileFn::linear(1.0),
                       ProfileFn::constant(1.0, 0.0), 0.0);
    return KernelSpec(params, std::move(atoms), "linear");
  }
  if (name == "tent") {
    std::vector<AtomSpec> atoms;
    atoms.emplace_back(1.0, 1.0, 1, 1.0, ProfileFn::tent(1.0),
                       ProfileFn::constant(1.0, 0.0), 0.0);
    return KernelSpec(params, std::move(atoms), "tent");
  }
  if (name == "indicator") {
    std::vector<AtomSpec> atoms;
    atoms.emplace_back(1.0, 1.0, 1, 1.0, ProfileFn::indicator(1.0),
                       ProfileFn::constant(1.0, 0.0), 0.0);
    return KernelSpec(params, std::move(atoms), "indicator");
  }
  if (name == "cosine")
    return make_cosine_kernel(params, default_cosine_lambda());
  if (name == "mixed-lfsm") {
    MixedLfsmSpec m{params, {{1.0, 1.0, 0.0}}};
    return embed_mixed_lfsm(m);
  }
  throw std::invalid_argument("unknown registry kernel '" + name + "'");
}

}  // namespace fracstable
