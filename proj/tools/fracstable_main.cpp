// fracstable: construct, validate, simulate, and classify periodic/cyclic
// fractional stable motions from their kernel representations.
//
// Exit codes: 0 success, 2 domain/validation error, 3 inconclusive
// numerical verdict.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracstable/char_exponent.hpp"
#include "fracstable/classifier.hpp"
#include "fracstable/flow.hpp"
#include "fracstable/integrability.hpp"
#include "fracstable/kernel_json.hpp"
#include "fracstable/registry.hpp"
#include "fracstable/simulate.hpp"

namespace {

using nlohmann::json;
using namespace fracstable;

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 2;
constexpr int kExitInconclusive = 3;

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << j.dump(2) << "\n";
}

// Accepts "a,b,c" or "start:step:stop".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo, step, hi;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' ||
        step <= 0.0)
      throw std::invalid_argument("bad range '" + text + "', want lo:step:hi");
    for (double x = lo; x <= hi + 0.5 * step; x += step) out.push_back(x);
    return out;
  }
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

const char* verdict_name(ProcessClass v) {
  switch (v) {
    case ProcessClass::cfsm: return "CFSM";
    case ProcessClass::mixed_lfsm: return "mixed-LFSM";
    case ProcessClass::pfsm_with_mixed_component:
      return "PFSM-with-mixed-LFSM-component";
    case ProcessClass::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* verdict_name(AtomVerdict v) {
  switch (v) {
    case AtomVerdict::cyclic: return "CYCLIC";
    case AtomVerdict::fixed: return "FIXED";
    case AtomVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* verdict_name(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::essentially_identical:
      return "essentially-identical";
    case UniquenessVerdict::essentially_different:
      return "essentially-different";
    case UniquenessVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

json norm_json(const NormReport& r) {
  json j = to_json(r);
  j["verdict"] = r.divergent ? "divergent"
                             : (r.converged ? "finite" : "inconclusive");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic and cyclic fractional stable motions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string out_path;
  double rel_tol = 1e-6;
  std::uint64_t seed = 42;
  int threads = 0;
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

  // registry
  auto* cmd_registry = app.add_subcommand("registry", "emit a built-in kernel");
  std::string reg_name;
  double reg_alpha = 1.6, reg_H = 0.5;
  cmd_registry->add_option("--name", reg_name, "kernel name")->required();
  cmd_registry->add_option("--alpha", reg_alpha, "stability index in (0,2)");
  cmd_registry->add_option("--H", reg_H, "self-similarity index in (0,1)");

  // check
  auto* cmd_check = app.add_subcommand("check", "well-definedness report");
  std::string check_spec;
  cmd_check->add_option("--spec", check_spec, "kernel spec JSON")->required();

  // norm
  auto* cmd_norm = app.add_subcommand("norm", "increment scale sigma(t)");
  std::string norm_spec;
  double norm_t = 1.0;
  cmd_norm->add_option("--spec", norm_spec, "kernel spec JSON")->required();
  cmd_norm->add_option("--t", norm_t, "increment length");

  // charfn
  auto* cmd_charfn = app.add_subcommand("charfn", "joint characteristic exponent");
  std::string charfn_spec, charfn_t = "1", charfn_theta = "1";
  cmd_charfn->add_option("--spec", charfn_spec, "kernel spec JSON")->required();
  cmd_charfn->add_option("--t", charfn_t, "comma list of times");
  cmd_charfn->add_option("--theta", charfn_theta, "comma list of coefficients");

  // selfsim
  auto* cmd_selfsim = app.add_subcommand("selfsim", "self-similarity residual");
  std::string selfsim_spec, selfsim_t = "1", selfsim_theta = "1";
  double selfsim_a = 2.0;
  cmd_selfsim->add_option("--spec", selfsim_spec, "kernel spec JSON")->required();
  cmd_selfsim->add_option("--a", selfsim_a, "scaling factor");
  cmd_selfsim->add_option("--t", selfsim_t, "comma list of times");
  cmd_selfsim->add_option("--theta", selfsim_theta, "comma list of coefficients");

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "CFSM / mixed-LFSM verdict");
  std::string classify_spec;
  cmd_classify->add_option("--spec", classify_spec, "kernel spec JSON")
      ->required();

  // unique
  auto* cmd_unique = app.add_subcommand("unique", "essential identity search");
  std::string unique_a, unique_b;
  cmd_unique->add_option("--spec-a", unique_a, "first kernel")->required();
  cmd_unique->add_option("--spec-b", unique_b, "second kernel")->required();

  // verify-flow
  auto* cmd_flow = app.add_subcommand("verify-flow",
                                      "flow/cocycle/semi-additive residuals");
  std::string flow_spec;
  std::size_t flow_samples = 10000;
  cmd_flow->add_option("--spec", flow_spec, "kernel spec JSON")->required();
  cmd_flow->add_option("--samples", flow_samples, "sample count");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo sample paths");
  std::string sim_spec, sim_t = "0:0.01:1";
  std::size_t sim_reps = 1000;
  double sim_umax = 500.0;
  int sim_ucells = 2000, sim_vcells = 16;
  cmd_sim->add_option("--spec", sim_spec, "kernel spec JSON")->required();
  cmd_sim->add_option("--t", sim_t, "time grid, list or lo:step:hi");
  cmd_sim->add_option("--reps", sim_reps, "replications");
  cmd_sim->add_option("--u-max", sim_umax, "truncation radius");
  cmd_sim->add_option("--u-cells", sim_ucells, "u cell count");
  cmd_sim->add_option("--v-cells", sim_vcells, "v cells per atom");

  CLI11_PARSE(app, argc, argv);

  QuadratureConfig qcfg;
  qcfg.rel_tol = rel_tol;

  try {
    if (cmd_registry->parsed()) {
      KernelSpec spec = make_registry_kernel(reg_name, reg_alpha, reg_H);
      emit(to_json(spec), out_path);
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      KernelSpec spec = load_kernel_spec(check_spec);
      json atoms = json::array();
      for (const auto& atom : spec.atoms) {
        SufficientConditions sc = sufficient_conditions(atom, spec.params);
        atoms.push_back(json{{"bounded", sc.bounded},
                             {"sup_bound", sc.sup_bound},
                             {"abs_continuous", sc.abs_continuous},
                             {"deriv_bound", sc.deriv_bound},
                             {"boundary_match", sc.boundary_match},
                             {"boundary_required", sc.boundary_required},
                             {"sufficient", sc.sufficient}});
      }
      NormReport cq = integrand_space_norm(spec, qcfg);
      json j{{"label", spec.label},
             {"sufficient_conditions", atoms},
             {"cq_norm", norm_json(cq)}};
      if (cq.divergent)
        j["well_defined"] = false;
      else if (cq.converged)
        j["well_defined"] = true;
      else
        j["well_defined"] = "inconclusive";
      emit(j, out_path);
      return cq.converged || cq.divergent ? kExitOk : kExitInconclusive;
    }

    if (cmd_norm->parsed()) {
      KernelSpec spec = load_kernel_spec(norm_spec);
      NormReport r = increment_scale(spec, norm_t, qcfg);
      json j = norm_json(r);
      j["t"] = norm_t;
      emit(j, out_path);
      return r.converged ? kExitOk : kExitInconclusive;
    }

    if (cmd_charfn->parsed()) {
      KernelSpec spec = load_kernel_spec(charfn_spec);
      std::vector<double> t = parse_grid(charfn_t);
      std::vector<double> theta = parse_grid(charfn_theta);
      CharExponentResult r = char_exponent(spec, t, theta, qcfg);
      json j{{"t", t},
             {"theta", theta},
             {"psi", r.value},
             {"error_estimate", r.error_estimate},
             {"converged", r.converged}};
      emit(j, out_path);
      return r.converged ? kExitOk : kExitInconclusive;
    }

    if (cmd_selfsim->parsed()) {
      KernelSpec spec = load_kernel_spec(selfsim_spec);
      std::vector<double> t = parse_grid(selfsim_t);
      std::vector<double> theta = parse_grid(selfsim_theta);
      ResidualReport r =
          self_similarity_residual(spec, selfsim_a, t, theta, qcfg);
      json j{{"a", selfsim_a},
             {"t", t},
             {"theta", theta},
             {"residual", r.residual},
             {"psi_scaled", r.lhs},
             {"psi_reference", r.rhs},
             {"converged", r.converged}};
      emit(j, out_path);
      return r.converged ? kExitOk : kExitInconclusive;
    }

    if (cmd_classify->parsed()) {
      KernelSpec spec = load_kernel_spec(classify_spec);
      ClassifierConfig ccfg;
      ccfg.threads = threads;
      ClassificationReport rep = classify_cfsm(spec, ccfg);
      json atoms = json::array();
      for (const auto& a : rep.atoms)
        atoms.push_back(json{{"verdict", verdict_name(a.verdict)},
                             {"min_residual", a.min_residual},
                             {"period_return_residual",
                              a.period_return_residual}});
      json j{{"label", spec.label},
             {"verdict", verdict_name(rep.verdict)},
             {"atoms", atoms},
             {"alpha_in_open_1_2", rep.alpha_in_open_1_2}};
      if (!rep.alpha_in_open_1_2)
        j["caveat"] =
            "class labels are asserted by the theory only for alpha in (1,2)";
      emit(j, out_path);
      return rep.verdict == ProcessClass::inconclusive ? kExitInconclusive
                                                       : kExitOk;
    }

    if (cmd_unique->parsed()) {
      KernelSpec a = load_kernel_spec(unique_a);
      KernelSpec b = load_kernel_spec(unique_b);
      ClassifierConfig ccfg;
      ccfg.threads = threads;
      UniquenessReport rep;
      if (a.atoms.size() == 1 && b.atoms.size() == 1) {
        rep = uniqueness_search(a, b, ccfg);
      } else {
        // Multi-atom kernels: run the necessary-condition search on the
        // first atom sections.
        rep = uniqueness_search(section_of(a, 0), section_of(b, 0),
                                a.params.alpha, ccfg);
        rep.iff_applicable = false;
        if (rep.verdict == UniquenessVerdict::essentially_identical)
          rep.verdict = UniquenessVerdict::inconclusive;
      }
      json j{{"h", rep.h},
             {"k", rep.k},
             {"g", rep.g},
             {"j", rep.j},
             {"residual", rep.residual},
             {"verdict", verdict_name(rep.verdict)},
             {"iff_applicable", rep.iff_applicable},
             {"identical_fdd", rep.identical_fdd},
             {"fit_tol", rep.fit_tol},
             {"separation_floor", rep.separation_floor}};
      emit(j, out_path);
      return rep.verdict == UniquenessVerdict::inconclusive ? kExitInconclusive
                                                            : kExitOk;
    }

    if (cmd_flow->parsed()) {
      KernelSpec spec = load_kernel_spec(flow_spec);
      CyclicFlow flow = CyclicFlow::from_spec(spec);
      auto samples = draw_flow_samples(flow, flow_samples, seed);

      FlowTriple canon = FlowTriple::canonical(spec);
      // Randomized generators exercise the general functional families.
      FlowTriple random_triple = canon;
      RngStream gen_rng(seed, 99);
      double a0 = gen_rng.next_unit() * 2.0 - 1.0;
      double a1 = gen_rng.next_unit() * 2.0 - 1.0;
      double a2 = gen_rng.next_unit() * 2.0 - 1.0;
      random_triple.b_gen = [&flow](std::size_t i, double v) {
        return std::sin(3.0 * v + 0.4) > 0.0 ? 1.0 : -1.0;
      };
      random_triple.g_gen = [a0, a1, a2, &flow](std::size_t i, double v) {
        double q = flow.atoms[i].q;
        return a0 + a1 * std::sin(2.0 * M_PI * v / q) + a2 * v * v / (q * q);
      };
      random_triple.j_gen = [a0, a1, &flow](std::size_t i, double v) {
        double q = flow.atoms[i].q;
        return a1 * v / q + a0 * std::cos(2.0 * M_PI * v / q);
      };

      json j{{"label", spec.label},
             {"samples", samples.size()},
             {"flow_identity", verify_flow_identity(flow, samples)},
             {"cocycle", verify_cocycle(random_triple, samples)},
             {"semi_additive_1", verify_semi_additive_1(random_triple, samples)},
             {"semi_additive_2",
              verify_semi_additive_2(random_triple, spec.params, samples)},
             {"generation",
              generation_residual(spec, {0.5, 2.0, std::exp(1.0)}, 1000, seed)}};
      emit(j, out_path);
      return kExitOk;
    }

    if (cmd_sim->parsed()) {
      KernelSpec spec = load_kernel_spec(sim_spec);
      SimulationGrid grid;
      grid.t_grid = parse_grid(sim_t);
      grid.seed = seed;
      grid.u_max = sim_umax;
      grid.u_cells = sim_ucells;
      grid.v_cells = sim_vcells;
      PathEnsemble ens = simulate_paths(spec, grid, sim_reps, threads);
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
        os = &file;
      }
      (*os) << "rep,t,value\n";
      char buf[64];
      for (std::size_t r = 0; r < ens.reps; ++r)
        for (std::size_t k = 0; k < ens.t_grid.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", r, ens.t_grid[k],
                        ens.at(r, k));
          (*os) << buf;
        }
      return kExitOk;
    }
  } catch (const spec_parse_error& e) {
    std::cerr << json{{"error", e.what()}, {"field", e.field_path}}.dump()
              << "\n";
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitDomainError;
  } catch (const std::domain_error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}
