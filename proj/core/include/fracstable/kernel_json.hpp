// JSON (de)serialization of kernel specs. The document layout is part of
// the tool's contract:
//   {label, alpha, H, atoms: [{weight, q, b1, s,
//                              F1: {family, params}, F2: {...}, F3}]}
// Unknown fields are rejected with a field-path diagnostic.
#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fracstable/kernel.hpp"
#include "fracstable/quadrature.hpp"

namespace fracstable {

struct spec_parse_error : std::runtime_error {
  std::string field_path;
  spec_parse_error(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), field_path(path) {}
};

nlohmann::json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NormReport& report);

KernelSpec load_kernel_spec(const std::string& path);
void save_kernel_spec(const KernelSpec& spec, const std::string& path);

}  // namespace fracstable
