#include "gaussk/policy.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaussk/errors.hpp"

namespace gaussk {

std::string NumericPolicy::describe() const {
  std::ostringstream os;
  os.precision(3);
  os << "structure_tol=" << structure_tol << " decomposition_tol=" << decomposition_tol
     << " branch_tol=" << branch_tol << " series_threshold=" << series_threshold
     << " condition_limit=" << condition_limit << " clip_band=" << clip_band
     << " boson_cutoff=" << boson_cutoff;
  return os.str();
}

NumericPolicy load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("policy file " + path + " is not valid JSON: " + e.what());
  }
  NumericPolicy p;
  for (auto& [key, val] : j.items()) {
    if (key == "structure_tol") p.structure_tol = val.get<double>();
    else if (key == "decomposition_tol") p.decomposition_tol = val.get<double>();
    else if (key == "branch_tol") p.branch_tol = val.get<double>();
    else if (key == "series_threshold") p.series_threshold = val.get<double>();
    else if (key == "condition_limit") p.condition_limit = val.get<double>();
    else if (key == "clip_band") p.clip_band = val.get<double>();
    else if (key == "boson_cutoff") p.boson_cutoff = val.get<int>();
    else if (key == "memory_budget_mb") p.memory_budget_mb = val.get<double>();
    else throw ValidationError("unknown policy key '" + key + "' in " + path);
  }
  return p;
}

namespace {
NumericPolicy make_initial_policy() {
  if (const char* env = std::getenv("GAUSSK_NUM_POLICY")) {
    return load_policy_file(env);
  }
  return NumericPolicy{};
}
}  // namespace

NumericPolicy& policy() {
  static NumericPolicy p = make_initial_policy();
  return p;
}

void set_policy(const NumericPolicy& p) { policy() = p; }

}  // namespace gaussk
