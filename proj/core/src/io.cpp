#include "gaussk/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "gaussk/policy.hpp"
#include "gaussk/presets.hpp"

namespace gaussk {

namespace {

using nlohmann::json;

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Mat mat_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ValidationError(std::string(what) + ": expected a nested array");
  }
  const auto rows = Eigen::Index(j.size());
  const auto cols = Eigen::Index(j[0].size());
  Mat m = Mat::Zero(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (Eigen::Index(j[size_t(i)].size()) != cols) {
      throw ValidationError(std::string(what) + ": ragged matrix");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = j[size_t(i)][size_t(k)].get<double>();
    }
  }
  return m;
}

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  Vec v(Eigen::Index(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = j[i].get<double>();
  return v;
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError(path + ": invalid JSON: " + e.what());
  }
  return j;
}

void save(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(1) << "\n";
  if (!out) throw IoError("write to " + path + " failed");
}

void check_convention(const json& j, const std::string& path) {
  if (j.contains("convention") && ordering_from_string(j["convention"].get<std::string>()) !=
                                      Ordering::QP) {
    throw ValidationError(path + ": only the QP convention is stored in files");
  }
}

}  // namespace

void write_triple(const std::string& path, const KahlerTriple& t) {
  json j;
  j["stats"] = to_string(t.stats);
  j["N"] = t.n_modes;
  j["convention"] = "QP";
  j["G"] = to_json(t.G);
  j["Omega"] = to_json(t.Omega);
  j["J"] = to_json(t.J);
  save(path, j);
}

KahlerTriple read_triple(const std::string& path) {
  const json j = load(path);
  check_convention(j, path);
  if (!j.contains("stats")) throw ValidationError(path + ": missing 'stats'");
  const Statistics stats = statistics_from_string(j["stats"].get<std::string>());
  const bool has_G = j.contains("G"), has_O = j.contains("Omega"), has_J = j.contains("J");
  const int given = int(has_G) + int(has_O) + int(has_J);
  if (given < 2) throw ValidationError(path + ": need at least two of G, Omega, J");
  if (given == 3) {
    // all three given: rebuild from (G, Omega) and check J against the file
    KahlerTriple t = complete_triple(stats, mat_from_json(j["G"], "G"),
                                     mat_from_json(j["Omega"], "Omega"), std::nullopt);
    const Mat J_file = mat_from_json(j["J"], "J");
    if (max_abs(Mat(t.J - J_file)) > 1e2 * policy().decomposition_tol *
                                         std::max(1.0, max_abs(J_file))) {
      throw ValidationError(path + ": stored J is inconsistent with G and Omega");
    }
    return t;
  }
  std::optional<Mat> G, O, J;
  if (has_G) G = mat_from_json(j["G"], "G");
  if (has_O) O = mat_from_json(j["Omega"], "Omega");
  if (has_J) J = mat_from_json(j["J"], "J");
  return complete_triple(stats, std::move(G), std::move(O), std::move(J));
}

void write_state(const std::string& path, const PureGaussianState& s) {
  json j;
  j["stats"] = to_string(s.stats());
  j["N"] = s.n_modes();
  j["convention"] = "QP";
  j["J"] = to_json(s.J());
  j["z"] = to_json(s.z);
  save(path, j);
}

void write_state(const std::string& path, const MixedGaussianState& s) {
  json j;
  j["stats"] = to_string(s.stats);
  j["N"] = s.n_modes;
  j["convention"] = "QP";
  j["mixed"] = true;
  if (s.q) {
    j["q"] = to_json(*s.q);
  } else {
    j["J"] = to_json(s.J);
  }
  j["z"] = to_json(s.z);
  save(path, j);
}

StateVariant read_state(const std::string& path) {
  const json j = load(path);
  check_convention(j, path);
  if (!j.contains("stats")) throw ValidationError(path + ": missing 'stats'");
  const Statistics stats = statistics_from_string(j["stats"].get<std::string>());
  Vec z;
  if (j.contains("z")) z = vec_from_json(j["z"], "z");
  const bool mixed = j.value("mixed", false) || j.contains("q");
  if (mixed) {
    if (j.contains("q")) return mixed_from_q(stats, mat_from_json(j["q"], "q"), z);
    return mixed_from_J(stats, mat_from_json(j["J"], "J"), z);
  }
  if (!j.contains("J")) throw ValidationError(path + ": pure state needs 'J'");
  return pure_state(stats, mat_from_json(j["J"], "J"), z);
}

HamiltonianFile read_hamiltonian(const std::string& path) {
  const json j = load(path);
  HamiltonianFile out;
  if (j.contains("model")) {
    const std::string model = j["model"].get<std::string>();
    if (model == "harmonic_chain") {
      const int n = j.at("N").get<int>();
      const double omega = j.at("omega").get<double>();
      const double coupling = j.value("coupling", 0.0);
      out.H = harmonic_chain(n, omega, coupling);
      out.description = "harmonic_chain";
      if (j.contains("quench")) {
        const auto& q = j["quench"];
        out.driven = harmonic_chain_quench(n, omega, coupling, q.at("t0").get<double>(),
                                           q.at("omega2").get<double>());
        out.time_dependent = true;
        out.description += " (quench)";
      }
    } else if (model == "kitaev_chain") {
      out.H = kitaev_chain(j.at("N").get<int>(), j.at("mu").get<double>(),
                           j.at("J").get<double>(), j.at("Delta").get<double>());
      out.description = "kitaev_chain";
    } else {
      throw ValidationError(path + ": unknown model '" + model + "'");
    }
  } else {
    const Statistics stats =
        j.contains("stats") ? statistics_from_string(j["stats"].get<std::string>())
                            : Statistics::Boson;
    Vec f;
    if (j.contains("f")) f = vec_from_json(j["f"], "f");
    out.H = quadratic_hamiltonian(stats, mat_from_json(j.at("h"), "h"), f,
                                  j.value("c0", 0.0));
    out.description = "explicit";
  }
  if (!out.time_dependent) out.driven = constant_drive(out.H);
  return out;
}

void write_ground_state(const std::string& path, const PureGaussianState& s, double energy) {
  json j;
  j["stats"] = to_string(s.stats());
  j["N"] = s.n_modes();
  j["convention"] = "QP";
  j["J"] = to_json(s.J());
  j["z"] = to_json(s.z);
  j["E0"] = energy;
  save(path, j);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  out_ << "# gaussk numeric policy: " << policy().describe() << "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_) throw ValidationError("CsvWriter: column count mismatch");
  char buf[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out_ << buf << (i + 1 < values.size() ? "," : "");
  }
  out_ << "\n";
  if (!out_) throw IoError("CSV write failed");
}

}  // namespace gaussk
