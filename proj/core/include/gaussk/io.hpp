#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "gaussk/dynamics.hpp"
#include "gaussk/kahler.hpp"
#include "gaussk/states.hpp"

namespace gaussk {

/// Kahler-triple files: {"stats","N","convention","G","Omega","J"}, matrices
/// as row-major arrays, QP convention, full double precision.
void write_triple(const std::string& path, const KahlerTriple& t);
KahlerTriple read_triple(const std::string& path);

using StateVariant = std::variant<PureGaussianState, MixedGaussianState>;

/// State files: {"stats","N","convention","J","z"} for pure states or
/// {"stats","N","q","z","mixed":true} for mixed ones.
void write_state(const std::string& path, const PureGaussianState& s);
void write_state(const std::string& path, const MixedGaussianState& s);
StateVariant read_state(const std::string& path);

/// Hamiltonian files: {"stats","h","f","c0"} or a model preset
/// {"model":"harmonic_chain",...} / {"model":"kitaev_chain",...}.
struct HamiltonianFile {
  QuadraticHamiltonian H;
  DrivenHamiltonian driven;  // time dependent iff `time_dependent`
  bool time_dependent = false;
  std::string description;
};

HamiltonianFile read_hamiltonian(const std::string& path);

void write_ground_state(const std::string& path, const PureGaussianState& s, double energy);

/// CSV with a numeric-policy comment line, a header row, and %.17g floats.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  size_t n_columns_;
};

}  // namespace gaussk
