#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsplit {

/// Physical scales. Everything else in the library is dimensionless:
/// lengths in L, energies in E0 = pi^2 hbar^2 / (2 m L^2), times in tau = hbar / E0.
struct WellUnits {
  double L = 1.0;
  double m = 1.0;
  double hbar = 1.0;

  static constexpr double kHbarSI = 1.054571817e-34;         // J s
  static constexpr double kElectronMassSI = 9.1093837015e-31;  // kg
  static constexpr double kAngstrom = 1e-10;                 // m

  static WellUnits si(double length_m, double mass_kg);
  static WellUnits electron_angstrom(double length_angstrom = 1.0);

  [[nodiscard]] double E0() const;
  [[nodiscard]] double tau() const;
  [[nodiscard]] double to_tau(double time) const { return time / tau(); }
  [[nodiscard]] double from_tau(double t_tau) const { return t_tau * tau(); }
};

enum class BasisKind { FullWell, SubLeft, SubRight, Oscillator };

struct BasisDescriptor {
  BasisKind kind = BasisKind::FullWell;
  double width = 1.0;   // support width as a fraction of L
  double offset = 0.0;  // left edge of the support

  static BasisDescriptor full_well();
  static BasisDescriptor sub_left(double w);
  static BasisDescriptor sub_right(double w);  // support [1 - w, 1]
  static BasisDescriptor oscillator();

  [[nodiscard]] double lo() const { return offset; }
  [[nodiscard]] double hi() const { return offset + width; }
  [[nodiscard]] bool is_well() const { return kind != BasisKind::Oscillator; }
  [[nodiscard]] std::size_t min_index() const { return kind == BasisKind::Oscillator ? 0 : 1; }

  friend bool operator==(const BasisDescriptor&, const BasisDescriptor&) = default;
};

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

struct Term {
  std::size_t n = 1;
  std::complex<double> c;
};

/// Truncated expansion over one eigenbasis. Immutable after construction;
/// the constructor enforces ordering and the norm invariants.
class SpectralState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  SpectralState() = default;
  SpectralState(BasisDescriptor basis, std::vector<Term> terms, bool normalized);

  /// Divides by the current norm and marks the state normalized.
  static SpectralState normalized_copy(BasisDescriptor basis, std::vector<Term> terms);

  [[nodiscard]] const BasisDescriptor& basis() const { return basis_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool normalized() const { return normalized_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] double norm_sq() const;

  /// Keep the first m terms.
  [[nodiscard]] SpectralState truncated(std::size_t m, bool renormalize) const;

 private:
  BasisDescriptor basis_;
  std::vector<Term> terms_;
  bool normalized_ = false;
};

struct GridFunction {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::complex<double>> samples;
  double time = 0.0;

  void validate() const;
  [[nodiscard]] double xi(std::size_t i) const;
  [[nodiscard]] double spacing() const;
};

double eigenfunction(const BasisDescriptor& basis, std::size_t n, double xi);
double eigenenergy(const BasisDescriptor& basis, std::size_t n);

struct IntegrateOptions {
  double tol = 1e-12;
  int max_depth = 60;
  // Initial uniform panels. Oscillatory integrands need more panels than
  // half-periods or the first Simpson comparison can agree by accident.
  int initial_panels = 8;
};

double integrate(const std::function<double(double)>& f, double a, double b, double tol);
double integrate(const std::function<double(double)>& f, double a, double b,
                 const IntegrateOptions& opt);

double state_energy(const SpectralState& state);

void to_json(nlohmann::json& j, const BasisDescriptor& b);
void from_json(const nlohmann::json& j, BasisDescriptor& b);
void to_json(nlohmann::json& j, const SpectralState& s);
SpectralState spectral_state_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const GridFunction& g);
void from_json(const nlohmann::json& j, GridFunction& g);

}  // namespace qsplit
