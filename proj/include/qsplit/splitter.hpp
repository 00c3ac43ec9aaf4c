#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit {

/// Barrier at xi = 1 - epsilon; epsilon is the right chamber width.
struct SplitSpec {
  double epsilon = 0.5;

  static SplitSpec make(double epsilon);
  [[nodiscard]] double insertion_point() const { return 1.0 - epsilon; }
};

struct SplitResult {
  SpectralState left;
  SpectralState right;
  double norm_left_sq = 0.0;
  double norm_right_sq = 0.0;
  double energy_left = 0.0;   // unnormalized branch expectation, E0
  double energy_right = 0.0;
  std::size_t truncation = 0;
  double tail_bound = 0.0;    // |norm_left_sq + norm_right_sq - 1| allowance
};

enum class Side { Left, Right };
enum class Outcome { Present, Absent };

struct MeasurementOutcome {
  bool particle_found_left = false;
  double probability = 0.0;
  SpectralState post_state;
  double post_energy = 0.0;
};

inline constexpr double kFixedNodeTolerance = 1e-9;

bool is_fixed_node(const SpectralState& state, double x0);
SplitResult decompose_fixed(const SpectralState& state, double x0);

/// Lueders update. The branch is the chamber that holds the particle given
/// the outcome; its probability is the branch squared norm. The post-state
/// is the retained branch terms rescaled to unit norm, and the post energy
/// is the branch energy divided by the branch norm (this stays finite for
/// sudden splits, where the term-by-term energy of the truncated branch
/// does not converge).
MeasurementOutcome collapse(const SplitResult& split, Side measured_side, Outcome outcome);

/// Overlap of the full-well ground state with the n-th left (right) chamber mode.
double coeff_a(std::size_t n, double epsilon);
double coeff_b(std::size_t n, double epsilon);

/// Weight of the ground state in the right chamber, eps - sin(2 pi eps)/(2 pi).
double trap_probability(double epsilon);
/// Two-term small-eps expansion (2/3) pi^2 eps^3 - (2/15) pi^4 eps^5.
double trap_probability_series(double epsilon);

struct PartialSum {
  double value = 0.0;
  double tail_estimate = 0.0;  // estimate of the omitted remainder
  std::size_t terms = 0;
};

double norm_left_sq_closed(double epsilon);
/// Polygamma form of sum a_n^2 (no truncation).
double norm_left_sq_spectral(double epsilon);
/// sum_{n<=N} a_n^2 in ascending order together with the Euler-Maclaurin
/// estimate of the remainder, which decays like 1/N.
PartialSum norm_left_sq_partial(double epsilon, std::size_t N);

double norm_right_sq_closed(double epsilon);

/// Finite left-chamber energy from the polygamma closed form.
double renormalized_energy_left(double epsilon);
double renormalized_energy_right(double epsilon);

/// The same energy built directly: remove the linear part of the left
/// wave function, sum the rapidly decaying remainder term by term to N and
/// add the boundary contribution of the linear part. tail_estimate bounds
/// the omitted 1/n^4 terms.
PartialSum renormalized_energy_left_constructive(double epsilon, std::size_t N = 100000);

/// sum_{n<=N} a_n^2 n^2 / (1 - eps)^2, which grows linearly in N.
double naive_energy_partial(double epsilon, std::size_t N);

/// Instantaneous barrier against the full-well ground state.
SplitResult sudden_split(const SplitSpec& spec, std::size_t N);

std::vector<std::vector<double>> coefficient_rows(double epsilon, std::size_t N);
inline const std::vector<std::string> kCoefficientHeader = {"n", "a_n", "b_n"};

void to_json(nlohmann::json& j, const SplitResult& r);
void to_json(nlohmann::json& j, const MeasurementOutcome& m);
std::string to_string(Side s);
std::string to_string(Outcome o);

}  // namespace qsplit
