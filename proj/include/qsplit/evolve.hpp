#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 1001;
};

struct EvolutionSpec {
  SpectralState state;
  double time = 0.0;     // tau units
  std::size_t terms = 0;  // 0 means every retained term
  GridSpec grid;
};

struct ProbeReport {
  std::string name;
  std::map<std::string, double> scalars;
  std::optional<GridFunction> series;

  [[nodiscard]] double at(const std::string& key) const;
};

/// Threads used when the caller passes 0: QSPLIT_THREADS if set, otherwise
/// the hardware concurrency.
std::size_t default_thread_count();

/// E * t mod 2 pi in [-pi, pi] for E = n^2 * scale (wells) or n + 1/2
/// (oscillator). The product is split exactly into two doubles and reduced
/// against a two-part 2 pi, so the result is accurate to about 1e-15
/// absolute even when n^2 t ~ 1e11.
double reduced_phase(double n_sq, double scale);

/// c_n -> c_n exp(-i E_n t).
SpectralState evolve_phase(const SpectralState& state, double t);

/// psi(xi, t) on a uniform grid. Each point is an ascending-n compensated
/// sum; points are distributed across threads, so the result does not
/// depend on the thread count.
GridFunction sample_grid(const EvolutionSpec& spec, std::size_t threads = 0);

/// Window of width 1e-3 ending at the barrier.
ProbeReport boundary_decay_probe(double epsilon, double t, std::size_t N,
                                 std::size_t window_points = 2001, std::size_t threads = 0);

struct PropagationOptions {
  double window_hi = 0.1;  // far window [0, window_hi] of the chamber, in units of L
  std::size_t window_points = 201;
  double threshold = 1e-3;  // rise threshold on max |Im psi|
};

/// Left chamber state of a sudden split, cut to M terms and renormalized,
/// watched in a window at the far wall over a sequence of times (tau).
ProbeReport propagation_probe(double epsilon, std::size_t M, const std::vector<double>& times,
                              const PropagationOptions& opt = {}, std::size_t threads = 0);

/// Sign changes of first differences, ignoring differences up to noise_floor.
std::size_t count_extrema(const std::vector<double>& values, double noise_floor = 1e-9);

/// Coarse oscillation count: block means of `block` samples, counting the
/// rising edges where the step between consecutive means exceeds
/// `factor` times the median step.
std::size_t count_bursts(const std::vector<double>& values, std::size_t block = 100,
                         double factor = 3.0);

struct RingingOptions {
  std::size_t points = 100000;
  std::optional<double> time;  // overrides tau = k
  bool keep_series = false;
};

/// Fat-tail full-well state at tau = k; counts the extrema of Re psi on [0, 1].
ProbeReport ringing_snapshot(double nu, int k, std::size_t N, const RingingOptions& opt = {},
                             std::size_t threads = 0);

struct FractalOptions {
  double lo = 0.8;
  double hi = 0.9;
  std::size_t points = 0;  // 0 picks about 16 samples per shortest wavelength
};

/// Total variation of Re psi over a fixed window for each truncation in
/// N_sequence. "growing" is 1 when the sequence increases monotonically and
/// the last step is still above 1 percent.
ProbeReport fractal_indicator(const SpectralState& state, double t,
                              const std::vector<std::size_t>& N_sequence,
                              const FractalOptions& opt = {}, std::size_t threads = 0);

double total_variation(const std::vector<double>& values);

std::vector<std::vector<double>> grid_rows(const GridFunction& g);
inline const std::vector<std::string> kGridHeader = {"xi", "re_psi", "im_psi"};
nlohmann::json grid_sidecar(const GridFunction& g, std::size_t terms, const BasisDescriptor& basis);

void to_json(nlohmann::json& j, const ProbeReport& r);

}  // namespace qsplit
