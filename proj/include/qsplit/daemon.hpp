#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace qsplit {

struct AdiabaticReport {
  double epsilon = 0.0;
  double delta_e_exact = 0.0;       // closed form, E0
  double delta_e_quadrature = 0.0;  // weighted ground energies by quadrature
  double delta_e_series = 0.0;      // 2 eps + (2/3) pi^2 eps + 3 eps^2
  double left_ground = 0.0;         // 1/(1-eps)^2
  double right_ground = 0.0;        // 1/eps^2
  double luders_excess = 0.0;
};

/// Work to insert the barrier infinitely slowly against the ground state.
double adiabatic_delta_e_closed(double epsilon);
double adiabatic_delta_e_series(double epsilon);
AdiabaticReport adiabatic_delta_e(double epsilon);

/// Left side minus right side of the insertion inequality when the
/// occupation of the right chamber (width eps) is measured:
/// p (1/eps^2 - 1/(1-eps)^2). Changes sign at eps = 1/2.
double insertion_inequality_margin(double epsilon);

/// Energy left over above the collapsed ground state when the smaller
/// chamber is found empty; the inequality margin evaluated at min(eps, 1-eps).
double luders_excess(double epsilon);

/// Bisection for the sign change of insertion_inequality_margin.
double bisect_luders_zero(double lo, double hi, double tol);

/// (1 - p)/(1 - eps)^2.
double energy_left_undisturbed(double epsilon);
/// (1 - p)(1 + dE): outcome-averaged left energy after the occupancy measurement.
double energy_left_disturbed(double epsilon);

double binary_entropy(double p);
/// [(2/3) pi^2 (1 - ln((2/3) pi^2)) - 2 pi^2 ln eps] eps^3.
double erasure_entropy_asymptotic(double epsilon);

struct DaemonLedger {
  double epsilon = 0.0;
  double trap_p = 0.0;
  double erasure_entropy_exact = 0.0;       // nats
  double erasure_entropy_asymptotic = 0.0;  // nats
  double extracted_energy = 0.0;            // E0
  double insertion_work = 0.0;              // E0
  double kT = 1.0;                          // E0 per nat
  double second_law_margin = 0.0;           // work + kT S - extracted
  double landauer_only_margin = 0.0;        // kT S - extracted
};

/// Engine cycle: adiabatic insertion (work dE), occupancy measurement,
/// release of the barrier so the occupied chamber expands back to the full
/// well. The expansion extracts (1 + dE) - 1. The memory erasure costs
/// kT times the binary entropy of the outcome.
DaemonLedger daemon_ledger(double epsilon, double kT = 1.0);

std::vector<double> epsilon_grid(double lo, double hi, std::size_t count);
std::vector<std::vector<double>> ledger_rows(const std::vector<DaemonLedger>& rows);
inline const std::vector<std::string> kLedgerHeader = {"epsilon", "p", "S_exact", "S_asymptotic",
                                                       "delta_e", "extracted", "margin"};
std::vector<std::vector<double>> adiabatic_rows(const std::vector<AdiabaticReport>& rows);
inline const std::vector<std::string> kAdiabaticHeader = {
    "epsilon", "delta_e_exact", "delta_e_quadrature", "delta_e_series",
    "left_ground", "right_ground", "luders_excess"};

void to_json(nlohmann::json& j, const AdiabaticReport& r);
void to_json(nlohmann::json& j, const DaemonLedger& l);

}  // namespace qsplit
