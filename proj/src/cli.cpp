#include "qsplit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsplit/daemon.hpp"
#include "qsplit/error.hpp"
#include "qsplit/evolve.hpp"
#include "qsplit/fatstate.hpp"
#include "qsplit/identities.hpp"
#include "qsplit/io.hpp"
#include "qsplit/splitter.hpp"
#include "qsplit/wellcore.hpp"

namespace qsplit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

GridArg parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw PreconditionError("grid must look like lo:hi:count, got '" + text + "'");
  GridArg g;
  try {
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
    const long c = std::stol(parts[2]);
    if (c < 1) throw PreconditionError("grid count must be positive");
    g.count = static_cast<std::size_t>(c);
  } catch (const std::logic_error&) {
    throw PreconditionError("cannot parse grid '" + text + "'");
  }
  if (g.count > 1 && !(g.lo < g.hi)) throw PreconditionError("grid needs lo < hi");
  return g;
}

double parse_fraction(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw PreconditionError("zero denominator in '" + text + "'");
    return num / den;
  } catch (const std::logic_error&) {
    throw PreconditionError("cannot parse number '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_fraction(item));
  }
  if (out.empty()) throw PreconditionError("empty list '" + text + "'");
  return out;
}

namespace {

struct Common {
  std::string out = ".";
  std::size_t threads = 0;
  std::string units = "dimensionless";
  double L_angstrom = 1.0;
  std::string mass = "electron";
  bool quiet = false;

  [[nodiscard]] bool si() const { return units == "SI"; }

  [[nodiscard]] WellUnits well_units() const {
    double kg = WellUnits::kElectronMassSI;
    if (mass != "electron") kg = parse_fraction(mass);
    if (!(L_angstrom > 0.0) || !(kg > 0.0)) throw PreconditionError("length and mass must be positive");
    return WellUnits::si(L_angstrom * WellUnits::kAngstrom, kg);
  }

  // User time in tau: seconds under --units SI, tau otherwise.
  [[nodiscard]] double to_tau(double t) const { return si() ? well_units().to_tau(t) : t; }

  [[nodiscard]] std::size_t thread_count() const { return threads == 0 ? default_thread_count() : threads; }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0: QSPLIT_THREADS or all cores)")
      ->capture_default_str();
  sub->add_option("--units", c.units, "Interpretation of time inputs")
      ->check(CLI::IsMember({"dimensionless", "SI"}))
      ->capture_default_str();
  sub->add_option("--L-angstrom", c.L_angstrom, "Well width in angstrom (SI units)")->capture_default_str();
  sub->add_option("--mass", c.mass, "Particle mass: electron or a value in kg")->capture_default_str();
  sub->add_flag("--quiet", c.quiet, "Suppress the summary on stdout");
}

void check_epsilon_open(double e) {
  if (!(e > 0.0 && e < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
}

// Records every option of the subcommand for the manifest.
std::map<std::string, std::string> collect_parameters(const CLI::App* sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help" || name == "-h" || name == "--out") continue;
    std::string value;
    const auto& res = opt->results();
    if (!res.empty()) {
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
    }
    out[name] = value;
  }
  return out;
}

class Outputs {
 public:
  Outputs(const Common& c, std::string sub) : dir_(c.out) {
    manifest_.subcommand = std::move(sub);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw PreconditionError("cannot create output directory " + c.out);
  }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    io::write_csv(header, rows, dir_ / name);
    manifest_.outputs.push_back(dir_ / name);
  }

  void json_file(const std::string& name, const json& j) {
    io::write_json(j, dir_ / name);
    manifest_.outputs.push_back(dir_ / name);
  }

  void finish(const CLI::App* sub) {
    manifest_.parameters = collect_parameters(sub);
    io::write_manifest(manifest_, dir_);
  }

 private:
  fs::path dir_;
  io::RunManifest manifest_;
};

void say(const Common& c, const std::string& line) {
  if (!c.quiet) std::cout << line << '\n';
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  CLI::App app{"Barrier insertion in an infinite square well: numerical experiments", "qsplit"};
  app.require_subcommand(1);
  Common common;

  // fixed-node
  auto* fixed = app.add_subcommand("fixed-node", "Barrier at a fixed node of a superposition");
  std::string state_idx = "3,6";
  std::string x0_text = "2/3";
  fixed->add_option("--state", state_idx, "Full-well indices in an equal-weight superposition")
      ->capture_default_str();
  fixed->add_option("--x0", x0_text, "Barrier position as a fraction of L")->capture_default_str();
  add_common(fixed, common);

  // sudden
  auto* sudden = app.add_subcommand("sudden", "Instantaneous barrier against the ground state");
  double epsilon = 0.1;
  std::size_t terms = 25000;
  sudden->add_option("--epsilon", epsilon, "Right chamber width")->capture_default_str();
  sudden->add_option("--terms", terms, "Coefficients per chamber")->capture_default_str();
  add_common(sudden, common);

  // collapse
  auto* coll = app.add_subcommand("collapse", "Occupancy measurement after a split");
  std::string side_text = "right";
  std::string outcome_text = "absent";
  std::string coll_state;
  std::string coll_x0;
  coll->add_option("--epsilon", epsilon, "Right chamber width (sudden split)")->capture_default_str();
  coll->add_option("--terms", terms, "Coefficients per chamber (sudden split)")->capture_default_str();
  coll->add_option("--state", coll_state, "Use a fixed-node split of this superposition instead");
  coll->add_option("--x0", coll_x0, "Fixed-node barrier position");
  coll->add_option("--side", side_text, "Chamber that is observed")
      ->check(CLI::IsMember({"left", "right"}))
      ->capture_default_str();
  coll->add_option("--outcome", outcome_text, "Observation result")
      ->check(CLI::IsMember({"present", "absent"}))
      ->capture_default_str();
  add_common(coll, common);

  // evolve
  auto* evo = app.add_subcommand("evolve", "Left chamber wave function after a sudden split");
  double evo_time = -1.0;
  double grid_lo = 0.89;
  double grid_hi = 0.9;
  std::size_t points = 2001;
  bool evo_probe = true;
  std::string fractal_terms;
  evo->add_option("--epsilon", epsilon, "Right chamber width")->capture_default_str();
  evo->add_option("--terms", terms, "Series terms")->capture_default_str();
  evo->add_option("--time", evo_time, "Time (tau, or seconds with --units SI); default 1e-17 s for an electron in 1 angstrom");
  evo->add_option("--lo", grid_lo, "Grid start (fraction of L)")->capture_default_str();
  evo->add_option("--hi", grid_hi, "Grid end (fraction of L)")->capture_default_str();
  evo->add_option("--points", points, "Grid points")->capture_default_str();
  evo->add_option("--boundary-probe", evo_probe, "Also run the barrier window probe")->capture_default_str();
  evo->add_option("--fractal-terms", fractal_terms, "Comma list of truncations for the total-variation probe");
  add_common(evo, common);

  // propagate
  auto* prop = app.add_subcommand("propagate", "Far-wall response to a finite-energy insertion");
  std::size_t levels = 1000;
  std::string times_text;
  double window_hi = 0.1;
  double threshold = 1e-3;
  std::size_t window_points = 201;
  prop->add_option("--epsilon", epsilon, "Right chamber width")->capture_default_str();
  prop->add_option("--levels", levels, "Excited levels kept")->capture_default_str();
  prop->add_option("--times", times_text, "Comma list of times (tau, or seconds with --units SI); default 1e-3..10 s for L = 1 m");
  prop->add_option("--window-hi", window_hi, "Far window [0, w] in units of L")->capture_default_str();
  prop->add_option("--window-points", window_points, "Samples in the far window")->capture_default_str();
  prop->add_option("--threshold", threshold, "Rise threshold on max |Im psi|")->capture_default_str();
  add_common(prop, common);

  // ringing
  auto* ring = app.add_subcommand("ringing", "Fat-tail state at integer tau");
  double nu = 0.5;
  int k = 1;
  std::size_t ring_terms = 20000;
  std::size_t ring_points = 100000;
  double ring_time = -1.0;
  ring->add_option("--nu", nu, "Fat-tail offset")->capture_default_str();
  ring->add_option("--k", k, "Integer time tau = k")->capture_default_str();
  ring->add_option("--terms", ring_terms, "Series terms")->capture_default_str();
  ring->add_option("--points", ring_points, "Grid points on [0, 1]")->capture_default_str();
  ring->add_option("--time", ring_time, "Override the time (tau, or seconds with --units SI)");
  add_common(ring, common);

  // fatstate
  auto* fat = app.add_subcommand("fatstate", "Fat-tail weights, entropy growth and divergence probes");
  std::size_t cutoff = 10000;
  std::string entropy_cutoffs = "100,1000,10000,100000,1000000";
  double fat_time = -1.0;
  std::size_t fat_terms = 10000;
  std::size_t fat_points = 2001;
  fat->add_option("--nu", nu, "Fat-tail offset")->capture_default_str();
  fat->add_option("--cutoff", cutoff, "Rows in the weight table")->capture_default_str();
  fat->add_option("--entropy-cutoffs", entropy_cutoffs, "Comma list of entropy cutoffs")->capture_default_str();
  fat->add_option("--time", fat_time, "Also write the evolved wave function at this time");
  fat->add_option("--terms", fat_terms, "Series terms for the wave function")->capture_default_str();
  fat->add_option("--points", fat_points, "Grid points for the wave function")->capture_default_str();
  add_common(fat, common);

  // oscillator
  auto* osc = app.add_subcommand("oscillator", "Fat-tail oscillator state and its large-x decay");
  std::size_t n_max = 10000;
  double x_lo = 5.0;
  double x_hi = 30.0;
  std::size_t samples = 26;
  std::size_t profile_points = 301;
  bool norms = true;
  osc->add_option("--nu", nu, "Fat-tail offset")->capture_default_str();
  osc->add_option("--n-max", n_max, "Highest oscillator level")->capture_default_str();
  osc->add_option("--x-lo", x_lo, "Fit range start")->capture_default_str();
  osc->add_option("--x-hi", x_hi, "Fit range end")->capture_default_str();
  osc->add_option("--samples", samples, "Fit samples")->capture_default_str();
  osc->add_option("--profile-points", profile_points, "Profile samples on [0, x-hi]")->capture_default_str();
  osc->add_option("--norms", norms, "Integrate psi^2 over [-X, X] for X in 10, 20, 40")->capture_default_str();
  add_common(osc, common);

  // adiabatic
  auto* adi = app.add_subcommand("adiabatic", "Adiabatic insertion work over an epsilon grid");
  std::string eps_grid_adi = "0.001:0.999:999";
  adi->add_option("--epsilon-grid", eps_grid_adi, "lo:hi:count")->capture_default_str();
  add_common(adi, common);

  // daemon
  auto* dae = app.add_subcommand("daemon", "Maxwell daemon ledger over an epsilon grid");
  std::string eps_grid_dae = "1e-3:0.5:100";
  double kT = 1.0;
  dae->add_option("--epsilon-grid", eps_grid_dae, "lo:hi:count")->capture_default_str();
  dae->add_option("--kT", kT, "Reservoir temperature in E0 per nat")->capture_default_str();
  add_common(dae, common);

  // identities
  auto* ids = app.add_subcommand("identities", "Run every invariant check and print a table");
  std::string ids_out;
  std::size_t ids_threads = 0;
  ids->add_option("--out", ids_out, "Also write identities.json here");
  ids->add_option("--threads", ids_threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fixed->parsed()) {
      const double x0 = parse_fraction(x0_text);
      const auto idx = parse_list(state_idx);
      std::vector<Term> t;
      for (double v : idx) {
        if (v < 1 || v != std::floor(v)) throw PreconditionError("state indices must be positive integers");
        t.push_back({static_cast<std::size_t>(v), 1.0});
      }
      std::sort(t.begin(), t.end(), [](const Term& a, const Term& b) { return a.n < b.n; });
      const SpectralState s = SpectralState::normalized_copy(BasisDescriptor::full_well(), t);
      const SplitResult r = decompose_fixed(s, x0);
      json table = json::array();
      for (Side sd : {Side::Left, Side::Right}) {
        for (Outcome oc : {Outcome::Present, Outcome::Absent}) {
          const MeasurementOutcome m = collapse(r, sd, oc);
          table.push_back({{"side", to_string(sd)}, {"outcome", to_string(oc)},
                           {"particle_found_left", m.particle_found_left},
                           {"probability", m.probability}, {"post_energy", m.post_energy}});
        }
      }
      Outputs out(common, "fixed-node");
      out.json_file("fixed_node.json", json{{"x0", x0},
                                            {"initial_state", s},
                                            {"initial_energy", state_energy(s)},
                                            {"split", r},
                                            {"E_left", r.energy_left},
                                            {"E_right", r.energy_right},
                                            {"E_sum", r.energy_left + r.energy_right},
                                            {"collapse", table}});
      out.finish(fixed);
      say(common, "E_left = " + fmt(r.energy_left) + "  E_right = " + fmt(r.energy_right) +
                      "  sum = " + fmt(r.energy_left + r.energy_right));
      return 0;
    }

    if (sudden->parsed()) {
      check_epsilon_open(epsilon);
      const SplitResult r = sudden_split(SplitSpec::make(epsilon), terms);
      const PartialSum part = norm_left_sq_partial(epsilon, terms);
      const PartialSum cons = renormalized_energy_left_constructive(epsilon);
      Outputs out(common, "sudden");
      out.csv("coefficients.csv", kCoefficientHeader, coefficient_rows(epsilon, terms));
      out.json_file("sudden.json",
                    json{{"epsilon", epsilon},
                         {"terms", terms},
                         {"norm_left_sq", r.norm_left_sq},
                         {"norm_right_sq", r.norm_right_sq},
                         {"norm_left_sq_spectral", norm_left_sq_spectral(epsilon)},
                         {"norm_left_sq_partial", part.value},
                         {"norm_left_sq_partial_tail_estimate", part.tail_estimate},
                         {"trap_probability", trap_probability(epsilon)},
                         {"energy_left", r.energy_left},
                         {"energy_right", r.energy_right},
                         {"energy_sum", r.energy_left + r.energy_right},
                         {"energy_left_constructive", cons.value},
                         {"energy_left_constructive_tail", cons.tail_estimate},
                         {"naive_energy_partial", naive_energy_partial(epsilon, terms)}});
      out.finish(sudden);
      say(common, "E_left + E_right = " + fmt(r.energy_left + r.energy_right));
      return 0;
    }

    if (coll->parsed()) {
      SplitResult r;
      if (!coll_state.empty() || !coll_x0.empty()) {
        if (coll_state.empty() || coll_x0.empty()) throw PreconditionError("--state and --x0 go together");
        std::vector<Term> t;
        for (double v : parse_list(coll_state)) t.push_back({static_cast<std::size_t>(v), 1.0});
        r = decompose_fixed(SpectralState::normalized_copy(BasisDescriptor::full_well(), t),
                            parse_fraction(coll_x0));
      } else {
        check_epsilon_open(epsilon);
        r = sudden_split(SplitSpec::make(epsilon), terms);
      }
      const Side sd = side_text == "left" ? Side::Left : Side::Right;
      const Outcome oc = outcome_text == "present" ? Outcome::Present : Outcome::Absent;
      const MeasurementOutcome m = collapse(r, sd, oc);
      Outputs out(common, "collapse");
      out.json_file("collapse.json", json{{"side", side_text}, {"outcome", outcome_text}, {"result", m}});
      out.finish(coll);
      say(common, "probability = " + fmt(m.probability) + "  post_energy = " + fmt(m.post_energy));
      return 0;
    }

    if (evo->parsed()) {
      check_epsilon_open(epsilon);
      const double t = evo_time < 0.0 ? WellUnits::electron_angstrom(1.0).to_tau(1e-17)
                                      : common.to_tau(evo_time);
      const SplitResult r = sudden_split(SplitSpec::make(epsilon), terms);
      EvolutionSpec es{r.left, t, terms, {grid_lo, grid_hi, points}};
      const GridFunction g = sample_grid(es, common.thread_count());
      Outputs out(common, "evolve");
      out.csv("grid.csv", kGridHeader, grid_rows(g));
      out.json_file("grid.json", grid_sidecar(g, terms, r.left.basis()));
      json probes = json::object();
      if (evo_probe) probes["boundary_decay"] = boundary_decay_probe(epsilon, t, terms, 2001, common.thread_count());
      if (!fractal_terms.empty()) {
        std::vector<std::size_t> seq;
        for (double v : parse_list(fractal_terms)) seq.push_back(static_cast<std::size_t>(v));
        const SplitResult big = sudden_split(SplitSpec::make(epsilon), seq.back());
        FractalOptions fo{grid_lo, grid_hi, 0};
        probes["fractal"] = fractal_indicator(big.left, t, seq, fo, common.thread_count());
      }
      out.json_file("evolve.json", json{{"time_tau", t}, {"epsilon", epsilon}, {"probes", probes}});
      out.finish(evo);
      say(common, "wrote " + std::to_string(g.samples.size()) + " samples at tau = " + fmt(t));
      return 0;
    }

    if (prop->parsed()) {
      check_epsilon_open(epsilon);
      std::vector<double> times;
      if (times_text.empty()) {
        const WellUnits u = WellUnits::electron_angstrom(1e10);
        for (int i = 0; i <= 8; ++i) times.push_back(u.to_tau(1e-3 * std::pow(10.0, 0.5 * i)));
      } else {
        for (double v : parse_list(times_text)) times.push_back(common.to_tau(v));
      }
      PropagationOptions po{window_hi, window_points, threshold};
      const ProbeReport rep = propagation_probe(epsilon, levels, times, po, common.thread_count());
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const std::string key = "t" + std::to_string(i);
        rows.push_back({times[i], rep.at(key + "_max_abs"), rep.at(key + "_max_im")});
      }
      Outputs out(common, "propagate");
      out.csv("propagation.csv", {"time_tau", "max_abs_psi", "max_im_psi"}, rows);
      out.csv("grid.csv", kGridHeader, grid_rows(*rep.series));
      out.json_file("grid.json", grid_sidecar(*rep.series, levels, BasisDescriptor::sub_left(1.0 - epsilon)));
      out.json_file("propagation.json", rep);
      out.finish(prop);
      say(common, "rise factor " + fmt(rep.at("rise_factor")) + ", rise time " + fmt(rep.at("rise_time_tau")));
      return 0;
    }

    if (ring->parsed()) {
      RingingOptions ro;
      ro.points = ring_points;
      ro.keep_series = true;
      if (ring_time >= 0.0) ro.time = common.to_tau(ring_time);
      const ProbeReport rep = ringing_snapshot(nu, k, ring_terms, ro, common.thread_count());
      Outputs out(common, "ringing");
      out.csv("grid.csv", kGridHeader, grid_rows(*rep.series));
      out.json_file("grid.json", grid_sidecar(*rep.series, ring_terms, BasisDescriptor::full_well()));
      out.json_file("ringing.json", rep);
      out.finish(ring);
      say(common, "extrema " + fmt(rep.at("extrema_count")) + ", bursts " + fmt(rep.at("burst_count")));
      return 0;
    }

    if (fat->parsed()) {
      std::vector<std::size_t> cuts;
      for (double v : parse_list(entropy_cutoffs)) cuts.push_back(static_cast<std::size_t>(v));
      const EntropyReport er = entropy_growth(nu, cuts);
      const std::size_t big_cut = std::max<std::size_t>(1000000, cutoff);
      const FatTailWeights wbig = fat_weights(nu, big_cut);
      const auto decades = decade_cutoffs(1000, 1000000);
      json spectra = json::object();
      json conj = json::array();
      for (Spectrum s : {Spectrum::SquareWell, Spectrum::Oscillator, Spectrum::Coulomb}) {
        spectra[to_string(s)] = energy_divergence(wbig, s, decades);
        const ConjectureRow row = conjecture_check(wbig, s, decades);
        conj.push_back({{"spectrum", to_string(s)}, {"entropy_divergent", row.entropy_divergent},
                        {"energy_divergent", row.energy_divergent}, {"size_divergent", row.size_divergent},
                        {"holds", row.holds()}});
      }
      const auto c5 = inverse_square_entropy(100000);
      const auto c6 = inverse_square_entropy(1000000);
      const FatTailWeights w = fat_weights(nu, cutoff);
      Outputs out(common, "fatstate");
      out.csv("weights.csv", kWeightHeader, weight_rows(w));
      out.json_file("entropy.json",
                    json{{"entropy_growth", er},
                         {"normalization", w.normalization},
                         {"tail_mass", w.tail_mass},
                         {"inverse_square_entropy", {{"cutoff_1e5", c5.value}, {"cutoff_1e6", c6.value}}},
                         {"divergence", spectra},
                         {"conjecture", conj}});
      if (fat_time >= 0.0) {
        const SpectralState st = fat_tail_state(w, std::min(fat_terms, w.cutoff));
        EvolutionSpec es{st, common.to_tau(fat_time), st.size(), {0.0, 1.0, fat_points}};
        const GridFunction g = sample_grid(es, common.thread_count());
        out.csv("grid.csv", kGridHeader, grid_rows(g));
        out.json_file("grid.json", grid_sidecar(g, st.size(), st.basis()));
      }
      out.finish(fat);
      say(common, "entropy growth coefficient A = " + fmt(er.growth_model_fit));
      return 0;
    }

    if (osc->parsed()) {
      if (samples < 2 || !(x_lo < x_hi)) throw PreconditionError("need at least 2 samples and x-lo < x-hi");
      std::vector<double> xs;
      for (std::size_t i = 0; i < samples; ++i) {
        xs.push_back(x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(samples - 1));
      }
      OscillatorOptions oo;
      oo.with_norms = norms;
      const ProbeReport rep = oscillator_asymptote(nu, xs, n_max, oo);
      const FatTailWeights w = fat_weights(nu, std::max<std::size_t>(n_max, 10));
      std::vector<std::vector<double>> rows(profile_points);
      for (std::size_t i = 0; i < profile_points; ++i) {
        const double x = x_hi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(profile_points - 1, 1));
        rows[i] = {x, oscillator_fat_psi(w, n_max, x)};
      }
      Outputs out(common, "oscillator");
      out.csv("profile.csv", {"x", "psi"}, rows);
      out.json_file("oscillator.json", rep);
      out.finish(osc);
      say(common, "fitted C = " + fmt(rep.at("C")) + " (spread " + fmt(rep.at("C_spread")) + ")");
      return 0;
    }

    if (adi->parsed()) {
      const GridArg g = parse_grid(eps_grid_adi);
      std::vector<AdiabaticReport> rows;
      for (double e : epsilon_grid(g.lo, g.hi, g.count)) rows.push_back(adiabatic_delta_e(e));
      const double zero = bisect_luders_zero(0.1, 0.9, 1e-9);
      Outputs out(common, "adiabatic");
      out.csv("adiabatic.csv", kAdiabaticHeader, adiabatic_rows(rows));
      out.json_file("adiabatic.json",
                    json{{"luders_zero", zero},
                         {"energy_left_undisturbed_0.01", energy_left_undisturbed(0.01)},
                         {"energy_left_disturbed_0.01", energy_left_disturbed(0.01)},
                         {"relative_gap_0.01", energy_left_disturbed(0.01) / energy_left_undisturbed(0.01) - 1.0}});
      out.finish(adi);
      say(common, "wrote " + std::to_string(rows.size()) + " rows; inequality zero at " + fmt(zero));
      return 0;
    }

    if (dae->parsed()) {
      const GridArg g = parse_grid(eps_grid_dae);
      std::vector<DaemonLedger> rows;
      for (double e : epsilon_grid(g.lo, g.hi, g.count)) rows.push_back(daemon_ledger(e, kT));
      Outputs out(common, "daemon");
      out.csv("ledger.csv", kLedgerHeader, ledger_rows(rows));
      json summary = json::array();
      for (const auto& l : rows) summary.push_back(l);
      out.json_file("daemon.json",
                    json{{"kT", kT},
                         {"extracted_energy_model", "(1 + dE) - 1: collapsed chamber expands to the full well"},
                         {"margin_model", "insertion_work + kT * S_exact - extracted"},
                         {"rows", summary}});
      out.finish(dae);
      say(common, "wrote " + std::to_string(rows.size()) + " ledger rows");
      return 0;
    }

    if (ids->parsed()) {
      const auto checks = run_identities(ids_threads);
      bool all = true;
      std::printf("%-9s %-62s %-6s %s\n", "module", "check", "result", "observed / tolerance");
      json arr = json::array();
      for (const auto& c : checks) {
        all = all && c.passed;
        std::printf("%-9s %-62s %-6s %.3g / %.3g %s\n", c.module.c_str(), c.name.c_str(),
                    c.passed ? "PASS" : "FAIL", c.observed, c.tolerance, c.detail.c_str());
        arr.push_back({{"module", c.module}, {"name", c.name}, {"passed", c.passed},
                       {"observed", c.observed}, {"tolerance", c.tolerance}, {"detail", c.detail}});
      }
      if (!ids_out.empty()) {
        fs::create_directories(ids_out);
        io::write_json(arr, fs::path(ids_out) / "identities.json");
      }
      return all ? 0 : 1;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "qsplit: " << e.what() << '\n';
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "qsplit: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "qsplit: " << e.what() << '\n';
    return 2;
  } catch (const ImpossibleOutcome& e) {
    std::cerr << "qsplit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    // I/O failures land here.
    std::cerr << "qsplit: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace qsplit::cli
