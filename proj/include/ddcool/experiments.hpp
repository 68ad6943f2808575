#pragma once

// Scenario-driven experiment runners: spacing sweeps, the magic-spacing atlas
// over the dipole tilt angle, the detuning-spacing cooling diagram, the
// isosceles-angle sweep, and the hexagon configuration suite.  Scenarios are
// parsed from a small line-based "key = value" format; results are written as
// delimited record files with a fixed column set.

#include <optional>
#include <string>

#include "ddcool/steady.hpp"

namespace ddcool {

struct SweepSpec {
    std::string variable;   // "spacing" | "detuning" | "phi" | "theta"
    double from = 0.0;
    double to = 0.0;
    int points = 1;

    bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
    std::string geometry = "single";   // single | line | triangle | isosceles | hexagon
    int atoms = 2;                     // atom count for line geometry
    double spacing = -1.0;             // pair spacing / polygon side; negative = use the
                                       // first magic spacing for the current theta
    double theta = M_PI / 2;           // dipole tilt from the pair axis (line geometry)
    double phi = M_PI / 3;             // isosceles apex angle
    std::vector<std::vector<int>> subsets =   // hexagon vertex subsets, one run per entry
        {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 3, 4}};
    ModelParams params;                // gamma, delta, nu, n_cut (eta_omega is set per run)
    double eta_omega = 0.04;           // drive strength on the target atom
    double s_min = 0.01;               // magic-spacing search window
    double s_max = 1.0;
    SweepSpec sweep;                   // primary sweep axis ("" variable = no sweep)
    SweepSpec sweep2;                  // secondary (spacing) axis of the detuning diagram
    std::string output;                // record file path; empty = stdout
    SolverPath solver = SolverPath::Auto;
    int jobs = 0;                      // worker threads; 0 = hardware concurrency

    bool operator==(const Scenario&) const = default;
};

// Parses a scenario file.  Schema violations raise ScenarioError with the
// offending key path and line number ("file:line: message").
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

// Applies a single "key = value" assignment (same keys and validation as the
// file parser); used for command-line overrides on top of a parsed scenario.
void apply_scenario_key(Scenario& scenario, const std::string& key, const std::string& value,
                        const std::string& origin);

// Emits the full key set in a fixed order; parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

// One sweep point.  `aux` is the optional second coordinate of a row (the
// spacing column of the detuning diagram or the magic-spacing column of the
// atlas); `label` tags hexagon subsets.  A non-empty `error` flags a row
// whose solve failed or violated an invariant; such rows are kept.
struct SweepRecord {
    std::string label;
    double sweep_value = 0.0;
    std::optional<double> aux;
    double n_multi = 0.0;
    double n_single = 0.0;
    double ratio = 0.0;
    double g12 = 0.0;
    double gamma12 = 0.0;
    double residual = 0.0;
    std::string error;
};

// Writes rows as tab-delimited text: a '#' comment preamble, one header row
// naming the columns, then one line per record with floats at 12 significant
// digits.  The file appears atomically (temp file + rename).  An empty path
// writes to stdout.
void write_records(const std::vector<SweepRecord>& rows, const std::string& path,
                   const std::string& preamble, const std::string& aux_name = "");

// Cooling ratio vs. interparticle spacing for a line or equilateral-triangle
// geometry (sweep.variable = "spacing").
std::vector<SweepRecord> run_spacing_sweep(const Scenario& scenario);

// For each dipole tilt angle theta in the primary sweep, every magic spacing
// in [s_min, s_max] with its local decay coefficient and two-atom cooling
// ratio; one row per (theta, root).
std::vector<SweepRecord> run_magic_atlas(const Scenario& scenario);

// Two-atom cooling ratio over a (detuning x spacing) grid: primary sweep =
// detuning, secondary sweep = spacing.  The single-atom reference stays fixed
// at the sideband condition delta = -nu.
std::vector<SweepRecord> run_detuning_diagram(const Scenario& scenario);

// Cooling ratio vs. isosceles apex angle phi (sweep.variable = "phi") at leg
// length `spacing`.
std::vector<SweepRecord> run_isosceles_sweep(const Scenario& scenario);

// One row per hexagon vertex subset at side length `spacing`.  Under
// SolverPath::Auto, subsets of four or more vertices use the
// trace-replacement path (the dense SVD at that size is far slower; the two
// paths agree to well below the record precision).
std::vector<SweepRecord> run_hexagon_suite(const Scenario& scenario);

// The first magic spacing for the scenario's theta, used when spacing < 0.
double default_spacing(const Scenario& scenario);

// The atom configuration a scenario describes at the given spacing (pair
// spacing, polygon side, or isosceles leg).  Line geometries tilt the dipole
// by theta in the x-z plane; planar geometries keep it perpendicular to the
// plane.  Hexagon geometry uses the first vertex subset.
AtomConfiguration scenario_geometry(const Scenario& scenario, double spacing);

// Default sweep axes installed when a scenario leaves sweep.variable empty.
SweepSpec default_spacing_axis();                              // 0.05..1.0, 191 points
SweepSpec default_theta_axis();                                // 0..pi/2, 181 points
SweepSpec default_detuning_axis(const ModelParams& params);    // -nu +- gamma/2, 100 points
SweepSpec default_diagram_spacing_axis();                      // 0.05..1.0, 100 points
SweepSpec default_phi_axis();                                  // pi/90..pi, 90 points

// Solves one configuration with phonons on the target only and the given
// drive on the target; shared by the runners and the CLI.
SteadyResult solve_configuration(const AtomConfiguration& config, const ModelParams& params,
                                 double eta_omega, SolverPath solver);

// Single-atom reference occupation at detuning `delta`.
SteadyResult single_atom_reference(const ModelParams& params, double eta_omega, double delta);

}  // namespace ddcool
