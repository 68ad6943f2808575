// Command-line front end: couplings tables, magic-spacing search, single
// steady-state solves, and the sweep harness.  Exit codes: 0 success,
// 2 scenario/usage error, 3 solver failure (e.g. a degenerate steady state),
// 4 violated physical invariant.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ddcool/errors.hpp"
#include "ddcool/experiments.hpp"
#include "ddcool/geometry.hpp"
#include "ddcool/steady.hpp"

using namespace ddcool;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Every override is carried as text and funneled through the scenario-key
// parser so flags and file keys share one validation path.
struct Overrides {
    std::optional<std::string> gamma, delta, eta_omega, nc, spacing, theta, phi, out, jobs,
        geometry, atoms, subset, solver, s_min, s_max, from, to, points, s_from, s_to, s_points,
        theta_from, theta_to, theta_points;
};

void add_common(CLI::App* cmd, std::string& config, Overrides& ov) {
    cmd->add_option("--config", config, "Scenario file providing defaults for this command");
    cmd->add_option("--gamma", ov.gamma, "Spontaneous decay rate, units of the trap frequency");
    cmd->add_option("--delta", ov.delta, "Laser detuning, units of the trap frequency");
    cmd->add_option("--eta-omega", ov.eta_omega, "Sideband drive strength on the target atom");
    cmd->add_option("--nc", ov.nc, "Phonon cutoff (highest retained Fock state)");
    cmd->add_option("--spacing", ov.spacing,
                    "Interparticle spacing in wavelengths, or 'magic' for the first magic spacing");
    cmd->add_option("--theta", ov.theta, "Dipole tilt from the interatomic axis, radians");
    cmd->add_option("--out", ov.out, "Output file (default: stdout)");
    cmd->add_option("--jobs", ov.jobs, "Worker threads; 0 = all hardware threads");
    cmd->add_option("--geometry", ov.geometry, "single, line, triangle, isosceles, or hexagon");
    cmd->add_option("--atoms", ov.atoms, "Atom count for line geometry");
    cmd->add_option("--phi", ov.phi, "Isosceles apex angle, radians");
    cmd->add_option("--subset", ov.subset, "Hexagon vertex subsets, e.g. '0,1,2;0,1,3'");
    cmd->add_option("--solver", ov.solver, "Steady-state path: auto, svd, or trace");
    cmd->add_option("--s-min", ov.s_min, "Lower end of the magic-spacing search window");
    cmd->add_option("--s-max", ov.s_max, "Upper end of the magic-spacing search window");
}

void add_axis(CLI::App* cmd, Overrides& ov, const char* what) {
    cmd->add_option("--from", ov.from, std::string("Sweep start (") + what + ")");
    cmd->add_option("--to", ov.to, std::string("Sweep end (") + what + ")");
    cmd->add_option("--points", ov.points, "Sweep point count");
}

void apply(Scenario& sc, const char* key, const std::optional<std::string>& value) {
    if (value) apply_scenario_key(sc, key, *value, "command line");
}

Scenario load_scenario(const std::string& config, const Overrides& ov) {
    Scenario sc = config.empty() ? Scenario{} : parse_scenario(config);
    apply(sc, "gamma", ov.gamma);
    apply(sc, "delta", ov.delta);
    apply(sc, "eta_omega", ov.eta_omega);
    apply(sc, "n_cut", ov.nc);
    apply(sc, "spacing", ov.spacing);
    apply(sc, "theta", ov.theta);
    apply(sc, "phi", ov.phi);
    apply(sc, "output", ov.out);
    apply(sc, "jobs", ov.jobs);
    apply(sc, "geometry", ov.geometry);
    apply(sc, "atoms", ov.atoms);
    apply(sc, "subsets", ov.subset);
    apply(sc, "solver", ov.solver);
    apply(sc, "s_min", ov.s_min);
    apply(sc, "s_max", ov.s_max);
    return sc;
}

void install_primary_axis(Scenario& sc, const Overrides& ov, const SweepSpec& fallback) {
    if (sc.sweep.variable.empty()) sc.sweep = fallback;
    apply(sc, "sweep.from", ov.from);
    apply(sc, "sweep.to", ov.to);
    apply(sc, "sweep.points", ov.points);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ScenarioError("cannot open '" + tmp + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) throw ScenarioError("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ScenarioError("cannot rename '" + tmp + "' to '" + path + "': " +
                            std::strerror(errno));
}

std::string preamble_for(const Scenario& sc, const std::string& title) {
    std::ostringstream out;
    out << title << "\n";
    out << "units: lengths in transition wavelengths; energies and rates in units of the trap "
           "frequency\n";
    out << "g12 and gamma12 are the pair coherent shift and cross-decay in units of gamma\n";
    out << "gamma = " << num(sc.params.gamma) << "; delta = " << num(sc.params.delta)
        << "; nu = " << num(sc.params.nu) << "; eta_omega = " << num(sc.eta_omega)
        << "; n_cut = " << sc.params.n_cut << "\n";
    out << "geometry = " << sc.geometry;
    if (sc.geometry == "line") out << "; atoms = " << sc.atoms << "; theta = " << num(sc.theta);
    out << "\n";
    out << "columns are tab-separated; floats carry 12 significant digits";
    return out.str();
}

int run_couplings(const Scenario& scenario, const Overrides& ov) {
    Scenario sc = scenario;
    const double theta = sc.theta;
    const Vec3 dipole(std::cos(theta), 0.0, std::sin(theta));
    const bool table = ov.from || ov.to || ov.points || !sc.sweep.variable.empty();
    if (!table) {
        const double s = sc.spacing < 0.0 ? default_spacing(sc) : sc.spacing;
        PairCouplings pc = pair_couplings(Vec3(s, 0.0, 0.0), dipole, sc.params.gamma);
        std::ostringstream out;
        out << "spacing = " << num(s) << "\n";
        out << "theta = " << num(theta) << "\n";
        out << "g/gamma = " << num(pc.shift / sc.params.gamma) << "\n";
        out << "gamma12/gamma = " << num(pc.decay / sc.params.gamma) << "\n";
        out << "g = " << num(pc.shift) << "\n";
        out << "gamma12 = " << num(pc.decay) << "\n";
        write_text(sc.output, out.str());
        return 0;
    }
    install_primary_axis(sc, ov, default_spacing_axis());
    if (sc.sweep.variable != "spacing")
        throw ScenarioError("couplings tables sweep spacing, got sweep.variable = '" +
                            sc.sweep.variable + "'");
    std::ostringstream out;
    out << "# pair coupling coefficients vs spacing at theta = " << num(theta) << "\n";
    out << "# units: spacing in transition wavelengths; g and gamma12 in units of gamma\n";
    out << "spacing\tg12\tgamma12\n";
    for (int i = 0; i < sc.sweep.points; ++i) {
        double s = sc.sweep.from +
                   (sc.sweep.points > 1
                        ? static_cast<double>(i) * (sc.sweep.to - sc.sweep.from) /
                              (sc.sweep.points - 1)
                        : 0.0);
        PairCouplings pc = pair_couplings(Vec3(s, 0.0, 0.0), dipole, sc.params.gamma);
        out << num(s) << "\t" << num(pc.shift / sc.params.gamma) << "\t"
            << num(pc.decay / sc.params.gamma) << "\n";
    }
    write_text(sc.output, out.str());
    return 0;
}

int run_magic(const Scenario& scenario, const Overrides& ov) {
    Scenario sc = scenario;
    const bool atlas = ov.theta_from || ov.theta_to || ov.theta_points ||
                       sc.sweep.variable == "theta";
    if (atlas) {
        if (sc.sweep.variable.empty()) sc.sweep = default_theta_axis();
        apply(sc, "sweep.from", ov.theta_from);
        apply(sc, "sweep.to", ov.theta_to);
        apply(sc, "sweep.points", ov.theta_points);
        std::vector<SweepRecord> rows = run_magic_atlas(sc);
        write_records(rows, sc.output,
                      preamble_for(sc, "magic-spacing atlas: cooling at every zero of the "
                                       "coherent pair shift, per dipole tilt theta"),
                      "magic_spacing");
        return 0;
    }
    std::vector<double> roots = find_magic_spacings(sc.theta, sc.s_min, sc.s_max);
    std::ostringstream out;
    out << "# magic spacings (zeros of the coherent pair shift), in transition wavelengths\n";
    out << "# theta = " << num(sc.theta) << "; window = [" << num(sc.s_min) << ", "
        << num(sc.s_max) << "]\n";
    for (double r : roots) out << num(r) << "\n";
    if (roots.empty()) out << "# none found\n";
    write_text(sc.output, out.str());
    return 0;
}

int run_steady(const Scenario& scenario) {
    Scenario sc = scenario;
    const double spacing =
        sc.geometry == "single" ? 0.0 : (sc.spacing < 0.0 ? default_spacing(sc) : sc.spacing);
    AtomConfiguration config = scenario_geometry(sc, spacing);
    SteadyResult result = solve_configuration(config, sc.params, sc.eta_omega, sc.solver);
    SteadyResult reference = single_atom_reference(sc.params, sc.eta_omega, sc.params.delta);
    const double ratio = cooling_ratio(result.n_target, reference.n_target);

    std::ostringstream out;
    out << "geometry = " << sc.geometry << "; atoms = " << config.n_atoms();
    if (sc.geometry != "single") out << "; spacing = " << num(spacing);
    out << "\n";
    out << "density-matrix dimension = " << result.rho.rows() << "\n";
    out << "solver path = "
        << (result.path_used == SolverPath::DenseSvd ? "svd" : "trace") << "\n";
    out << "n_target = " << num(result.n_target) << "\n";
    out << "n_single = " << num(reference.n_target) << "\n";
    out << "ratio = " << num(ratio) << "\n";
    out << "residual = " << num(result.residual) << "\n";
    out << "nullity_gap = " << num(result.nullity_gap) << "\n";
    write_text("", out.str());

    if (!sc.output.empty()) {
        SweepRecord rec;
        rec.label = sc.geometry;
        rec.sweep_value = spacing;
        rec.n_multi = result.n_target;
        rec.n_single = reference.n_target;
        rec.ratio = ratio;
        rec.residual = result.residual;
        if (config.n_atoms() >= 2) {
            int other = config.target == 0 ? 1 : 0;
            PairCouplings pc = pair_couplings(
                config.positions[static_cast<size_t>(other)] -
                    config.positions[static_cast<size_t>(config.target)],
                config.dipole, sc.params.gamma);
            rec.g12 = pc.shift / sc.params.gamma;
            rec.gamma12 = pc.decay / sc.params.gamma;
        }
        write_records({rec}, sc.output, preamble_for(sc, "single steady-state solve"));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Steady-state sideband cooling of trapped atoms coupled by photon-mediated "
        "dipole-dipole interactions"};
    app.require_subcommand(1);

    std::string config;
    Overrides ov;

    CLI::App* c_coup = app.add_subcommand(
        "couplings", "Pair coupling coefficients g and gamma12 at one spacing or as a table");
    add_common(c_coup, config, ov);
    add_axis(c_coup, ov, "spacing");

    CLI::App* c_magic = app.add_subcommand(
        "magic", "Magic spacings for one theta, or the full atlas with --theta-from/to/points");
    add_common(c_magic, config, ov);
    c_magic->add_option("--theta-from", ov.theta_from, "Atlas: first dipole tilt");
    c_magic->add_option("--theta-to", ov.theta_to, "Atlas: last dipole tilt");
    c_magic->add_option("--theta-points", ov.theta_points, "Atlas: tilt count");

    CLI::App* c_steady = app.add_subcommand(
        "steady", "Solve one configuration and report the target phonon occupation");
    add_common(c_steady, config, ov);

    CLI::App* c_spacing = app.add_subcommand(
        "sweep-spacing", "Cooling ratio vs interparticle spacing (line or triangle)");
    add_common(c_spacing, config, ov);
    add_axis(c_spacing, ov, "spacing");

    CLI::App* c_detuning = app.add_subcommand(
        "sweep-detuning", "Cooling ratio over a detuning x spacing grid");
    add_common(c_detuning, config, ov);
    add_axis(c_detuning, ov, "detuning");
    c_detuning->add_option("--s-from", ov.s_from, "Spacing axis start");
    c_detuning->add_option("--s-to", ov.s_to, "Spacing axis end");
    c_detuning->add_option("--s-points", ov.s_points, "Spacing axis point count");

    CLI::App* c_angle = app.add_subcommand(
        "sweep-angle", "Cooling ratio vs isosceles apex angle at fixed leg length");
    add_common(c_angle, config, ov);
    add_axis(c_angle, ov, "phi");

    CLI::App* c_hex = app.add_subcommand(
        "hexagon", "Cooling ratio for vertex subsets of a hexagon around the target");
    add_common(c_hex, config, ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Scenario sc = load_scenario(config, ov);
        if (*c_coup) return run_couplings(sc, ov);
        if (*c_magic) return run_magic(sc, ov);
        if (*c_steady) return run_steady(sc);
        if (*c_spacing) {
            if (c_spacing->count("--geometry") == 0 && sc.geometry == "single")
                sc.geometry = "line";
            install_primary_axis(sc, ov, default_spacing_axis());
            std::vector<SweepRecord> rows = run_spacing_sweep(sc);
            write_records(rows, sc.output,
                          preamble_for(sc, "cooling ratio vs interparticle spacing"));
            return 0;
        }
        if (*c_detuning) {
            if (c_detuning->count("--geometry") == 0 && sc.geometry == "single")
                sc.geometry = "line";
            install_primary_axis(sc, ov, default_detuning_axis(sc.params));
            if (sc.sweep2.variable.empty()) sc.sweep2 = default_diagram_spacing_axis();
            apply(sc, "sweep2.from", ov.s_from);
            apply(sc, "sweep2.to", ov.s_to);
            apply(sc, "sweep2.points", ov.s_points);
            std::vector<SweepRecord> rows = run_detuning_diagram(sc);
            write_records(rows, sc.output,
                          preamble_for(sc, "cooling ratio over the detuning x spacing plane "
                                           "(single-atom reference fixed at delta = -nu)"),
                          "spacing");
            return 0;
        }
        if (*c_angle) {
            install_primary_axis(sc, ov, default_phi_axis());
            std::vector<SweepRecord> rows = run_isosceles_sweep(sc);
            write_records(rows, sc.output,
                          preamble_for(sc, "cooling ratio vs isosceles apex angle"));
            return 0;
        }
        if (*c_hex) {
            sc.geometry = "hexagon";
            std::vector<SweepRecord> rows = run_hexagon_suite(sc);
            write_records(rows, sc.output,
                          preamble_for(sc, "cooling ratio for hexagon vertex subsets"));
            return 0;
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
