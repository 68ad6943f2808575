#include "ddcool/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "ddcool/errors.hpp"
#include "ddcool/geometry.hpp"
#include "ddcool/hilbert.hpp"
#include "ddcool/liouvillian.hpp"

namespace ddcool {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_record_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join_subset(const std::vector<int>& subset) {
    std::string out;
    for (size_t i = 0; i < subset.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(subset[i]);
    }
    return out;
}

// Grid point i of a uniform [from, to] grid; the endpoint is hit exactly.
double grid_point(double from, double to, int points, int i) {
    if (points <= 1) return from;
    if (i == points - 1) return to;
    const double step = (to - from) / static_cast<double>(points - 1);
    return from + static_cast<double>(i) * step;
}

Vec3 tilted_dipole(double theta) {
    return Vec3(std::cos(theta), 0.0, std::sin(theta));
}

// ---------------------------------------------------------------------------
// Scenario parsing

using FailFn = std::function<void(const std::string&)>;

double need_double(const std::string& value, const std::string& key, const FailFn& fail) {
    const char* begin = value.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        fail("value '" + value + "' for " + key + " is not a finite number");
    return v;
}

int need_int(const std::string& value, const std::string& key, const FailFn& fail) {
    const char* begin = value.c_str();
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE || v < INT_MIN || v > INT_MAX)
        fail("value '" + value + "' for " + key + " is not an integer");
    return static_cast<int>(v);
}

std::vector<std::vector<int>> need_subsets(const std::string& value, const std::string& key,
                                           const FailFn& fail) {
    std::vector<std::vector<int>> subsets;
    std::istringstream groups(value);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) fail("empty vertex group for " + key);
        std::vector<int> subset;
        std::istringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) subset.push_back(need_int(trim(item), key, fail));
        subsets.push_back(std::move(subset));
    }
    if (subsets.empty()) fail("no vertex groups for " + key);
    return subsets;
}

void apply_key(Scenario& sc, const std::string& key, const std::string& value,
               const FailFn& fail) {
    if (key == "geometry") {
        static const std::set<std::string> names = {"single", "line", "triangle", "isosceles",
                                                    "hexagon"};
        if (!names.count(value)) fail("unknown geometry '" + value + "'");
        sc.geometry = value;
    } else if (key == "atoms") {
        sc.atoms = need_int(value, key, fail);
        if (sc.atoms < 1) fail("atoms must be at least 1");
    } else if (key == "spacing") {
        if (value == "magic") {
            sc.spacing = -1.0;
        } else {
            sc.spacing = need_double(value, key, fail);
            if (sc.spacing <= 0.0) fail("spacing must be positive (or 'magic')");
        }
    } else if (key == "theta") {
        sc.theta = need_double(value, key, fail);
        if (sc.theta < 0.0 || sc.theta > M_PI) fail("theta must lie in [0, pi]");
    } else if (key == "phi") {
        sc.phi = need_double(value, key, fail);
        if (sc.phi <= 0.0 || sc.phi > M_PI) fail("phi must lie in (0, pi]");
    } else if (key == "subsets") {
        sc.subsets = need_subsets(value, key, fail);
    } else if (key == "gamma") {
        sc.params.gamma = need_double(value, key, fail);
        if (sc.params.gamma <= 0.0) fail("gamma must be positive");
    } else if (key == "delta") {
        sc.params.delta = need_double(value, key, fail);
    } else if (key == "nu") {
        sc.params.nu = need_double(value, key, fail);
        if (sc.params.nu <= 0.0) fail("nu must be positive");
    } else if (key == "eta_omega") {
        sc.eta_omega = need_double(value, key, fail);
        if (sc.eta_omega < 0.0) fail("eta_omega must be non-negative");
    } else if (key == "n_cut") {
        sc.params.n_cut = need_int(value, key, fail);
        if (sc.params.n_cut < 1) fail("n_cut must be at least 1");
    } else if (key == "s_min") {
        sc.s_min = need_double(value, key, fail);
        if (sc.s_min <= 0.0) fail("s_min must be positive");
    } else if (key == "s_max") {
        sc.s_max = need_double(value, key, fail);
        if (sc.s_max <= 0.0) fail("s_max must be positive");
    } else if (key == "sweep.variable" || key == "sweep2.variable") {
        SweepSpec& spec = key[5] == '2' ? sc.sweep2 : sc.sweep;
        static const std::set<std::string> names = {"spacing", "detuning", "phi", "theta"};
        if (!names.count(value)) fail("unknown sweep variable '" + value + "'");
        if (key[5] == '2' && value != "spacing")
            fail("the secondary sweep axis supports only 'spacing'");
        spec.variable = value;
    } else if (key == "sweep.from" || key == "sweep2.from") {
        (key[5] == '2' ? sc.sweep2 : sc.sweep).from = need_double(value, key, fail);
    } else if (key == "sweep.to" || key == "sweep2.to") {
        (key[5] == '2' ? sc.sweep2 : sc.sweep).to = need_double(value, key, fail);
    } else if (key == "sweep.points" || key == "sweep2.points") {
        int points = need_int(value, key, fail);
        if (points < 1 || points > 1000000) fail("points must lie in [1, 1000000]");
        (key[5] == '2' ? sc.sweep2 : sc.sweep).points = points;
    } else if (key == "output") {
        sc.output = value;
    } else if (key == "solver") {
        if (value == "auto")
            sc.solver = SolverPath::Auto;
        else if (value == "svd")
            sc.solver = SolverPath::DenseSvd;
        else if (value == "trace")
            sc.solver = SolverPath::TraceReplacement;
        else
            fail("unknown solver '" + value + "' (expected auto, svd, or trace)");
    } else if (key == "jobs") {
        sc.jobs = need_int(value, key, fail);
        if (sc.jobs < 0) fail("jobs must be non-negative");
    } else {
        fail("unknown key '" + key + "'");
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Scenario sc;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        FailFn fail = [&](const std::string& msg) {
            throw ScenarioError(origin + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key before '='");
        if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
        apply_key(sc, key, value, fail);
    }
    if (sc.s_min >= sc.s_max)
        throw ScenarioError(origin + ": s_min must be below s_max");
    if (!sc.sweep.variable.empty() && sc.sweep.from == sc.sweep.to && sc.sweep.points > 1)
        throw ScenarioError(origin + ": sweep range is empty but points > 1");
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str(), path);
}

void apply_scenario_key(Scenario& scenario, const std::string& key, const std::string& value,
                        const std::string& origin) {
    FailFn fail = [&](const std::string& msg) { throw ScenarioError(origin + ": " + msg); };
    apply_key(scenario, key, value, fail);
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "geometry = " << sc.geometry << "\n";
    out << "atoms = " << sc.atoms << "\n";
    if (sc.spacing < 0.0)
        out << "spacing = magic\n";
    else
        out << "spacing = " << format_double(sc.spacing) << "\n";
    out << "theta = " << format_double(sc.theta) << "\n";
    out << "phi = " << format_double(sc.phi) << "\n";
    out << "subsets = ";
    for (size_t i = 0; i < sc.subsets.size(); ++i) {
        if (i > 0) out << ';';
        out << join_subset(sc.subsets[i]);
    }
    out << "\n";
    out << "gamma = " << format_double(sc.params.gamma) << "\n";
    out << "delta = " << format_double(sc.params.delta) << "\n";
    out << "nu = " << format_double(sc.params.nu) << "\n";
    out << "eta_omega = " << format_double(sc.eta_omega) << "\n";
    out << "n_cut = " << sc.params.n_cut << "\n";
    out << "s_min = " << format_double(sc.s_min) << "\n";
    out << "s_max = " << format_double(sc.s_max) << "\n";
    auto emit_sweep = [&](const char* prefix, const SweepSpec& spec) {
        if (spec.variable.empty()) return;
        out << prefix << ".variable = " << spec.variable << "\n";
        out << prefix << ".from = " << format_double(spec.from) << "\n";
        out << prefix << ".to = " << format_double(spec.to) << "\n";
        out << prefix << ".points = " << spec.points << "\n";
    };
    emit_sweep("sweep", sc.sweep);
    emit_sweep("sweep2", sc.sweep2);
    if (!sc.output.empty()) out << "output = " << sc.output << "\n";
    out << "solver = "
        << (sc.solver == SolverPath::Auto
                ? "auto"
                : sc.solver == SolverPath::DenseSvd ? "svd" : "trace")
        << "\n";
    out << "jobs = " << sc.jobs << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Record files

void write_records(const std::vector<SweepRecord>& rows, const std::string& path,
                   const std::string& preamble, const std::string& aux_name) {
    bool with_label = std::any_of(rows.begin(), rows.end(),
                                  [](const SweepRecord& r) { return !r.label.empty(); });
    bool with_aux = std::any_of(rows.begin(), rows.end(),
                                [](const SweepRecord& r) { return r.aux.has_value(); });
    std::string text;
    text.reserve(128 * (rows.size() + 8));

    std::istringstream pre(preamble);
    std::string line;
    while (std::getline(pre, line)) text += "# " + line + "\n";

    if (with_label) text += "label\t";
    text += "sweep_value";
    if (with_aux) text += "\t" + (aux_name.empty() ? std::string("aux") : aux_name);
    text += "\tn_multi\tn_single\tratio\tg12\tgamma12\tresidual\terror\n";

    for (const SweepRecord& r : rows) {
        if (with_label) text += r.label + "\t";
        text += format_record_value(r.sweep_value);
        if (with_aux) text += "\t" + format_record_value(r.aux.value_or(0.0));
        text += "\t" + format_record_value(r.n_multi);
        text += "\t" + format_record_value(r.n_single);
        text += "\t" + format_record_value(r.ratio);
        text += "\t" + format_record_value(r.g12);
        text += "\t" + format_record_value(r.gamma12);
        text += "\t" + format_record_value(r.residual);
        if (r.error.empty()) {
            text += "\t-\n";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '\t', ' ');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            text += "\t" + msg + "\n";
        }
    }

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

// ---------------------------------------------------------------------------
// Shared solve helpers

SteadyResult solve_configuration(const AtomConfiguration& config, const ModelParams& params,
                                 double eta_omega, SolverPath solver) {
    CouplingMatrices couplings = coupling_matrices(config, params.gamma);
    HilbertLayout layout;
    layout.n_atoms = config.n_atoms();
    layout.phonon_atoms = {config.target};
    layout.n_cut = params.n_cut;
    ModelParams p = params;
    p.eta_omega.assign(static_cast<size_t>(config.n_atoms()), 0.0);
    p.eta_omega[static_cast<size_t>(config.target)] = eta_omega;
    Superoperator generator = build_liouvillian(layout, p, couplings);
    SolverOptions options;
    options.path = solver;
    return steady_state(generator, config.target, options);
}

SteadyResult single_atom_reference(const ModelParams& params, double eta_omega, double delta) {
    AtomConfiguration config;
    config.positions = {Vec3::Zero()};
    ModelParams p = params;
    p.delta = delta;
    return solve_configuration(config, p, eta_omega, SolverPath::DenseSvd);
}

double default_spacing(const Scenario& sc) {
    std::vector<double> roots = find_magic_spacings(sc.theta, sc.s_min, sc.s_max);
    if (roots.empty())
        throw ScenarioError("no magic spacing in [" + format_double(sc.s_min) + ", " +
                            format_double(sc.s_max) + "] for theta = " + format_double(sc.theta));
    return roots.front();
}

namespace {

// Fills rows[i] via fill(i, row) across a worker pool; a failed point is
// recorded in its error column and never aborts the sweep.  Rows are
// preallocated and each worker writes only its own claimed indices, so the
// output is identical for any worker count.
template <typename Fill>
void run_parallel(std::vector<SweepRecord>& rows, int jobs, Fill&& fill) {
    if (rows.empty()) return;
    unsigned hardware = std::thread::hardware_concurrency();
    if (jobs <= 0) jobs = hardware > 0 ? static_cast<int>(hardware) : 1;
    jobs = std::min<int>(jobs, static_cast<int>(rows.size()));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            try {
                fill(i, rows[i]);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

}  // namespace

AtomConfiguration scenario_geometry(const Scenario& sc, double spacing) {
    if (sc.geometry == "single") {
        AtomConfiguration config;
        config.positions = {Vec3::Zero()};
        return config;
    }
    if (sc.geometry == "line") {
        AtomConfiguration config = build_line(sc.atoms, spacing);
        config.dipole = tilted_dipole(sc.theta);
        return config;
    }
    if (sc.geometry == "triangle") return build_equilateral_triangle(spacing);
    if (sc.geometry == "isosceles") return build_isosceles(spacing, sc.phi);
    if (sc.geometry == "hexagon") {
        if (sc.subsets.empty()) throw ScenarioError("hexagon geometry needs a vertex subset");
        return build_hexagon_config(sc.subsets.front(), spacing);
    }
    throw ScenarioError("unknown geometry '" + sc.geometry + "'");
}

SweepSpec default_spacing_axis() { return {"spacing", 0.05, 1.0, 191}; }
SweepSpec default_theta_axis() { return {"theta", 0.0, M_PI / 2, 181}; }
SweepSpec default_detuning_axis(const ModelParams& params) {
    return {"detuning", -params.nu - 0.5 * params.gamma, -params.nu + 0.5 * params.gamma, 100};
}
SweepSpec default_diagram_spacing_axis() { return {"spacing", 0.05, 1.0, 100}; }
SweepSpec default_phi_axis() { return {"phi", M_PI / 90.0, M_PI, 90}; }

namespace {

void attach_pair_diagnostics(SweepRecord& rec, const AtomConfiguration& config, double gamma) {
    if (config.n_atoms() < 2) {
        rec.g12 = 0.0;
        rec.gamma12 = 0.0;
        return;
    }
    int other = config.target == 0 ? 1 : 0;
    PairCouplings pc = pair_couplings(
        config.positions[static_cast<size_t>(other)] -
            config.positions[static_cast<size_t>(config.target)],
        config.dipole, gamma);
    rec.g12 = pc.shift / gamma;
    rec.gamma12 = pc.decay / gamma;
}

void fill_from_result(SweepRecord& rec, const SteadyResult& result, double n_single) {
    rec.n_multi = result.n_target;
    rec.n_single = n_single;
    rec.ratio = cooling_ratio(result.n_target, n_single);
    rec.residual = result.residual;
}

}  // namespace

// ---------------------------------------------------------------------------
// Runners

std::vector<SweepRecord> run_spacing_sweep(const Scenario& scenario) {
    Scenario sc = scenario;
    if (sc.sweep.variable.empty()) sc.sweep = default_spacing_axis();
    if (sc.sweep.variable != "spacing")
        throw ScenarioError("spacing sweep requires sweep.variable = spacing, got '" +
                            sc.sweep.variable + "'");
    if (sc.geometry != "line" && sc.geometry != "triangle")
        throw ScenarioError("spacing sweep supports line or triangle geometry, got '" +
                            sc.geometry + "'");
    if (sc.geometry == "line" && sc.atoms < 2)
        throw ScenarioError("a line spacing sweep needs at least 2 atoms");

    const double n_single =
        single_atom_reference(sc.params, sc.eta_omega, sc.params.delta).n_target;

    std::vector<SweepRecord> rows(static_cast<size_t>(sc.sweep.points));
    for (int i = 0; i < sc.sweep.points; ++i)
        rows[static_cast<size_t>(i)].sweep_value =
            grid_point(sc.sweep.from, sc.sweep.to, sc.sweep.points, i);

    run_parallel(rows, sc.jobs, [&](size_t, SweepRecord& rec) {
        AtomConfiguration config = scenario_geometry(sc, rec.sweep_value);
        attach_pair_diagnostics(rec, config, sc.params.gamma);
        SteadyResult result = solve_configuration(config, sc.params, sc.eta_omega, sc.solver);
        fill_from_result(rec, result, n_single);
    });
    return rows;
}

std::vector<SweepRecord> run_magic_atlas(const Scenario& scenario) {
    Scenario sc = scenario;
    if (sc.sweep.variable.empty()) sc.sweep = default_theta_axis();
    if (sc.sweep.variable != "theta")
        throw ScenarioError("magic atlas requires sweep.variable = theta, got '" +
                            sc.sweep.variable + "'");

    const double n_single =
        single_atom_reference(sc.params, sc.eta_omega, sc.params.delta).n_target;

    // Root finding is cheap; enumerate all (theta, root) rows up front so the
    // expensive steady-state solves can be distributed over the pool.
    std::vector<SweepRecord> rows;
    for (int i = 0; i < sc.sweep.points; ++i) {
        double theta = grid_point(sc.sweep.from, sc.sweep.to, sc.sweep.points, i);
        for (double root : find_magic_spacings(theta, sc.s_min, sc.s_max)) {
            SweepRecord rec;
            rec.sweep_value = theta;
            rec.aux = root;
            rows.push_back(rec);
        }
    }

    run_parallel(rows, sc.jobs, [&](size_t, SweepRecord& rec) {
        AtomConfiguration config = build_line(2, *rec.aux);
        config.dipole = tilted_dipole(rec.sweep_value);
        attach_pair_diagnostics(rec, config, sc.params.gamma);
        SteadyResult result = solve_configuration(config, sc.params, sc.eta_omega, sc.solver);
        fill_from_result(rec, result, n_single);
    });
    return rows;
}

std::vector<SweepRecord> run_detuning_diagram(const Scenario& scenario) {
    Scenario sc = scenario;
    if (sc.sweep.variable.empty()) sc.sweep = default_detuning_axis(sc.params);
    if (sc.sweep2.variable.empty()) sc.sweep2 = default_diagram_spacing_axis();
    if (sc.sweep.variable != "detuning")
        throw ScenarioError("detuning diagram requires sweep.variable = detuning, got '" +
                            sc.sweep.variable + "'");
    if (sc.geometry == "single" || sc.geometry == "hexagon")
        throw ScenarioError("detuning diagram supports line, triangle, or isosceles geometry");

    // The reference stays pinned to the bare sideband condition so the map
    // shows the collective shift compensating an off-nominal detuning.
    const double n_single =
        single_atom_reference(sc.params, sc.eta_omega, -sc.params.nu).n_target;

    const int n_det = sc.sweep.points;
    const int n_spc = sc.sweep2.points;
    std::vector<SweepRecord> rows(static_cast<size_t>(n_det) * static_cast<size_t>(n_spc));
    for (int is = 0; is < n_spc; ++is) {
        double s = grid_point(sc.sweep2.from, sc.sweep2.to, n_spc, is);
        for (int id = 0; id < n_det; ++id) {
            SweepRecord& rec = rows[static_cast<size_t>(is) * n_det + id];
            rec.sweep_value = grid_point(sc.sweep.from, sc.sweep.to, n_det, id);
            rec.aux = s;
        }
    }

    run_parallel(rows, sc.jobs, [&](size_t, SweepRecord& rec) {
        AtomConfiguration config = scenario_geometry(sc, *rec.aux);
        attach_pair_diagnostics(rec, config, sc.params.gamma);
        ModelParams p = sc.params;
        p.delta = rec.sweep_value;
        SteadyResult result = solve_configuration(config, p, sc.eta_omega, sc.solver);
        fill_from_result(rec, result, n_single);
    });
    return rows;
}

std::vector<SweepRecord> run_isosceles_sweep(const Scenario& scenario) {
    Scenario sc = scenario;
    if (sc.sweep.variable.empty()) sc.sweep = default_phi_axis();
    if (sc.sweep.variable != "phi")
        throw ScenarioError("isosceles sweep requires sweep.variable = phi, got '" +
                            sc.sweep.variable + "'");
    sc.geometry = "isosceles";
    const double side = sc.spacing < 0.0 ? default_spacing(sc) : sc.spacing;

    const double n_single =
        single_atom_reference(sc.params, sc.eta_omega, sc.params.delta).n_target;

    std::vector<SweepRecord> rows(static_cast<size_t>(sc.sweep.points));
    for (int i = 0; i < sc.sweep.points; ++i)
        rows[static_cast<size_t>(i)].sweep_value =
            grid_point(sc.sweep.from, sc.sweep.to, sc.sweep.points, i);

    run_parallel(rows, sc.jobs, [&](size_t, SweepRecord& rec) {
        AtomConfiguration config = build_isosceles(side, rec.sweep_value);
        attach_pair_diagnostics(rec, config, sc.params.gamma);
        SteadyResult result = solve_configuration(config, sc.params, sc.eta_omega, sc.solver);
        fill_from_result(rec, result, n_single);
    });
    return rows;
}

std::vector<SweepRecord> run_hexagon_suite(const Scenario& scenario) {
    Scenario sc = scenario;
    if (sc.geometry != "hexagon")
        throw ScenarioError("hexagon suite requires geometry = hexagon, got '" + sc.geometry +
                            "'");
    if (sc.subsets.empty()) throw ScenarioError("hexagon suite needs at least one vertex subset");
    const double side = sc.spacing < 0.0 ? default_spacing(sc) : sc.spacing;

    const double n_single =
        single_atom_reference(sc.params, sc.eta_omega, sc.params.delta).n_target;

    std::vector<SweepRecord> rows(sc.subsets.size());
    for (size_t i = 0; i < sc.subsets.size(); ++i) {
        rows[i].label = join_subset(sc.subsets[i]);
        rows[i].sweep_value = side;
    }

    run_parallel(rows, sc.jobs, [&](size_t i, SweepRecord& rec) {
        const std::vector<int>& subset = sc.subsets[i];
        AtomConfiguration config = build_hexagon_config(subset, side);
        attach_pair_diagnostics(rec, config, sc.params.gamma);
        SolverPath path = sc.solver;
        if (path == SolverPath::Auto && subset.size() >= 4) path = SolverPath::TraceReplacement;
        SteadyResult result = solve_configuration(config, sc.params, sc.eta_omega, path);
        fill_from_result(rec, result, n_single);
    });
    return rows;
}

}  // namespace ddcool
