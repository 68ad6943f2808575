#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ddcool/steady.hpp"

using namespace ddcool;
using Catch::Matchers::WithinAbs;
using Mat = Eigen::MatrixXcd;

namespace {

Superoperator single_gen(int n_cut = 1, double eta = 0.04, double delta = -1.0) {
    HilbertLayout lay{1, {0}, n_cut};
    ModelParams p;
    p.n_cut = n_cut;
    p.eta_omega = {eta};
    p.delta = delta;
    CouplingMatrices m;
    m.gamma = p.gamma;
    m.shifts = Eigen::MatrixXd::Zero(1, 1);
    m.decays = Eigen::MatrixXd::Constant(1, 1, p.gamma);
    return build_liouvillian(lay, p, m);
}

Superoperator pair_gen(double spacing, int n_cut = 1) {
    AtomConfiguration config = build_line(2, spacing);
    CouplingMatrices m = coupling_matrices(config, 0.1);
    HilbertLayout lay{2, {0}, n_cut};
    ModelParams p;
    p.n_cut = n_cut;
    p.eta_omega = {0.04, 0.0};
    return build_liouvillian(lay, p, m);
}

const double kMagic = 0.713292631286;

}  // namespace

TEST_CASE("single-atom occupation per phonon cutoff") {
    struct Row {
        int n_cut;
        double occupation;
    };
    const Row rows[] = {
        {1, 0.00082364099236279},
        {2, 0.00082627506726198},
        {3, 0.00082634176994111},
    };
    for (const Row& r : rows) {
        CAPTURE(r.n_cut);
        SteadyResult res = steady_state(single_gen(r.n_cut), 0);
        CHECK_THAT(res.n_target, WithinAbs(r.occupation, 1e-9));
        CHECK(res.residual <= 1e-10);
        CHECK(res.nullity_gap >= 1e6);
        CHECK(res.hermiticity_defect <= 1e-12);
        CHECK(res.path_used == SolverPath::DenseSvd);
        CHECK_THAT(res.rho.trace().real(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(res.rho.trace().imag(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("pair at the magic spacing beats the single atom by five percent") {
    SteadyResult pair = steady_state(pair_gen(kMagic), 0);
    SteadyResult single = steady_state(single_gen(), 0);
    CHECK_THAT(pair.n_target, WithinAbs(0.00077884338540135, 1e-9));
    CHECK_THAT(cooling_ratio(pair.n_target, single.n_target),
               WithinAbs(0.94561027513586, 1e-9));
}

TEST_CASE("triangle at the magic spacing") {
    AtomConfiguration tri = build_equilateral_triangle(kMagic);
    CouplingMatrices m = coupling_matrices(tri, 0.1);
    HilbertLayout lay{3, {0}, 1};
    ModelParams p;
    p.eta_omega = {0.04, 0.0, 0.0};
    SteadyResult res = steady_state(build_liouvillian(lay, p, m), 0);
    SteadyResult single = steady_state(single_gen(), 0);
    CHECK_THAT(cooling_ratio(res.n_target, single.n_target),
               WithinAbs(0.87541792606955, 1e-9));
}

TEST_CASE("dense and trace-replacement paths agree") {
    Superoperator gen = pair_gen(0.3);
    SolverOptions dense;
    dense.path = SolverPath::DenseSvd;
    SolverOptions sparse;
    sparse.path = SolverPath::TraceReplacement;
    SteadyResult a = steady_state(gen, 0, dense);
    SteadyResult b = steady_state(gen, 0, sparse);
    CHECK(a.path_used == SolverPath::DenseSvd);
    CHECK(b.path_used == SolverPath::TraceReplacement);
    CHECK_THAT(a.n_target, WithinAbs(b.n_target, 1e-12));
    CHECK((a.rho - b.rho).norm() < 1e-10);
    CHECK(b.residual <= 1e-10);
    CHECK(b.nullity_gap >= 1e6);
}

TEST_CASE("automatic path selection follows the dense limit") {
    Superoperator gen = pair_gen(0.4);
    SteadyResult dense = steady_state(gen, 0);
    CHECK(dense.path_used == SolverPath::DenseSvd);
    SolverOptions opts;
    opts.dense_limit = 10;   // force the 64-row generator onto the sparse path
    SteadyResult sparse = steady_state(gen, 0, opts);
    CHECK(sparse.path_used == SolverPath::TraceReplacement);
    CHECK_THAT(sparse.n_target, WithinAbs(dense.n_target, 1e-12));
}

TEST_CASE("undriven systems are rejected as degenerate") {
    CHECK_THROWS_AS(steady_state(single_gen(1, 0.0), 0), SolverError);

    // A spectator with its own phonon mode but no drive leaves that mode
    // without a unique stationary state.
    AtomConfiguration config = build_line(2, kMagic);
    CouplingMatrices m = coupling_matrices(config, 0.1);
    HilbertLayout lay{2, {0, 1}, 1};
    ModelParams p;
    p.eta_omega = {0.04, 0.0};
    CHECK_THROWS_AS(steady_state(build_liouvillian(lay, p, m), 0), SolverError);
}

TEST_CASE("degeneracy detection also guards the sparse path") {
    Superoperator gen = single_gen(1, 0.0);
    SolverOptions opts;
    opts.path = SolverPath::TraceReplacement;
    CHECK_THROWS_AS(steady_state(gen, 0, opts), SolverError);
}

TEST_CASE("phonon occupation extraction") {
    SteadyResult res = steady_state(pair_gen(0.25), 0);
    HilbertLayout lay{2, {0}, 1};
    double n = phonon_occupation(res.rho, lay, 0);
    CHECK_THAT(n, WithinAbs(res.n_target, 1e-15));
    CHECK(n >= 0.0);
    CHECK(n <= 1.0);
    CHECK_THROWS_AS(phonon_occupation(res.rho, lay, 1), ScenarioError);
}

TEST_CASE("cooling ratio rejects a vanishing reference") {
    CHECK_THROWS_AS(cooling_ratio(0.5, 0.0), ScenarioError);
    CHECK_THAT(cooling_ratio(0.5, 0.25), WithinAbs(2.0, 1e-15));
}

TEST_CASE("the steady state is a fixed point of time evolution") {
    Superoperator gen = pair_gen(kMagic);
    SteadyResult res = steady_state(gen, 0);
    Mat evolved = evolve(gen, res.rho, 5.0);
    CHECK((evolved - res.rho).norm() < 1e-8);
}

TEST_CASE("time evolution relaxes onto the steady state") {
    Superoperator gen = single_gen();
    SteadyResult res = steady_state(gen, 0);
    // Start from |g, n=1>: one phonon, spin ground.
    Mat rho0 = Mat::Zero(4, 4);
    rho0(1, 1) = 1.0;
    Mat evolved = evolve(gen, rho0, 1000.0);
    CHECK_THAT(evolved.trace().real(), WithinAbs(1.0, 1e-9));
    CHECK((evolved - res.rho).norm() < 1e-6);
}

TEST_CASE("zero-time evolution is the identity") {
    Superoperator gen = single_gen();
    SteadyResult res = steady_state(gen, 0);
    CHECK((evolve(gen, res.rho, 0.0) - res.rho).norm() == 0.0);
}
