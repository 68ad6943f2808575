#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ddcool/steady.hpp"

using namespace ddcool;
using Mat = Eigen::MatrixXcd;

namespace {

constexpr double kGamma = 0.1;

// Random geometry in a 2-wavelength box with pairwise distances >= 0.05.
AtomConfiguration random_configuration(std::mt19937& rng, int n_atoms) {
    std::uniform_real_distribution<double> box(0.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    AtomConfiguration config;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        config.positions.clear();
        for (int i = 0; i < n_atoms; ++i)
            config.positions.emplace_back(box(rng), box(rng), box(rng));
        double min_dist = 1e300;
        for (int i = 0; i < n_atoms; ++i)
            for (int j = i + 1; j < n_atoms; ++j)
                min_dist = std::min(min_dist,
                                    (config.positions[i] - config.positions[j]).norm());
        if (min_dist >= 0.05) break;
    }
    Vec3 dip(gauss(rng), gauss(rng), gauss(rng));
    while (dip.norm() < 1e-3) dip = Vec3(gauss(rng), gauss(rng), gauss(rng));
    config.dipole = dip.normalized();
    return config;
}

double shift_on_axis(double s, double theta) {
    return pair_couplings(Vec3(s, 0, 0), Vec3(std::cos(theta), 0.0, std::sin(theta)), kGamma)
        .shift;
}

double decay_on_axis(double s, double theta) {
    return pair_couplings(Vec3(s, 0, 0), Vec3(std::cos(theta), 0.0, std::sin(theta)), kGamma)
        .decay;
}

}  // namespace

TEST_CASE("decay matrices are positive semidefinite for random geometries") {
    std::mt19937 rng(20260823);
    std::uniform_int_distribution<int> pick_n(2, 6);
    double worst = 1e300;
    for (int trial = 0; trial < 200; ++trial) {
        AtomConfiguration config = random_configuration(rng, pick_n(rng));
        CouplingMatrices m = coupling_matrices(config, kGamma);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.decays, Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues()(0));
    }
    CHECK(worst >= -1e-10 * kGamma);
}

TEST_CASE("cross decay never reaches the single-atom rate beyond s = 0.01") {
    double max_abs = 0.0;
    for (double theta = 0.0; theta <= M_PI / 2 + 1e-12; theta += M_PI / 12) {
        for (int k = 0; k <= 6000; ++k) {
            const double s = 0.01 + k * (3.0 - 0.01) / 6000.0;
            max_abs = std::max(max_abs, std::abs(decay_on_axis(s, theta)));
        }
    }
    CHECK(max_abs < kGamma);
}

TEST_CASE("the coherent shift decays like 1/s at long range") {
    // Fit the envelope constant on a coarse grid once, then verify it bounds
    // |shift| * s on a finer, offset grid.
    for (double theta : {0.0, 0.3, M_PI / 2}) {
        double envelope = 0.0;
        for (int k = 0; k <= 500; ++k) {
            const double s = 0.5 + k * (3.0 - 0.5) / 500.0;
            envelope = std::max(envelope, std::abs(shift_on_axis(s, theta)) * s);
        }
        for (int k = 0; k <= 3777; ++k) {
            const double s = 0.5 + (k + 0.37) * (3.0 - 0.5) / 3777.0;
            if (s > 3.0) break;
            CAPTURE(theta, s);
            CHECK(std::abs(shift_on_axis(s, theta)) * s <= 1.02 * envelope);
        }
    }
}

TEST_CASE("magic-root lists are complete, sorted, and genuine for random tilts") {
    std::mt19937 rng(7151123);
    std::uniform_real_distribution<double> tilt(0.0, M_PI);
    for (int trial = 0; trial < 10; ++trial) {
        const double theta = tilt(rng);
        CAPTURE(theta);
        std::vector<double> roots = find_magic_spacings(theta, 0.01, 1.5);
        CHECK(std::is_sorted(roots.begin(), roots.end()));
        for (double r : roots) CHECK(std::abs(shift_on_axis(r, theta)) < 1e-10 * kGamma);

        // A denser independent scan must find the same number of crossings.
        int crossings = 0;
        double prev = shift_on_axis(0.01, theta);
        for (int k = 1; k <= 4000; ++k) {
            const double s = 0.01 + k * (1.5 - 0.01) / 4000.0;
            const double g = shift_on_axis(s, theta);
            if (prev * g < 0.0) ++crossings;
            prev = g;
        }
        CHECK(static_cast<int>(roots.size()) == crossings);
    }
}

TEST_CASE("steady-state contract holds for random few-atom geometries") {
    std::mt19937 rng(424211);
    std::uniform_int_distribution<int> pick_n(2, 3);
    for (int trial = 0; trial < 8; ++trial) {
        AtomConfiguration config = random_configuration(rng, pick_n(rng));
        CouplingMatrices m = coupling_matrices(config, kGamma);
        HilbertLayout lay;
        lay.n_atoms = config.n_atoms();
        lay.phonon_atoms = {0};
        lay.n_cut = 1;
        ModelParams p;
        p.eta_omega.assign(static_cast<size_t>(config.n_atoms()), 0.0);
        p.eta_omega[0] = 0.04;
        Superoperator gen = build_liouvillian(lay, p, m);

        // Trace functional annihilated by the generator.
        const int d = lay.dim();
        Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(gen.matrix.cols());
        Mat dense = Mat(gen.matrix);
        for (int i = 0; i < d; ++i) tr += dense.row(i * d + i);
        CHECK(tr.norm() < 1e-12);

        SteadyResult res = steady_state(gen, 0);
        CAPTURE(trial, config.n_atoms());
        CHECK(res.residual <= 1e-10);
        CHECK(res.nullity_gap >= 1e6);
        CHECK(res.n_target >= 0.0);
        CHECK(res.n_target <= 1.0);
        Eigen::SelfAdjointEigenSolver<Mat> es(res.rho, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= -1e-8);
    }
}

TEST_CASE("time evolution preserves trace and positivity from random states") {
    std::mt19937 rng(90125);
    std::normal_distribution<double> gauss(0.0, 1.0);
    HilbertLayout lay{1, {0}, 1};
    ModelParams p;
    p.eta_omega = {0.04};
    CouplingMatrices m;
    m.gamma = p.gamma;
    m.shifts = Eigen::MatrixXd::Zero(1, 1);
    m.decays = Eigen::MatrixXd::Constant(1, 1, p.gamma);
    Superoperator gen = build_liouvillian(lay, p, m);

    for (int trial = 0; trial < 3; ++trial) {
        Mat a(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = complexd(gauss(rng), gauss(rng));
        Mat rho0 = a * a.adjoint();
        rho0 /= rho0.trace();

        Mat rho = evolve(gen, rho0, 3.0);
        CHECK(std::abs(rho.trace() - complexd(1.0, 0.0)) < 1e-9);
        CHECK((rho - rho.adjoint()).norm() < 1e-9);
        Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= -1e-8);
    }
}
