#include "ddcool/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ddcool {

void validate(const AtomConfiguration& config) {
    if (config.positions.empty())
        throw ScenarioError("configuration has no atoms");
    if (std::abs(config.dipole.norm() - 1.0) > 1e-12)
        throw ScenarioError("dipole vector is not unit-norm");
    if (config.target < 0 || config.target >= config.n_atoms())
        throw ScenarioError("target index out of range");
    const int n = config.n_atoms();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((config.positions[i] - config.positions[j]).norm() <= 0.0)
                throw ScenarioError("coincident atoms in configuration");
}

PairCouplings pair_couplings(const Vec3& separation, const Vec3& dipole, double gamma) {
    const double s = separation.norm();
    if (!(s > 0.0))
        throw ScenarioError("coincident atoms: zero pair separation");

    const double xi = 2.0 * M_PI * s;
    const double cost = dipole.dot(separation) / s;
    const double c2 = cost * cost;
    const double sx = std::sin(xi);
    const double cx = std::cos(xi);

    // cos(xi)/xi^2 - sin(xi)/xi^3 -> -1/3 as xi -> 0; switch to its Taylor
    // series below xi = 0.1 where the direct difference cancels badly.
    double near;
    if (xi < 0.1) {
        const double x2 = xi * xi;
        near = -1.0 / 3.0 +
               x2 * (1.0 / 30.0 +
                     x2 * (-1.0 / 840.0 + x2 * (1.0 / 45360.0 - x2 / 3991680.0)));
    } else {
        near = cx / (xi * xi) - sx / (xi * xi * xi);
    }
    const double far = sx / (xi * xi) + cx / (xi * xi * xi);

    PairCouplings out;
    out.shift = 0.75 * gamma * (-(1.0 - c2) * cx / xi + (1.0 - 3.0 * c2) * far);
    out.decay = 1.5 * gamma * ((1.0 - c2) * sx / xi + (1.0 - 3.0 * c2) * near);
    return out;
}

CouplingMatrices coupling_matrices(const AtomConfiguration& config, double gamma) {
    validate(config);
    if (!(gamma > 0.0))
        throw ScenarioError("decay rate must be positive");

    const int n = config.n_atoms();
    CouplingMatrices out;
    out.gamma = gamma;
    out.shifts = Eigen::MatrixXd::Zero(n, n);
    out.decays = Eigen::MatrixXd::Constant(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        out.decays(i, i) = gamma;
        for (int j = i + 1; j < n; ++j) {
            const PairCouplings pc =
                pair_couplings(config.positions[i] - config.positions[j], config.dipole, gamma);
            out.shifts(i, j) = out.shifts(j, i) = pc.shift;
            out.decays(i, j) = out.decays(j, i) = pc.decay;
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j && std::abs(out.decays(i, j)) >= gamma)
                throw InvariantError("off-diagonal decay rate exceeds the single-atom rate");
            if (!std::isfinite(out.shifts(i, j)) || !std::isfinite(out.decays(i, j)))
                throw InvariantError("non-finite coupling coefficient");
        }
    if (n > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.decays, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) < -1e-10 * gamma)
            throw InvariantError("decay matrix is not positive semidefinite");
    }
    return out;
}

namespace {

double shift_on_axis(double s, double theta) {
    const Vec3 dip(std::cos(theta), 0.0, std::sin(theta));
    return pair_couplings(Vec3(s, 0.0, 0.0), dip, 1.0).shift;
}

}  // namespace

std::vector<double> find_magic_spacings(double theta, double s_min, double s_max,
                                        double tolerance) {
    if (!(s_min >= 0.01))
        throw ScenarioError("magic-spacing search must start at 0.01 or above");
    if (!(s_max > s_min))
        throw ScenarioError("empty magic-spacing search range");
    if (!(tolerance > 0.0))
        throw ScenarioError("magic-spacing tolerance must be positive");

    const int points = std::max(3, static_cast<int>(std::ceil((s_max - s_min) * 2000.0)) + 1);
    const double step = (s_max - s_min) / (points - 1);

    std::vector<double> roots;
    double prev_s = s_min;
    double prev_g = shift_on_axis(prev_s, theta);
    for (int k = 1; k < points; ++k) {
        const double s = s_min + k * step;
        const double g = shift_on_axis(s, theta);
        if (prev_g == 0.0) {
            roots.push_back(prev_s);
        } else if (prev_g * g < 0.0) {
            double lo = prev_s, hi = s, glo = prev_g;
            while (hi - lo > tolerance) {
                const double mid = 0.5 * (lo + hi);
                const double gm = shift_on_axis(mid, theta);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (glo * gm < 0.0)
                    hi = mid;
                else
                    lo = mid, glo = gm;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_s = s;
        prev_g = g;
    }
    if (prev_g == 0.0)
        roots.push_back(prev_s);
    return roots;
}

AtomConfiguration build_line(int n_atoms, double spacing) {
    if (n_atoms < 1)
        throw ScenarioError("line needs at least one atom");
    if (!(spacing > 0.0) && n_atoms > 1)
        throw ScenarioError("line spacing must be positive");
    AtomConfiguration config;
    for (int i = 0; i < n_atoms; ++i)
        config.positions.emplace_back(i * spacing, 0.0, 0.0);
    validate(config);
    return config;
}

AtomConfiguration build_equilateral_triangle(double side) {
    if (!(side > 0.0))
        throw ScenarioError("triangle side must be positive");
    AtomConfiguration config;
    config.positions.emplace_back(0.0, 0.0, 0.0);
    config.positions.emplace_back(side, 0.0, 0.0);
    config.positions.emplace_back(0.5 * side, 0.5 * std::sqrt(3.0) * side, 0.0);
    validate(config);
    return config;
}

AtomConfiguration build_isosceles(double side, double phi) {
    if (!(side > 0.0))
        throw ScenarioError("isosceles side must be positive");
    if (!(phi > 0.0 && phi <= M_PI))
        throw ScenarioError("isosceles apex angle must lie in (0, pi]");
    AtomConfiguration config;
    config.positions.emplace_back(0.0, 0.0, 0.0);
    config.positions.emplace_back(side * std::sin(0.5 * phi), -side * std::cos(0.5 * phi), 0.0);
    config.positions.emplace_back(-side * std::sin(0.5 * phi), -side * std::cos(0.5 * phi), 0.0);
    validate(config);
    return config;
}

AtomConfiguration build_hexagon_config(const std::vector<int>& vertex_subset, double side) {
    if (!(side > 0.0))
        throw ScenarioError("hexagon side must be positive");
    if (vertex_subset.empty())
        throw ScenarioError("hexagon vertex subset is empty");
    std::vector<int> vertices = vertex_subset;
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw ScenarioError("duplicate hexagon vertex index");
    AtomConfiguration config;
    config.positions.emplace_back(0.0, 0.0, 0.0);
    for (int v : vertices) {
        if (v < 0 || v > 5)
            throw ScenarioError("hexagon vertex index out of range 0..5");
        const double ang = v * M_PI / 3.0;
        config.positions.emplace_back(side * std::cos(ang), side * std::sin(ang), 0.0);
    }
    validate(config);
    return config;
}

}  // namespace ddcool
