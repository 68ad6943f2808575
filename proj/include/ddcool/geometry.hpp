#pragma once

// Atom-array geometry and the free-space photon-mediated dipole-dipole
// coupling coefficients between identical two-level emitters: the collective
// frequency shift g and the collective decay rate gamma_cross of a pair, as
// functions of the separation (in units of the transition wavelength) and the
// dipole polarization direction.

#include <Eigen/Dense>
#include <vector>

#include "ddcool/errors.hpp"

namespace ddcool {

using Vec3 = Eigen::Vector3d;

// An array of emitters.  Positions are in units of the transition wavelength
// lambda; all dipoles point along the shared unit vector `dipole`; `target`
// names the atom whose motion is cooled.
struct AtomConfiguration {
    std::vector<Vec3> positions;
    Vec3 dipole{0.0, 0.0, 1.0};
    int target = 0;

    int n_atoms() const { return static_cast<int>(positions.size()); }
};

// Throws ScenarioError unless the dipole is unit-norm (1e-12), all pairwise
// distances are strictly positive, and the target index is valid.
void validate(const AtomConfiguration& config);

// Pairwise coefficients for one separation vector, in the units of `gamma`.
struct PairCouplings {
    double shift = 0.0;   // coherent exchange coefficient g
    double decay = 0.0;   // cross decay rate gamma_cross
};

// Evaluates the pair coefficients.  Internally xi = 2*pi*|separation| and
// cos(theta) = dipole . separation / |separation|:
//   g     = (3G/4) [ -(1-cos^2 t) cos xi/xi + (1-3cos^2 t)(sin xi/xi^2 + cos xi/xi^3) ]
//   gamma = (3G/2) [  (1-cos^2 t) sin xi/xi + (1-3cos^2 t)(cos xi/xi^2 - sin xi/xi^3) ]
// The combination cos xi/xi^2 - sin xi/xi^3 is evaluated by series for small
// xi; the direct form loses ~eps/xi^2 to cancellation.
// Throws ScenarioError on zero separation (the formulas are singular).
PairCouplings pair_couplings(const Vec3& separation, const Vec3& dipole, double gamma);

// All-pairs coefficient matrices for a configuration.
struct CouplingMatrices {
    Eigen::MatrixXd shifts;   // symmetric, zero diagonal
    Eigen::MatrixXd decays;   // symmetric, `gamma` on the diagonal, PSD
    double gamma = 0.0;
};

// Assembles and checks the matrices (symmetry, diagonal values,
// |off-diagonal decay| < gamma, positive semidefiniteness of `decays`).
CouplingMatrices coupling_matrices(const AtomConfiguration& config, double gamma);

// All spacings s in [s_min, s_max] where the pair shift g(s, theta) vanishes,
// for a pair along x with the dipole tilted by `theta` from the pair axis in
// the x-z plane.  Roots are bracketed by sign changes on a uniform scan grid
// (2000 points per lambda) and refined by bisection to `tolerance`; returned
// ascending.  An empty result is valid.  s_min must be >= 0.01 (the shift
// diverges as s -> 0).
std::vector<double> find_magic_spacings(double theta, double s_min, double s_max,
                                        double tolerance = 1e-12);

// Geometry builders.  All place atoms in the x-y plane with the dipole along
// z (perpendicular to every separation), and are validated before return.
AtomConfiguration build_line(int n_atoms, double spacing);            // target = atom 0 at the end
AtomConfiguration build_equilateral_triangle(double side);            // target at a vertex
AtomConfiguration build_isosceles(double side, double phi);           // target at the apex, legs = side
AtomConfiguration build_hexagon_config(const std::vector<int>& vertex_subset,
                                       double side);                  // target at the center,
                                                                      // circumradius = side

}  // namespace ddcool
