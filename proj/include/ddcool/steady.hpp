#pragma once

// Steady-state solution of the Lindblad generator, phonon-occupation
// extraction, cooling-ratio computation, and a time-evolution validator.
//
// Two solver paths produce the unique trace-one null state of the generator:
//  - a dense full SVD (null space = right singular vector of the smallest
//    singular value) for superoperators up to `dense_limit` on an edge, and
//  - a sparse LU solve of the generator with one row replaced by the trace
//    functional (trace-replacement) for larger systems.
// Both reject generators whose null space is not one-dimensional ("degenerate
// steady state"), which in this model signals an undriven phonon-carrying
// atom or zero drive.

#include "ddcool/liouvillian.hpp"

namespace ddcool {

enum class SolverPath { Auto, DenseSvd, TraceReplacement };

struct SolverOptions {
    SolverPath path = SolverPath::Auto;
    int dense_limit = 20000;      // largest superoperator edge solved densely under Auto
    double residual_tol = 1e-10;  // bound on ||L vec(rho)||_2 for an accepted solve
    double gap_threshold = 1e6;   // minimum ratio of the two smallest singular values
    double psd_tol = 1e-8;        // tolerated negativity of rho's smallest eigenvalue
};

struct SteadyResult {
    Eigen::MatrixXcd rho;            // Hermitian, trace-one, PSD within psd_tol
    double n_target = 0.0;           // phonon occupation of the target atom
    double residual = 0.0;           // ||L vec(rho)||_2
    double nullity_gap = 0.0;        // ratio of the two smallest singular values
                                     // (estimated by inverse iteration on the sparse path)
    double hermiticity_defect = 0.0; // ||rho - rho^dag||_F / 2 before symmetrization
    SolverPath path_used = SolverPath::Auto;
};

// Solves L(rho) = 0.  `target_atom` selects whose phonon occupation is
// reported (ignored when that atom carries no mode).  Throws SolverError on a
// degenerate steady state and InvariantError when the solution violates the
// residual, trace, or positivity contracts.
SteadyResult steady_state(const Superoperator& gen, int target_atom,
                          const SolverOptions& options = {});

// tr(a^dag a rho) for the given atom.  Throws ScenarioError if the atom
// carries no phonon mode, InvariantError if the trace has an imaginary part
// beyond 1e-12 or falls outside [0, n_cut].
double phonon_occupation(const Eigen::MatrixXcd& rho, const HilbertLayout& layout, int atom);

// n_multi / n_single_reference; values below one indicate enhanced cooling.
// Throws ScenarioError when the reference occupation is below 1e-15
// (ill-defined ratio).
double cooling_ratio(double n_multi, double n_single_reference);

// Propagates rho0 for time t (units 1/nu) with an adaptive Dormand-Prince
// 5(4) integrator at local tolerance `tol`.  The trace is conserved within
// 1e-9 (checked).  Used to cross-validate steady states.
Eigen::MatrixXcd evolve(const Superoperator& gen, const Eigen::MatrixXcd& rho0, double t,
                        double tol = 1e-10);

}  // namespace ddcool
