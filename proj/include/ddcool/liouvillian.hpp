#pragma once

// Assembly of the sideband-cooling Hamiltonian and the full Lindblad
// generator for an array of driven two-level emitters with collective
// photon-mediated couplings.
//
// With the trap frequency nu as the energy unit, the Hamiltonian is
//   H = -Delta sum_mu s+_mu s-_mu + nu sum_{mu in P} a+_mu a_mu
//       + sum_{driven mu} (eta*Omega_mu/2)(s+_mu + s-_mu)(a+_mu + a_mu)
//       + sum_{mu != nu} g_mu_nu s+_mu s-_nu
// with the counter-rotating spin-phonon products kept (no rotating-wave
// approximation) and no carrier term.  The generator is
//   L(rho) = -i[H, rho] + sum_mu Gamma D_mumu[rho] + sum_{mu != nu} gamma_mu_nu D_munu[rho]
//   D_munu[rho] = s-_nu rho s+_mu - (1/2){s+_mu s-_nu, rho}
// vectorized by column stacking: L_mat * vec(rho) = vec(L(rho)) with
// vec(A X B) = (B^T (x) A) vec(X).

#include "ddcool/geometry.hpp"
#include "ddcool/hilbert.hpp"

namespace ddcool {

struct ModelParams {
    double nu = 1.0;                  // trap frequency (the unit of energy)
    double gamma = 0.1;               // spontaneous decay rate Gamma
    double delta = -1.0;              // laser detuning Delta
    std::vector<double> eta_omega;    // per-atom drive strength eta*Omega_mu
    int n_cut = 1;                    // phonon cutoff

    bool operator==(const ModelParams&) const = default;
};

// Hermitian Hamiltonian on the layout.  Atoms with nonzero eta_omega must
// carry a phonon mode (the sideband coupling has no meaning without one).
SparseMatrix build_hamiltonian(const HilbertLayout& layout, const ModelParams& params,
                               const CouplingMatrices& couplings);

struct Superoperator {
    SparseMatrix matrix;   // dim()^2 x dim()^2, column-stacking convention
    HilbertLayout layout;
};

Superoperator build_liouvillian(const HilbertLayout& layout, const ModelParams& params,
                                const CouplingMatrices& couplings);

}  // namespace ddcool
