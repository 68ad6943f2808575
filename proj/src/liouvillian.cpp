#include "ddcool/liouvillian.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace ddcool {

namespace {

void check_inputs(const HilbertLayout& layout, const ModelParams& params,
                  const CouplingMatrices& couplings) {
    layout.check();
    if (!(params.gamma > 0.0))
        throw ScenarioError("decay rate must be positive");
    if (params.n_cut != layout.n_cut)
        throw ScenarioError("phonon cutoff mismatch between params and layout");
    if (static_cast<int>(params.eta_omega.size()) != layout.n_atoms)
        throw ScenarioError("eta_omega must list one drive strength per atom");
    if (couplings.shifts.rows() != layout.n_atoms || couplings.decays.rows() != layout.n_atoms)
        throw ScenarioError("coupling matrix dimension does not match atom count");
    for (int mu = 0; mu < layout.n_atoms; ++mu) {
        if (params.eta_omega[mu] < 0.0)
            throw ScenarioError("drive strengths must be non-negative");
        if (params.eta_omega[mu] != 0.0 && layout.phonon_slot(mu) < 0)
            throw ScenarioError("driven atom without phonon mode");
    }
}

}  // namespace

SparseMatrix build_hamiltonian(const HilbertLayout& layout, const ModelParams& params,
                               const CouplingMatrices& couplings) {
    check_inputs(layout, params, couplings);
    const int d = layout.dim();

    SparseMatrix H(d, d);
    std::vector<SparseMatrix> lower(layout.n_atoms);
    for (int mu = 0; mu < layout.n_atoms; ++mu)
        lower[mu] = sigma_lower(layout, mu);

    for (int mu = 0; mu < layout.n_atoms; ++mu)
        H += complexd(-params.delta) * (lower[mu].adjoint() * lower[mu]).eval();
    for (int mu : layout.phonon_atoms)
        H += complexd(params.nu) * phonon_number(layout, mu);
    for (int mu = 0; mu < layout.n_atoms; ++mu) {
        if (params.eta_omega[mu] == 0.0) continue;
        const SparseMatrix a = phonon_annihilation(layout, mu);
        const SparseMatrix x = SparseMatrix(a.adjoint()) + a;
        const SparseMatrix sx = SparseMatrix(lower[mu].adjoint()) + lower[mu];
        H += complexd(0.5 * params.eta_omega[mu]) * (sx * x).eval();
    }
    for (int mu = 0; mu < layout.n_atoms; ++mu)
        for (int nu = 0; nu < layout.n_atoms; ++nu)
            if (mu != nu && couplings.shifts(mu, nu) != 0.0)
                H += complexd(couplings.shifts(mu, nu)) *
                     (lower[mu].adjoint() * lower[nu]).eval();
    H.makeCompressed();
    return H;
}

Superoperator build_liouvillian(const HilbertLayout& layout, const ModelParams& params,
                                const CouplingMatrices& couplings) {
    const SparseMatrix H = build_hamiltonian(layout, params, couplings);
    const int d = layout.dim();
    const SparseMatrix id = identity_op(layout);
    const complexd i_unit(0.0, 1.0);

    SparseMatrix L(d * d, d * d);
    L = (-i_unit) * SparseMatrix(Eigen::kroneckerProduct(id, H)) +
        i_unit * SparseMatrix(Eigen::kroneckerProduct(SparseMatrix(H.transpose()), id));

    for (int mu = 0; mu < layout.n_atoms; ++mu) {
        const SparseMatrix smu = sigma_lower(layout, mu);
        for (int nu = 0; nu < layout.n_atoms; ++nu) {
            const double c = (mu == nu) ? params.gamma : couplings.decays(mu, nu);
            if (c == 0.0) continue;
            const SparseMatrix snu = (mu == nu) ? smu : sigma_lower(layout, nu);
            const SparseMatrix sd = SparseMatrix(smu.adjoint()) * snu;  // s+_mu s-_nu
            L += complexd(c) *
                     SparseMatrix(Eigen::kroneckerProduct(smu.conjugate().eval(), snu)) +
                 complexd(-0.5 * c) * SparseMatrix(Eigen::kroneckerProduct(id, sd)) +
                 complexd(-0.5 * c) *
                     SparseMatrix(Eigen::kroneckerProduct(SparseMatrix(sd.transpose()), id));
        }
    }
    L.makeCompressed();
    return Superoperator{std::move(L), layout};
}

}  // namespace ddcool
