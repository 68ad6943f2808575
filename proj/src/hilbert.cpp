#include "ddcool/hilbert.hpp"

#include <cmath>

namespace ddcool {

namespace {

// Index strides for the mixed-radix basis: spin part (base 2, atom 0 most
// significant) times phonon part (base n_cut+1, phonon_atoms[0] most
// significant).
struct Strides {
    int phonon_dim = 1;                 // (n_cut+1)^|P|
    std::vector<int> spin;              // stride of each atom's spin bit
    std::vector<int> fock;              // stride of each phonon slot's digit
};

Strides strides_of(const HilbertLayout& layout) {
    Strides st;
    const int base = layout.n_cut + 1;
    const int n_slots = static_cast<int>(layout.phonon_atoms.size());
    st.fock.assign(n_slots, 1);
    for (int k = n_slots - 1; k >= 0; --k) {   // slot k has stride base^(n_slots-1-k)
        st.fock[k] = st.phonon_dim;
        st.phonon_dim *= base;
    }
    st.spin.assign(layout.n_atoms, 0);
    for (int mu = 0; mu < layout.n_atoms; ++mu)
        st.spin[mu] = (1 << (layout.n_atoms - 1 - mu)) * st.phonon_dim;
    return st;
}

}  // namespace

int HilbertLayout::dim() const {
    int d = 1 << n_atoms;
    for (size_t k = 0; k < phonon_atoms.size(); ++k) d *= n_cut + 1;
    return d;
}

int HilbertLayout::phonon_slot(int atom) const {
    for (size_t k = 0; k < phonon_atoms.size(); ++k)
        if (phonon_atoms[k] == atom) return static_cast<int>(k);
    return -1;
}

void HilbertLayout::check() const {
    if (n_atoms < 1) throw ScenarioError("layout needs at least one atom");
    if (n_cut < 1) throw ScenarioError("phonon cutoff must be at least 1");
    std::vector<bool> seen(n_atoms, false);
    for (int a : phonon_atoms) {
        if (a < 0 || a >= n_atoms) throw ScenarioError("phonon atom index out of range");
        if (seen[a]) throw ScenarioError("duplicate phonon atom index");
        seen[a] = true;
    }
}

SparseMatrix identity_op(const HilbertLayout& layout) {
    layout.check();
    SparseMatrix id(layout.dim(), layout.dim());
    id.setIdentity();
    return id;
}

SparseMatrix sigma_lower(const HilbertLayout& layout, int atom) {
    layout.check();
    if (atom < 0 || atom >= layout.n_atoms)
        throw ScenarioError("atom index out of range");
    const int d = layout.dim();
    const Strides st = strides_of(layout);
    const int stride = st.spin[atom];

    std::vector<Triplet> entries;
    entries.reserve(d / 2);
    for (int col = 0; col < d; ++col)
        if ((col / stride) % 2 == 1)                      // spin bit set: |e> component
            entries.emplace_back(col - stride, col, 1.0); // maps to |g>
    SparseMatrix op(d, d);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrix phonon_annihilation(const HilbertLayout& layout, int atom) {
    layout.check();
    const int slot = layout.phonon_slot(atom);
    if (slot < 0)
        throw ScenarioError("atom carries no phonon mode");
    const int d = layout.dim();
    const Strides st = strides_of(layout);
    const int stride = st.fock[slot];
    const int base = layout.n_cut + 1;

    std::vector<Triplet> entries;
    entries.reserve(d);
    for (int col = 0; col < d; ++col) {
        const int n = (col / stride) % base;
        if (n >= 1)
            entries.emplace_back(col - stride, col, std::sqrt(static_cast<double>(n)));
    }
    SparseMatrix op(d, d);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrix phonon_number(const HilbertLayout& layout, int atom) {
    layout.check();
    const int slot = layout.phonon_slot(atom);
    if (slot < 0)
        throw ScenarioError("atom carries no phonon mode");
    const int d = layout.dim();
    const Strides st = strides_of(layout);
    const int stride = st.fock[slot];
    const int base = layout.n_cut + 1;

    std::vector<Triplet> entries;
    entries.reserve(d);
    for (int col = 0; col < d; ++col) {
        const int n = (col / stride) % base;
        if (n > 0)
            entries.emplace_back(col, col, static_cast<double>(n));
    }
    SparseMatrix op(d, d);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

}  // namespace ddcool
