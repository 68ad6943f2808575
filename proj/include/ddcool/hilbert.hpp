#pragma once

// Truncated spin (x) phonon Hilbert space and sparse operator construction.
//
// Basis convention (fixed so matrices are bit-reproducible): tensor factors
// are the N spins in atom order followed by one truncated Fock factor per
// entry of `phonon_atoms`, in that order; the first factor is the most
// significant in the basis index.  Within a spin factor |g> = 0 precedes
// |e> = 1; within a Fock factor the states are |0>..|n_cut>.  The lowering
// operator on one spin is |g><e| = [[0,1],[0,0]].

#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "ddcool/errors.hpp"

namespace ddcool {

using complexd = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<complexd>;
using Triplet = Eigen::Triplet<complexd>;

struct HilbertLayout {
    int n_atoms = 1;
    std::vector<int> phonon_atoms;   // ordered subset of atoms carrying a phonon mode
    int n_cut = 1;                   // highest retained Fock state

    // Total dimension 2^n_atoms * (n_cut + 1)^|phonon_atoms|.
    int dim() const;
    // Position of `atom` within phonon_atoms, or -1 if it carries no mode.
    int phonon_slot(int atom) const;
    // Throws ScenarioError if the layout is inconsistent.
    void check() const;
};

SparseMatrix identity_op(const HilbertLayout& layout);

// |g><e| on the given atom, identity elsewhere.
SparseMatrix sigma_lower(const HilbertLayout& layout, int atom);

// Truncated ladder operator a|n> = sqrt(n)|n-1> on the given atom's mode.
// Throws ScenarioError if the atom carries no phonon mode.
SparseMatrix phonon_annihilation(const HilbertLayout& layout, int atom);

// a^dag a on the given atom's mode.
SparseMatrix phonon_number(const HilbertLayout& layout, int atom);

}  // namespace ddcool
