#include "ddcool/steady.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <random>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace ddcool {

namespace {

Eigen::VectorXcd sparse_matvec(const SparseMatrix& m, const Eigen::VectorXcd& v) {
    return m * v;
}

// Reshapes a column-stacked vector into a density matrix, normalizes the
// trace to one, and records the hermiticity defect before symmetrizing.
Eigen::MatrixXcd to_density(const Eigen::VectorXcd& vec, int d, double* defect) {
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(vec.data(), d, d);
    const complexd tr = rho.trace();
    if (std::abs(tr) < 1e-14 * rho.norm())
        throw SolverError("degenerate steady state: null vector carries no trace");
    rho /= tr;
    *defect = 0.5 * (rho - rho.adjoint()).norm();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return rho;
}

void check_density(const Eigen::MatrixXcd& rho, double psd_tol) {
    if (std::abs(rho.trace() - complexd(1.0)) > 1e-10)
        throw InvariantError("steady-state trace deviates from one");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -psd_tol)
        throw InvariantError("steady state is not positive semidefinite");
}

struct NullSolve {
    Eigen::VectorXcd vec;
    double gap = 0.0;
};

// Dense path: full SVD of the superoperator; the null vector is the right
// singular vector of the smallest singular value.
NullSolve solve_dense(const SparseMatrix& L) {
    const lapack_int k = static_cast<lapack_int>(L.rows());
    Eigen::MatrixXcd A(L);
    Eigen::MatrixXcd U(k, k), VT(k, k);
    Eigen::VectorXd sv(k);
    const lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'A', k, k, reinterpret_cast<lapack_complex_double*>(A.data()), k,
        sv.data(), reinterpret_cast<lapack_complex_double*>(U.data()), k,
        reinterpret_cast<lapack_complex_double*>(VT.data()), k);
    if (info != 0)
        throw SolverError("dense SVD failed to converge");

    NullSolve out;
    out.gap = sv(k - 2) / std::max(sv(k - 1), 1e-300);
    out.vec = VT.row(k - 1).conjugate();
    return out;
}

// Sparse path: replace one row of L by the trace functional and solve for the
// unit-trace null vector.  The nullity gap is estimated as sigma2/sigma1 with
// sigma1 the residual of the computed state and sigma2 from a few rounds of
// inverse iteration with the same factorization, projected off the state.
NullSolve solve_trace_replacement(const SparseMatrix& L) {
    const int k = static_cast<int>(L.rows());
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
    const int replaced = 0;

    std::vector<Triplet> trips;
    trips.reserve(L.nonZeros() + d);
    for (int col = 0; col < L.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(L, col); it; ++it)
            if (it.row() != replaced)
                trips.emplace_back(it.row(), it.col(), it.value());
    for (int j = 0; j < d; ++j)
        trips.emplace_back(replaced, j * (d + 1), 1.0);
    SparseMatrix T(k, k);
    T.setFromTriplets(trips.begin(), trips.end());
    T.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(T);
    lu.factorize(T);
    if (lu.info() != Eigen::Success)
        throw SolverError("degenerate steady state: trace-replaced system is singular");

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(k);
    b(replaced) = 1.0;
    Eigen::VectorXcd x = lu.solve(b);
    if (!x.allFinite())
        throw SolverError("degenerate steady state: solve produced non-finite values");

    const Eigen::VectorXcd xhat = x / x.norm();
    const double sigma1 = sparse_matvec(L, xhat).norm();

    // Inverse iteration for the second-smallest singular value estimate.
    std::mt19937 rng(190712);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXcd w(k);
    for (int i = 0; i < k; ++i) w(i) = complexd(dist(rng), dist(rng));
    w -= xhat * xhat.dot(w);
    w /= w.norm();
    double growth = 1.0;
    for (int round = 0; round < 4; ++round) {
        Eigen::VectorXcd z = lu.solve(w);
        if (!z.allFinite()) {
            growth = 1e300;
            break;
        }
        z -= xhat * xhat.dot(z);
        growth = z.norm();
        if (growth < 1e-300) break;
        w = z / growth;
    }
    const double sigma2 = 1.0 / std::max(growth, 1e-300);

    NullSolve out;
    out.vec = x;
    out.gap = sigma2 / std::max(sigma1, 1e-300);
    return out;
}

}  // namespace

SteadyResult steady_state(const Superoperator& gen, int target_atom,
                          const SolverOptions& options) {
    const int d = gen.layout.dim();
    if (gen.matrix.rows() != static_cast<long>(d) * d || gen.matrix.rows() != gen.matrix.cols())
        throw ScenarioError("superoperator dimension does not match layout");
    if (target_atom < 0 || target_atom >= gen.layout.n_atoms)
        throw ScenarioError("target atom index out of range");

    SolverPath path = options.path;
    if (path == SolverPath::Auto)
        path = (gen.matrix.rows() <= options.dense_limit) ? SolverPath::DenseSvd
                                                          : SolverPath::TraceReplacement;

    const NullSolve ns = (path == SolverPath::DenseSvd) ? solve_dense(gen.matrix)
                                                        : solve_trace_replacement(gen.matrix);
    if (!(ns.gap >= options.gap_threshold))
        throw SolverError("degenerate steady state: nullity gap " + std::to_string(ns.gap) +
                          " below threshold");

    SteadyResult result;
    result.path_used = path;
    result.nullity_gap = ns.gap;
    result.rho = to_density(ns.vec, d, &result.hermiticity_defect);

    const Eigen::VectorXcd flat =
        Eigen::Map<const Eigen::VectorXcd>(result.rho.data(), static_cast<long>(d) * d);
    result.residual = sparse_matvec(gen.matrix, flat).norm();
    if (result.residual > options.residual_tol)
        throw InvariantError("steady-state residual " + std::to_string(result.residual) +
                             " exceeds tolerance");
    check_density(result.rho, options.psd_tol);

    if (gen.layout.phonon_slot(target_atom) >= 0)
        result.n_target = phonon_occupation(result.rho, gen.layout, target_atom);
    return result;
}

double phonon_occupation(const Eigen::MatrixXcd& rho, const HilbertLayout& layout, int atom) {
    if (layout.phonon_slot(atom) < 0)
        throw ScenarioError("phonon occupation requested for an atom without a mode");
    if (rho.rows() != layout.dim() || rho.cols() != layout.dim())
        throw ScenarioError("density matrix dimension does not match layout");

    const SparseMatrix num = phonon_number(layout, atom);
    complexd tr(0.0, 0.0);
    for (int col = 0; col < num.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(num, col); it; ++it)
            tr += it.value() * rho(it.col(), it.row());
    if (std::abs(tr.imag()) > 1e-12)
        throw InvariantError("phonon occupation has a non-negligible imaginary part");
    const double n = tr.real();
    if (n < -1e-10 || n > layout.n_cut + 1e-10)
        throw InvariantError("phonon occupation outside [0, n_cut]");
    return n;
}

double cooling_ratio(double n_multi, double n_single_reference) {
    if (n_single_reference < 1e-15)
        throw ScenarioError("single-atom reference occupation too small for a ratio");
    return n_multi / n_single_reference;
}

Eigen::MatrixXcd evolve(const Superoperator& gen, const Eigen::MatrixXcd& rho0, double t,
                        double tol) {
    const int d = gen.layout.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw ScenarioError("initial state dimension does not match layout");
    if (t < 0.0)
        throw ScenarioError("evolution time must be non-negative");
    if (t == 0.0)
        return rho0;

    // Dormand-Prince 5(4) coefficients.
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const SparseMatrix& L = gen.matrix;
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), static_cast<long>(d) * d);
    const complexd trace0 = rho0.trace();

    double time = 0.0;
    const double rate = sparse_matvec(L, y).norm() / std::max(y.norm(), 1e-300);
    double h = std::min(t, 0.1 / (rate + 1e-12));
    Eigen::VectorXcd k1 = sparse_matvec(L, y);

    long steps = 0;
    while (time < t) {
        if (++steps > 10'000'000)
            throw SolverError("evolution exceeded the step budget");
        h = std::min(h, t - time);
        if (h < 1e-15 * std::max(t, 1.0))
            throw SolverError("step-size underflow during evolution");

        const Eigen::VectorXcd k2 = sparse_matvec(L, y + h * (a21 * k1));
        const Eigen::VectorXcd k3 = sparse_matvec(L, y + h * (a31 * k1 + a32 * k2));
        const Eigen::VectorXcd k4 = sparse_matvec(L, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Eigen::VectorXcd k5 =
            sparse_matvec(L, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Eigen::VectorXcd k6 =
            sparse_matvec(L, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Eigen::VectorXcd y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Eigen::VectorXcd k7 = sparse_matvec(L, y5);
        const Eigen::VectorXcd err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double norm2 = 0.0;
        for (long i = 0; i < err.size(); ++i) {
            const double scale = tol + tol * std::max(std::abs(y(i)), std::abs(y5(i)));
            const double q = std::abs(err(i)) / scale;
            norm2 += q * q;
        }
        const double err_norm = std::sqrt(norm2 / err.size());

        if (err_norm <= 1.0) {
            time += h;
            y = y5;
            k1 = k7;  // first-same-as-last
        }
        const double factor = (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
    }

    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), d, d);
    if (std::abs(rho.trace() - trace0) > 1e-9)
        throw InvariantError("evolution failed to conserve the trace");
    return rho;
}

}  // namespace ddcool
