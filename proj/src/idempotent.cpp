#include "sbdc/idempotent.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace sbdc {

const char* to_string(SplitEvidence e) {
    switch (e) {
    case SplitEvidence::DimOne: return "dim_one";
    case SplitEvidence::AllSingleCluster: return "all_single_cluster";
    case SplitEvidence::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

SplitOutcome SplitOutcome::none(SplitEvidence e, int tries) {
    SplitOutcome o;
    o.evidence = e;
    o.tries = tries;
    return o;
}

SplitOutcome SplitOutcome::ok(IdempotentPair p, int tries) {
    SplitOutcome o;
    o.pair = std::move(p);
    o.tries = tries;
    return o;
}

CenterBasis restrict_center(const CenterBasis& cb, Mode mode, const SolverConfig& cfg) {
    if (mode == Mode::Congruence || mode == Mode::StarCongruence)
        return cb;
    const bool conj = mode == Mode::UnitaryStarCongruence;
    const int n = cb.n;
    const int dim = cb.dim();

    // Linear constraint on real coefficients c: sum_j c_j (X_j - op(X_j)) = 0.
    std::vector<Matrix> defects;
    defects.reserve(static_cast<std::size_t>(dim));
    for (const Matrix& x : cb.basis)
        defects.push_back(conj ? Matrix(x - x.adjoint()) : Matrix(x - x.transpose()));

    const int pairs = n * (n - 1) / 2;
    const int rows = 2 * pairs + (conj ? n : 0);
    if (rows == 0)
        return cb; // 1x1 transpose case: the constraint is vacuous
    RealMatrix constraint = RealMatrix::Zero(rows, dim);
    for (int j = 0; j < dim; ++j) {
        int row = 0;
        const Matrix& d = defects[static_cast<std::size_t>(j)];
        for (int r = 0; r < n; ++r) {
            for (int c = r + 1; c < n; ++c) {
                constraint(row++, j) = d(r, c).real();
                constraint(row++, j) = d(r, c).imag();
            }
        }
        if (conj)
            for (int r = 0; r < n; ++r)
                constraint(row++, j) = d(r, r).imag(); // diagonal of X - X^* is 2i Im
    }

    Eigen::JacobiSVD<RealMatrix> svd(constraint, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // the basis is orthonormal, so the defect columns are absolutely scaled;
    // an all-symmetric basis must yield the zero constraint
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = cfg.tol_rank * std::max(1.0, smax);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            ++rank;

    std::vector<Matrix> span;
    for (Eigen::Index k = rank; k < dim; ++k) {
        Matrix y = Matrix::Zero(n, n);
        for (int j = 0; j < dim; ++j)
            y += svd.matrixV()(j, k) * cb.basis[static_cast<std::size_t>(j)];
        // clean the constrained part exactly
        y = conj ? Matrix((y + y.adjoint()) / 2.0) : Matrix((y + y.transpose()) / 2.0);
        span.push_back(std::move(y));
    }
    if (span.empty())
        throw NumericalBreakdown("mode restriction lost the scalar matrices");
    return center_from_span(span, Field::Real, cfg);
}

std::optional<IdempotentPair> assemble_pair(const Matrix& eps1, const CenterBasis& cb,
                                            const SolverConfig& cfg) {
    const int n = static_cast<int>(eps1.rows());
    const Matrix id = Matrix::Identity(n, n);
    const Matrix eps2 = id - eps1;

    IdempotentPair pair;
    pair.eps1 = eps1;
    pair.eps2 = eps2;
    pair.idem_residual = (eps1 * eps1 - eps1).norm();
    pair.orth_residual = (eps1 * eps2).norm() + (eps2 * eps1).norm();
    pair.member_residual =
        std::max(membership_residual(cb, eps1), membership_residual(cb, eps2));
    const double sym_res = std::max((eps1 - eps1.adjoint()).norm(), (eps2 - eps2.adjoint()).norm());
    pair.symmetric = sym_res <= cfg.tol_idem;

    const bool nontrivial = eps1.norm() > cfg.tol_idem && (eps1 - id).norm() > cfg.tol_idem;
    if (!nontrivial || pair.idem_residual > cfg.tol_idem || pair.orth_residual > cfg.tol_idem ||
        pair.member_residual > cfg.tol_idem)
        return std::nullopt;
    return pair;
}

SplitOutcome deterministic_scan(const CenterBasis& cb, const SolverConfig& cfg) {
    int tried = 0;
    for (const Matrix& x : cb.basis) {
        ++tried;
        const Matrix x2 = x * x;
        const Scalar t2 = x2.trace();
        const double norm2 = x.squaredNorm();
        Scalar c;
        if (std::abs(t2) > 1e-14 * norm2)
            c = (x2 * x).trace() / t2;
        else
            c = (x.adjoint() * x2).trace() / norm2; // least-squares fit of x^2 ~ c x
        if (std::abs(c) < 1e-10)
            continue;
        if ((x2 - c * x).norm() > cfg.tol_idem * std::abs(c) * std::max(1.0, x.norm()))
            continue;
        if (auto pair = assemble_pair(x / c, cb, cfg))
            return SplitOutcome::ok(std::move(*pair), tried);
    }
    return SplitOutcome::none(SplitEvidence::BudgetExhausted, tried);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int k) : parent(static_cast<std::size_t>(k)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

std::vector<int> cluster_labels(const Vector& eigs, double thr, bool force_conj) {
    const int k = static_cast<int>(eigs.size());
    UnionFind uf(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (std::abs(eigs(i) - eigs(j)) <= thr)
                uf.unite(i, j);
    if (force_conj) {
        for (int i = 0; i < k; ++i) {
            int best = i;
            double dist = std::abs(eigs(i) - std::conj(eigs(i)));
            for (int j = 0; j < k; ++j) {
                const double d = std::abs(eigs(j) - std::conj(eigs(i)));
                if (d < dist) {
                    dist = d;
                    best = j;
                }
            }
            uf.unite(i, best);
        }
    }
    std::vector<int> labels(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        labels[static_cast<std::size_t>(i)] = uf.find(i);
    return labels;
}

bool smaller_eig(const Scalar& a, const Scalar& b) {
    if (a.real() != b.real())
        return a.real() < b.real();
    return a.imag() < b.imag();
}

// Swaps the 1x1 diagonal blocks at positions k, k+1 of a complex Schur form
// by a unitary similarity; Q is updated accordingly.
void swap_schur_diagonal(Matrix& t, Matrix& q, int k) {
    const Scalar t11 = t(k, k);
    const Scalar t12 = t(k, k + 1);
    const Scalar t22 = t(k + 1, k + 1);
    const Scalar x1 = t12;
    const Scalar x2 = t22 - t11;
    const double r = std::sqrt(std::norm(x1) + std::norm(x2));
    if (r < 1e-300)
        throw NumericalBreakdown("degenerate Schur swap between separated clusters");
    Eigen::Matrix2cd g;
    g << x1 / r, -std::conj(x2) / r, x2 / r, std::conj(x1) / r;
    t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
    t.middleCols(k, 2) = t.middleCols(k, 2) * g;
    q.middleCols(k, 2) = q.middleCols(k, 2) * g;
    t(k + 1, k) = Scalar(0, 0);
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
}

} // namespace

SplitOutcome spectral_split(const Matrix& x, const CenterBasis& cb, const SolverConfig& cfg) {
    const int n = static_cast<int>(x.rows());
    if (x.cols() != n || n != cb.n)
        throw DimensionMismatch("spectral_split input must be square and match the center");
    if (n == 1)
        return SplitOutcome::none(SplitEvidence::AllSingleCluster, 1);

    Eigen::ComplexSchur<Matrix> schur(x, true);
    if (schur.info() != Eigen::Success)
        throw NumericalBreakdown("Schur decomposition failed");
    Matrix t = schur.matrixT();
    Matrix q = schur.matrixU();
    const Vector eigs = t.diagonal();

    const double scale = eigs.cwiseAbs().maxCoeff();
    if (scale < 1e-300)
        return SplitOutcome::none(SplitEvidence::AllSingleCluster, 1);

    const bool x_real = x.imag().norm() <= 1e-13 * std::max(1.0, x.norm());
    const bool force_conj = cb.coeff_field == Field::Real || x_real;

    const std::vector<int> hi = cluster_labels(eigs, cfg.cluster_gap * scale, force_conj);
    const std::vector<int> lo = cluster_labels(eigs, cfg.cluster_gap / 10.0 * scale, force_conj);
    if (hi != lo)
        throw ClusterAmbiguity("eigenvalue gaps inside the (cluster_gap/10, cluster_gap) band");

    const int cluster_count =
        static_cast<int>(std::set<int>(hi.begin(), hi.end()).size());
    if (cluster_count <= 1)
        return SplitOutcome::none(SplitEvidence::AllSingleCluster, 1);

    // target cluster: the one containing the smallest eigenvalue (Re, then Im)
    int smallest = 0;
    for (int i = 1; i < n; ++i)
        if (smaller_eig(eigs(i), eigs(smallest)))
            smallest = i;
    const int target = hi[static_cast<std::size_t>(smallest)];

    std::vector<char> member(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        member[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)] == target;

    // bubble the target cluster to the leading positions
    bool moved = true;
    while (moved) {
        moved = false;
        for (int k = 0; k + 1 < n; ++k) {
            if (!member[static_cast<std::size_t>(k)] && member[static_cast<std::size_t>(k + 1)]) {
                swap_schur_diagonal(t, q, k);
                std::swap(member[static_cast<std::size_t>(k)],
                          member[static_cast<std::size_t>(k + 1)]);
                moved = true;
            }
        }
    }
    const int p = static_cast<int>(std::count(member.begin(), member.end(), char(1)));

    // Sylvester equation T11 R - R T22 = T12 over the triangular blocks
    const Matrix t11 = t.topLeftCorner(p, p);
    const Matrix t22 = t.bottomRightCorner(n - p, n - p);
    const Matrix t12 = t.topRightCorner(p, n - p);
    Matrix rmat = Matrix::Zero(p, n - p);
    for (int i = p - 1; i >= 0; --i) {
        for (int j = 0; j < n - p; ++j) {
            Scalar rhs = t12(i, j);
            for (int k = i + 1; k < p; ++k)
                rhs -= t11(i, k) * rmat(k, j);
            for (int k = 0; k < j; ++k)
                rhs += rmat(i, k) * t22(k, j);
            const Scalar denom = t11(i, i) - t22(j, j);
            if (std::abs(denom) < 1e-300)
                throw NumericalBreakdown("coincident eigenvalues across separated clusters");
            rmat(i, j) = rhs / denom;
        }
    }

    Matrix core = Matrix::Zero(n, n);
    core.topLeftCorner(p, p) = Matrix::Identity(p, p);
    core.topRightCorner(p, n - p) = rmat;
    Matrix proj = q * core * q.adjoint();
    if (x_real)
        proj.imag().setZero();

    if (auto pair = assemble_pair(proj, cb, cfg))
        return SplitOutcome::ok(std::move(*pair), 1);
    return SplitOutcome::none(SplitEvidence::BudgetExhausted, 1);
}

SplitOutcome find_split(const CenterBasis& cb, Mode mode, const SolverConfig& cfg) {
    const CenterBasis rcb = restrict_center(cb, mode, cfg);
    const bool need_symmetric =
        mode == Mode::OrthogonalCongruence || mode == Mode::UnitaryStarCongruence;

    if (rcb.dim() == 1) {
        SplitOutcome o = SplitOutcome::none(SplitEvidence::DimOne, 0);
        o.restricted_dim = 1;
        return o;
    }

    SplitOutcome scan = deterministic_scan(rcb, cfg);
    if (scan.found() && (!need_symmetric || scan.pair->symmetric)) {
        scan.restricted_dim = rcb.dim();
        return scan;
    }

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    int ambiguous = 0;
    int single = 0;
    for (int attempt = 1; attempt <= cfg.max_tries; ++attempt) {
        Matrix y = Matrix::Zero(rcb.n, rcb.n);
        for (const Matrix& b : rcb.basis) {
            const double re = normal(rng);
            const double im = rcb.coeff_field == Field::Complex ? normal(rng) : 0.0;
            y += Scalar(re, im) * b;
        }
        try {
            SplitOutcome o = spectral_split(y, rcb, cfg);
            if (o.found() && (!need_symmetric || o.pair->symmetric)) {
                o.tries = attempt;
                o.restricted_dim = rcb.dim();
                return o;
            }
            if (o.evidence == SplitEvidence::AllSingleCluster)
                ++single;
        } catch (const ClusterAmbiguity&) {
            ++ambiguous;
        }
    }
    if (ambiguous == cfg.max_tries)
        throw ClusterAmbiguity("all split attempts hit the ambiguity band");
    SplitOutcome o = SplitOutcome::none(single == cfg.max_tries ? SplitEvidence::AllSingleCluster
                                                                : SplitEvidence::BudgetExhausted,
                                        cfg.max_tries);
    o.restricted_dim = rcb.dim();
    return o;
}

} // namespace sbdc
