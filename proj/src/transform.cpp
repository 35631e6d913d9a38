#include "sbdc/transform.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace sbdc {

namespace {

// Orthonormal basis of range(eps) for a numerical projector; rank decided by
// column-pivoted QR at tol_rank.
Matrix range_basis(const Matrix& eps, double tol_rank, int expected_rank) {
    Eigen::ColPivHouseholderQR<Matrix> qr(eps);
    qr.setThreshold(tol_rank);
    const int rank = static_cast<int>(qr.rank());
    if (std::abs(static_cast<double>(rank) - static_cast<double>(expected_rank)) > 0.5) {
        std::ostringstream msg;
        msg << "rank(eps) = " << rank << " disagrees with trace " << expected_rank;
        throw RankTraceMismatch(msg.str());
    }
    Matrix qfull = qr.householderQ();
    return qfull.leftCols(rank);
}

} // namespace

TransformStep build_transform(const IdempotentPair& pair, Mode mode, const SolverConfig& cfg) {
    const int n = static_cast<int>(pair.eps1.rows());
    const double tr1 = pair.eps1.trace().real();
    const double tr2 = pair.eps2.trace().real();
    const int n1 = static_cast<int>(std::lround(tr1));
    const int n2 = static_cast<int>(std::lround(tr2));
    if (std::abs(tr1 - n1) > 0.5 || std::abs(tr2 - n2) > 0.5 || n1 + n2 != n || n1 < 1 || n2 < 1)
        throw RankTraceMismatch("idempotent traces do not describe a proper split");

    TransformStep step;
    step.mode = mode;
    step.sizes = {n1, n2};
    step.p.resize(n, n);
    step.p.leftCols(n1) = range_basis(pair.eps1, cfg.tol_rank, n1);
    step.p.rightCols(n2) = range_basis(pair.eps2, cfg.tol_rank, n2);

    const bool real_mode = mode == Mode::Congruence || mode == Mode::OrthogonalCongruence;
    if (real_mode && step.p.imag().norm() <= 1e-12 * std::max(1.0, step.p.norm()))
        step.p.imag().setZero();

    if (mode == Mode::OrthogonalCongruence || mode == Mode::UnitaryStarCongruence) {
        step.unitarity_residual =
            (step.p.adjoint() * step.p - Matrix::Identity(n, n)).norm();
        if (step.unitarity_residual > cfg.tol_idem)
            throw NumericalBreakdown(
                "idempotent ranges are not orthogonal; the pair is not symmetric enough");
    } else {
        Eigen::JacobiSVD<Matrix> svd(step.p);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (smin <= 0 || smax / smin > 1.0 / cfg.tol_rank)
            throw IllConditioned("transform matrix condition number exceeds 1/tol_rank");
    }

    Matrix e1_diag = step.p.partialPivLu().solve(pair.eps1 * step.p);
    Matrix target = Matrix::Zero(n, n);
    target.topLeftCorner(n1, n1) = Matrix::Identity(n1, n1);
    step.projector_residual = (e1_diag - target).norm();
    return step;
}

MatrixSet apply_congruence(const Matrix& p, const MatrixSet& set, Mode mode,
                           const SolverConfig& cfg) {
    const int n = set.n();
    if (p.rows() != n || p.cols() != n)
        throw DimensionMismatch("transform dimension does not match the set");

    const bool star = mode == Mode::StarCongruence || mode == Mode::UnitaryStarCongruence;
    if (star != (set.kind == SymmetryKind::Hermitian))
        throw ModeMismatch("congruence flavor does not match the symmetry kind");

    MatrixSet out;
    out.kind = set.kind;
    out.field = set.field;
    const bool p_complex = p.imag().norm() > 1e-13 * std::max(1.0, p.norm());
    if (p_complex && out.field == Field::Real)
        out.field = Field::Complex;
    out.matrices.reserve(set.matrices.size());
    for (const Matrix& a : set.matrices) {
        const Matrix b = star ? Matrix(p.adjoint() * a * p) : Matrix(p.transpose() * a * p);
        out.matrices.push_back(b);
    }
    return validate_matrix_set(out, cfg);
}

BlockSplit extract_blocks(const MatrixSet& set, std::pair<int, int> sizes,
                          const SolverConfig& cfg) {
    const int n = set.n();
    const int n1 = sizes.first;
    const int n2 = sizes.second;
    if (n1 + n2 != n || n1 < 1 || n2 < 1)
        throw DimensionMismatch("block sizes must be positive and sum to n");

    BlockSplit split;
    split.first.kind = split.second.kind = set.kind;
    split.first.field = split.second.field = set.field;
    double worst = 0.0;
    for (const Matrix& b : set.matrices) {
        split.first.matrices.push_back(b.topLeftCorner(n1, n1));
        split.second.matrices.push_back(b.bottomRightCorner(n2, n2));
        const double off =
            std::sqrt(b.topRightCorner(n1, n2).squaredNorm() + b.bottomLeftCorner(n2, n1).squaredNorm());
        worst = std::max(worst, off / std::max(1e-30, b.norm()));
    }
    split.off_block_residual = worst;
    if (worst > cfg.tol_block) {
        std::ostringstream msg;
        msg << "off-block residual " << worst << " exceeds tol_block " << cfg.tol_block;
        throw BlockResidualExceeded(msg.str());
    }
    return split;
}

} // namespace sbdc
