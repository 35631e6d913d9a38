#include "sbdc/center.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace sbdc {

namespace {

// Unknown ordering follows column-major vectorization: X[k,l] -> k + l*n,
// with the imaginary block offset by n^2 in the realified Hermitian system.

RealMatrix symmetric_operator_real(const MatrixSet& set) {
    const int n = set.n();
    const int rows_per = n * (n - 1) / 2;
    RealMatrix op = RealMatrix::Zero(static_cast<Eigen::Index>(set.m()) * rows_per, n * n);
    Eigen::Index row = 0;
    for (const Matrix& ac : set.matrices) {
        const RealMatrix a = ac.real();
        for (int r = 0; r < n; ++r) {
            for (int c = r + 1; c < n; ++c) {
                // (A X)[r,c] - (A X)[c,r] = 0
                for (int k = 0; k < n; ++k) {
                    op(row, k + c * n) += a(r, k);
                    op(row, k + r * n) -= a(c, k);
                }
                ++row;
            }
        }
    }
    return op;
}

Matrix symmetric_operator_complex(const MatrixSet& set) {
    const int n = set.n();
    const int rows_per = n * (n - 1) / 2;
    Matrix op = Matrix::Zero(static_cast<Eigen::Index>(set.m()) * rows_per, n * n);
    Eigen::Index row = 0;
    for (const Matrix& a : set.matrices) {
        for (int r = 0; r < n; ++r) {
            for (int c = r + 1; c < n; ++c) {
                for (int k = 0; k < n; ++k) {
                    op(row, k + c * n) += a(r, k);
                    op(row, k + r * n) -= a(c, k);
                }
                ++row;
            }
        }
    }
    return op;
}

// Hermitian constraint A X = (A X)^*, realified over X = U + iV. The defect
// A X - X^* A is skew-Hermitian, so the independent rows are the strict upper
// triangle of its real part and the upper triangle (with diagonal) of its
// imaginary part.
RealMatrix hermitian_operator_realified(const MatrixSet& set) {
    const int n = set.n();
    const int nn = n * n;
    const int rows_per = n * n; // n(n-1)/2 + n(n+1)/2
    RealMatrix op = RealMatrix::Zero(static_cast<Eigen::Index>(set.m()) * rows_per, 2 * nn);
    Eigen::Index row = 0;
    for (const Matrix& ac : set.matrices) {
        const RealMatrix b = ac.real();
        const RealMatrix c = ac.imag();
        for (int r = 0; r < n; ++r) {
            for (int col = r + 1; col < n; ++col) {
                // Re(A X - X^* A)[r,col] = (B U - C V - U^T B - V^T C)[r,col]
                for (int k = 0; k < n; ++k) {
                    op(row, k + col * n) += b(r, k);
                    op(row, nn + k + col * n) -= c(r, k);
                    op(row, k + r * n) -= b(k, col);
                    op(row, nn + k + r * n) -= c(k, col);
                }
                ++row;
            }
        }
        for (int r = 0; r < n; ++r) {
            for (int col = r; col < n; ++col) {
                // Im(A X - X^* A)[r,col] = (B V + C U - U^T C + V^T B)[r,col]
                for (int k = 0; k < n; ++k) {
                    op(row, nn + k + col * n) += b(r, k);
                    op(row, k + col * n) += c(r, k);
                    op(row, k + r * n) -= c(k, col);
                    op(row, nn + k + r * n) += b(k, col);
                }
                ++row;
            }
        }
    }
    return op;
}

template <typename Mat>
Mat nullspace_basis(const Mat& op, double tol_rank) {
    if (op.rows() == 0)
        return Mat::Identity(op.cols(), op.cols());
    Eigen::JacobiSVD<Mat> svd(op, Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success)
        throw NumericalBreakdown("SVD of the center operator failed");
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol_rank * smax)
            ++rank;
    return svd.matrixV().rightCols(op.cols() - rank);
}

CenterBasis make_basis(int n, Field coeff_field, const std::vector<Matrix>& mats) {
    CenterBasis cb;
    cb.n = n;
    cb.coeff_field = coeff_field;
    cb.basis = mats;
    cb.vector_form.resize(n * n, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t j = 0; j < mats.size(); ++j)
        cb.vector_form.col(static_cast<Eigen::Index>(j)) = vectorize(mats[j]);
    return cb;
}

} // namespace

CenterBasis center_basis(const MatrixSet& set, const SolverConfig& cfg) {
    const int n = set.n();
    if (n == 0)
        throw EmptySet("cannot compute the center of an empty set");
    const int nn = n * n;

    std::vector<Matrix> mats;
    Field coeff_field;
    if (set.kind == SymmetryKind::Symmetric && set.field == Field::Complex) {
        coeff_field = Field::Complex;
        const Matrix ns = nullspace_basis(symmetric_operator_complex(set), cfg.tol_rank);
        mats.reserve(static_cast<std::size_t>(ns.cols()));
        for (Eigen::Index j = 0; j < ns.cols(); ++j)
            mats.push_back(unvectorize(ns.col(j), n));
    } else if (set.kind == SymmetryKind::Symmetric) {
        coeff_field = Field::Real;
        const RealMatrix ns = nullspace_basis(symmetric_operator_real(set), cfg.tol_rank);
        mats.reserve(static_cast<std::size_t>(ns.cols()));
        for (Eigen::Index j = 0; j < ns.cols(); ++j)
            mats.push_back(unvectorize(ns.col(j).cast<Scalar>(), n));
    } else {
        coeff_field = Field::Real;
        const RealMatrix ns = nullspace_basis(hermitian_operator_realified(set), cfg.tol_rank);
        mats.reserve(static_cast<std::size_t>(ns.cols()));
        for (Eigen::Index j = 0; j < ns.cols(); ++j) {
            const Vector u = ns.col(j).head(nn).cast<Scalar>();
            const Vector v = ns.col(j).tail(nn).cast<Scalar>();
            mats.push_back(unvectorize(u, n) + Scalar(0, 1) * unvectorize(v, n));
        }
    }

    CenterBasis cb = make_basis(n, coeff_field, mats);
    if (cb.dim() < 1 || membership_residual(cb, Matrix::Identity(n, n)) > cfg.tol_idem)
        throw NumericalBreakdown("center basis lost the scalar matrices");
    return cb;
}

CenterBasis center_from_span(const std::vector<Matrix>& span, Field coeff_field,
                             const SolverConfig& cfg) {
    if (span.empty())
        throw EmptySet("cannot build a center basis from an empty span");
    const int n = static_cast<int>(span.front().rows());
    const int nn = n * n;

    std::vector<Matrix> mats;
    if (coeff_field == Field::Complex) {
        Matrix cols(nn, static_cast<Eigen::Index>(span.size()));
        for (std::size_t j = 0; j < span.size(); ++j) {
            if (span[j].rows() != n || span[j].cols() != n)
                throw DimensionMismatch("span matrices must share dimensions");
            cols.col(static_cast<Eigen::Index>(j)) = vectorize(span[j]);
        }
        Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            if (sv(j) > cfg.tol_rank * smax)
                mats.push_back(unvectorize(svd.matrixU().col(j), n));
    } else {
        // realified columns keep the span real-linear
        RealMatrix cols(2 * nn, static_cast<Eigen::Index>(span.size()));
        for (std::size_t j = 0; j < span.size(); ++j) {
            if (span[j].rows() != n || span[j].cols() != n)
                throw DimensionMismatch("span matrices must share dimensions");
            cols.col(static_cast<Eigen::Index>(j)).head(nn) =
                vectorize(span[j]).real();
            cols.col(static_cast<Eigen::Index>(j)).tail(nn) =
                vectorize(span[j]).imag();
        }
        Eigen::JacobiSVD<RealMatrix> svd(cols, Eigen::ComputeFullU);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        for (Eigen::Index j = 0; j < sv.size(); ++j) {
            if (sv(j) <= cfg.tol_rank * smax)
                continue;
            const Vector u = svd.matrixU().col(j).head(nn).cast<Scalar>();
            const Vector v = svd.matrixU().col(j).tail(nn).cast<Scalar>();
            mats.push_back(unvectorize(u, n) + Scalar(0, 1) * unvectorize(v, n));
        }
    }
    return make_basis(n, coeff_field, mats);
}

Matrix jordan_product(const Matrix& x, const Matrix& y) {
    if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows())
        throw DimensionMismatch("jordan product requires equal square matrices");
    return (x * y + y * x) / 2.0;
}

Matrix project_to_span(const CenterBasis& cb, const Matrix& x) {
    if (x.rows() != cb.n || x.cols() != cb.n)
        throw DimensionMismatch("membership projection dimension mismatch");
    const Vector vx = vectorize(x);
    if (cb.coeff_field == Field::Complex) {
        const Vector coeff = cb.vector_form.adjoint() * vx;
        return unvectorize(cb.vector_form * coeff, cb.n);
    }
    const RealVector coeff = (cb.vector_form.adjoint() * vx).real();
    return unvectorize(cb.vector_form * coeff.cast<Scalar>(), cb.n);
}

double membership_residual(const CenterBasis& cb, const Matrix& x) {
    const Matrix proj = project_to_span(cb, x);
    return (x - proj).norm() / std::max(1.0, x.norm());
}

double center_defect(const MatrixSet& set, const Matrix& x) {
    double worst = 0.0;
    double scale = 0.0;
    for (const Matrix& a : set.matrices) {
        const Matrix ax = a * x;
        const Matrix defect = set.kind == SymmetryKind::Symmetric
                                  ? Matrix(ax - ax.transpose())
                                  : Matrix(ax - ax.adjoint());
        worst = std::max(worst, defect.norm());
        scale = std::max(scale, a.norm() * x.norm());
    }
    return worst / std::max(1.0, scale);
}

} // namespace sbdc
