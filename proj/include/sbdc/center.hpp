#pragma once

#include "sbdc/types.hpp"

namespace sbdc {

/// Basis of the center Z(A_1..A_m) = {X : A_i X equals its (conjugate)
/// transpose for all i}, orthonormal under Re tr(X^* Y).
///
/// The coefficient field is Real except for complex symmetric input under
/// plain congruence; Hermitian centers are real vector spaces. Every other
/// module inherits this rule through the stored flag.
struct CenterBasis {
    int n = 0;
    Field coeff_field = Field::Real;
    std::vector<Matrix> basis;
    /// Columns are vectorize(basis[j]); orthonormal over coeff_field.
    Matrix vector_form;

    int dim() const { return static_cast<int>(basis.size()); }
};

/// Solves the stacked linear system for the center and returns an
/// orthonormalized nullspace basis. Rank is cut at tol_rank relative to the
/// largest singular value. Only the independent rows are stacked: the strict
/// upper triangle of A_iX - (A_iX)^T, plus the diagonal imaginary parts in
/// the Hermitian case.
CenterBasis center_basis(const MatrixSet& set, const SolverConfig& cfg);

/// Builds a CenterBasis from explicitly given span matrices (orthonormalizing
/// them). Used for mode restriction and by tests that start from a known
/// basis; coefficients are interpreted over `coeff_field`.
CenterBasis center_from_span(const std::vector<Matrix>& span, Field coeff_field,
                             const SolverConfig& cfg);

/// X (.) Y = (XY + YX)/2.
Matrix jordan_product(const Matrix& x, const Matrix& y);

/// ||X - proj_span(X)||_F / max(1, ||X||_F), projecting over cb.coeff_field.
double membership_residual(const CenterBasis& cb, const Matrix& x);

/// The projection itself (over cb.coeff_field).
Matrix project_to_span(const CenterBasis& cb, const Matrix& x);

/// max_i ||A_i X - op(A_i X)||_F / scale with scale = max_i ||A_i||_F ||X||_F;
/// zero for genuine center elements. Diagnostic used by tests and reports.
double center_defect(const MatrixSet& set, const Matrix& x);

} // namespace sbdc
