#pragma once

#include "sbdc/idempotent.hpp"
#include "sbdc/types.hpp"

#include <utility>

namespace sbdc {

/// One congruence step: P diagonalizes the idempotent pair into
/// diag(I_{n1}, 0) / diag(0, I_{n2}) and is orthogonal/unitary in the
/// restricted modes.
struct TransformStep {
    Matrix p;
    std::pair<int, int> sizes{0, 0};
    Mode mode = Mode::Congruence;
    double off_block_residual = 0.0; ///< filled once the blocks are sliced
    double projector_residual = 0.0; ///< ||P^{-1} eps1 P - diag(I,0)||_F
    double unitarity_residual = 0.0; ///< ||P^* P - I||_F (restricted modes)
};

/// Builds P from orthonormal range bases of eps1 and eps2 (column-pivoted QR,
/// rank at tol_rank). n1 = rank(eps1) must agree with round(tr(eps1)); the
/// general-mode P gets a condition guard, the restricted-mode P a unitarity
/// check.
TransformStep build_transform(const IdempotentPair& pair, Mode mode, const SolverConfig& cfg);

/// {P^T A_i P} for symmetric sets, {P^* A_i P} for Hermitian ones. The output
/// keeps the input kind (re-symmetrized within tol_sym).
MatrixSet apply_congruence(const Matrix& p, const MatrixSet& set, Mode mode,
                           const SolverConfig& cfg);

struct BlockSplit {
    MatrixSet first;
    MatrixSet second;
    double off_block_residual = 0.0; ///< max_i ||off blocks||_F / ||A_i||_F
};

/// Slices each transformed matrix into its two diagonal blocks; throws
/// BlockResidualExceeded when the normalized off-block mass is above
/// tol_block.
BlockSplit extract_blocks(const MatrixSet& set, std::pair<int, int> sizes,
                          const SolverConfig& cfg);

} // namespace sbdc
