#pragma once

#include "sbdc/center.hpp"
#include "sbdc/idempotent.hpp"
#include "sbdc/transform.hpp"
#include "sbdc/types.hpp"

#include <memory>
#include <optional>

namespace sbdc {

/// Recursion tree of the block-diagonalization. Leaves carry the evidence
/// for why no further split was made; split nodes carry the local transform.
struct DecompositionNode {
    int depth = 0;
    int size = 0;
    int center_dim = 0;
    int restricted_dim = 0;
    int tries = 0;
    bool leaf = true;
    SplitEvidence evidence = SplitEvidence::BudgetExhausted;
    std::optional<TransformStep> step;
    std::unique_ptr<DecompositionNode> left;
    std::unique_ptr<DecompositionNode> right;
};

struct DecompositionResiduals {
    double max_off_block = 0.0;
    double max_symmetry = 0.0;
    double max_idempotency = 0.0;
    double max_membership = 0.0;
    /// ||P^* P - I||_F; only meaningful in orthogonal/unitary modes.
    std::optional<double> transform_orthogonality;
};

struct Decomposition {
    Matrix p_global;
    std::vector<int> block_sizes; ///< tree order
    /// blocks[i][j] = j-th diagonal block of the transformed A_i
    std::vector<std::vector<Matrix>> blocks;
    DecompositionNode tree;
    Mode mode = Mode::Congruence;
    DecompositionResiduals residuals;
    /// true iff every leaf carries the DimOne certificate; all other leaf
    /// evidence is probabilistic and reported as such
    bool certified_finest = false;

    std::vector<int> sorted_block_sizes() const;
};

/// Runs the recursive block diagonalization for the requested mode. Child
/// seeds derive deterministically from cfg.seed and the tree path, so the
/// whole tree is reproducible from one seed.
Decomposition decompose(const MatrixSet& set, Mode mode, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerificationCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_passed() const;
};

/// Everything verification needs, reconstructible from a serialized report.
struct VerifyInput {
    Matrix p_global;
    Mode mode = Mode::Congruence;
    std::vector<int> block_sizes;                 ///< tree order
    std::vector<int> declared_sorted_block_sizes; ///< as reported
    std::vector<std::vector<Matrix>> blocks;
    std::vector<int> tree_leaf_sizes; ///< leaf sizes in tree order
};

/// Recomputes op(P) A_i P from scratch and checks off-block residual,
/// transform conditioning, orthogonality/unitarity where applicable,
/// per-block symmetry, declared block values, and the declared-vs-tree
/// block-size cross-check. Failures are reported, never thrown.
VerificationReport verify(const VerifyInput& input, const MatrixSet& original,
                          const SolverConfig& cfg);
VerificationReport verify(const Decomposition& dec, const MatrixSet& original,
                          const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Commutation precheck (necessary condition for full unitary diagonalization)
// ---------------------------------------------------------------------------

struct CommutationResult {
    bool commute = true;
    double max_commutator_norm = 0.0; ///< max ||A_iA_j - A_jA_i|| / (||A_i|| ||A_j||)
};

CommutationResult commutation_check(const MatrixSet& set, const SolverConfig& cfg = {});

} // namespace sbdc
