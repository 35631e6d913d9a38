#pragma once

#include "sbdc/center.hpp"
#include "sbdc/types.hpp"

#include <optional>

namespace sbdc {

/// A complementary idempotent pair from the center: eps2 = I - eps1 by
/// construction, both idempotent, mutually annihilating, and inside the
/// (mode-restricted) span within tol_idem.
struct IdempotentPair {
    Matrix eps1;
    Matrix eps2;
    double idem_residual = 0.0;   ///< ||eps1^2 - eps1||_F (= the eps2 defect)
    double orth_residual = 0.0;   ///< ||eps1 eps2||_F + ||eps2 eps1||_F
    double member_residual = 0.0; ///< worst span-membership residual
    bool symmetric = false;       ///< eps_k^* = eps_k within tol_idem
};

enum class SplitEvidence {
    DimOne,           ///< restricted center is the scalars; certified leaf
    AllSingleCluster, ///< every sampled element had one eigenvalue cluster
    BudgetExhausted,  ///< tries ran out; probabilistic evidence only
};

const char* to_string(SplitEvidence e);

struct SplitOutcome {
    std::optional<IdempotentPair> pair;
    int tries = 0;
    SplitEvidence evidence = SplitEvidence::BudgetExhausted;
    int restricted_dim = 0; ///< dim of the mode-restricted center (find_split)

    bool found() const { return pair.has_value(); }

    static SplitOutcome none(SplitEvidence e, int tries);
    static SplitOutcome ok(IdempotentPair p, int tries);
};

/// Congruence/StarCongruence pass the center through; OrthogonalCongruence
/// keeps the symmetric elements, UnitaryStarCongruence the Hermitian ones
/// (a real subspace either way, and never empty: it contains the scalars).
CenterBasis restrict_center(const CenterBasis& cb, Mode mode, const SolverConfig& cfg);

/// Fast path: for each basis element X, tests X^2 = cX (c from tr(X^3)/tr(X^2)
/// with a least-squares fallback) and normalizes X/c into an idempotent when
/// that holds. Never certifies absence.
SplitOutcome deterministic_scan(const CenterBasis& cb, const SolverConfig& cfg);

/// Eigenvalue clustering of a center element X and the spectral projector
/// onto the cluster of its smallest eigenvalue, computed from a reordered
/// Schur form. Clusters are forced conjugate-closed whenever the coefficient
/// field is real (real-coefficient spans only admit real-coefficient
/// polynomial projectors). Throws ClusterAmbiguity when the partition is
/// unstable between relative gaps cluster_gap/10 and cluster_gap.
SplitOutcome spectral_split(const Matrix& x, const CenterBasis& cb, const SolverConfig& cfg);

/// Full pipeline: restrict for the mode, certify DimOne, scan, then up to
/// max_tries random center elements through spectral_split. Deterministic
/// for a fixed cfg.seed.
SplitOutcome find_split(const CenterBasis& cb, Mode mode, const SolverConfig& cfg);

/// Builds a checked pair from a candidate idempotent, or nullopt if any
/// residual or the nontriviality test fails.
std::optional<IdempotentPair> assemble_pair(const Matrix& eps1, const CenterBasis& cb,
                                            const SolverConfig& cfg);

} // namespace sbdc
