#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbdc {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Ground field of the coefficients. Real mode is a constraint flag;
/// storage is always complex.
enum class Field { Real, Complex };

enum class SymmetryKind { Symmetric, Hermitian };

/// Transformation class: A -> P^T A P for the first two, A -> P^* A P for
/// the Hermitian ones.
enum class Mode { Congruence, OrthogonalCongruence, StarCongruence, UnitaryStarCongruence };

const char* to_string(Field f);
const char* to_string(SymmetryKind k);
const char* to_string(Mode m);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct SymmetryViolation : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct ModeMismatch : Error { using Error::Error; };

struct NumericalBreakdown : Error { using Error::Error; };
struct ClusterAmbiguity : Error { using Error::Error; };
struct RankTraceMismatch : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct BlockResidualExceeded : Error { using Error::Error; };
struct DepthExceeded : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SolverConfig {
    double tol_sym = 1e-10;    ///< input symmetry residual bound (relative)
    double tol_rank = 1e-10;   ///< relative singular-value cutoff for rank decisions
    double tol_idem = 1e-8;    ///< idempotency / membership residual bound
    double tol_block = 1e-8;   ///< normalized off-block residual bound
    double cluster_gap = 1e-6; ///< relative eigenvalue-gap threshold
    int max_tries = 8;         ///< randomized split attempts per node
    std::uint64_t seed = 0;
    int max_depth = 0;         ///< recursion bound; 0 means "use n"

    /// Effective recursion bound for an n-dimensional problem.
    int depth_limit(int n) const { return max_depth > 0 ? max_depth : n; }

    /// Throws InvalidConfig on nonpositive tolerances or budgets.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Matrix set
// ---------------------------------------------------------------------------

/// The input family A_1..A_m, all n x n, sharing one symmetry kind and field.
struct MatrixSet {
    std::vector<Matrix> matrices;
    SymmetryKind kind = SymmetryKind::Symmetric;
    Field field = Field::Real;
    double symmetry_residual = 0.0; ///< recorded by validate_matrix_set

    int n() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
    int m() const { return static_cast<int>(matrices.size()); }
};

/// Relative deviation of A from its kind: ||A - op(A)||_F / max(1, ||A||_F),
/// where op is transpose or conjugate transpose.
double symmetry_deviation(const Matrix& a, SymmetryKind kind);

/// Checks dimensions and symmetry, symmetrizes entries within tol_sym, and
/// records the worst residual. Idempotent on already-validated sets.
MatrixSet validate_matrix_set(const MatrixSet& set, const SolverConfig& cfg);

/// Throws ModeMismatch unless the mode is allowed for the set's kind/field.
void check_mode_compatibility(const MatrixSet& set, Mode mode);

// ---------------------------------------------------------------------------
// Small helpers shared across modules
// ---------------------------------------------------------------------------

inline double frobenius(const Matrix& a) { return a.norm(); }

/// Column-major vectorization of an n x n matrix.
Vector vectorize(const Matrix& a);

/// Inverse of vectorize for square matrices.
Matrix unvectorize(const Vector& v, int n);

/// Deterministic seed mix for deriving child seeds from (seed, tree path).
std::uint64_t mix_seed(std::uint64_t seed, const std::string& path);

} // namespace sbdc
