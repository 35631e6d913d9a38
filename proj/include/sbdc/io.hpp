#pragma once

#include "sbdc/driver.hpp"
#include "sbdc/types.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbdc {

struct SchemaError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column);
    int line = 0;
    int column = 0;
};
struct NonQuadraticTerm : ParseError { using ParseError::ParseError; };
struct UnknownVariable : ParseError { using ParseError::ParseError; };

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// MatrixSetDocument (schema version "1")
//
// {
//   "schema_version": "1",
//   "field": "real" | "complex",
//   "kind": "symmetric" | "hermitian",
//   "n": 3, "m": 2,
//   "matrices": [[[row], [row], ...], ...]
// }
// Entries are numbers or [re, im] pairs; rows are row-major.
// ---------------------------------------------------------------------------

MatrixSet matrix_set_from_json(const Json& doc);
Json matrix_set_to_json(const MatrixSet& set);
MatrixSet load_matrix_set(const std::string& path);
void save_matrix_set(const MatrixSet& set, const std::string& path);

// ---------------------------------------------------------------------------
// Quadratic forms
// ---------------------------------------------------------------------------

/// Parses one homogeneous quadratic form per nonblank line (operators + - *,
/// ^ powers, parentheses; variables x1..xn unless names are given) into a
/// real symmetric MatrixSet with A[j][j] the x_j^2 coefficient and
/// A[j][k] = A[k][j] half the x_j x_k coefficient.
MatrixSet parse_quadratic_forms(const std::string& text,
                                const std::optional<std::vector<std::string>>& variables = {});

/// Prints the form x^T A x as a polynomial that parses back to the same
/// matrix (17 significant digits).
std::string quadratic_form_to_string(const Matrix& a, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// DecompositionReport (schema version "1")
// ---------------------------------------------------------------------------

struct ReportNode {
    int size = 0;
    int depth = 0;
    int center_dim = 0;
    int restricted_dim = 0;
    int tries = 0;
    bool leaf = true;
    std::string evidence; // leaves only
    std::pair<int, int> split_sizes{0, 0};
    std::vector<ReportNode> children;
};

struct DecompositionReport {
    std::string schema_version = "1";
    Mode mode = Mode::Congruence;
    SymmetryKind kind = SymmetryKind::Symmetric;
    Field field = Field::Real;
    std::uint64_t seed = 0;
    SolverConfig config;
    int n = 0;
    int m = 0;
    std::vector<int> block_sizes_tree;
    std::vector<int> block_sizes_sorted;
    Matrix p_global;
    std::vector<std::vector<Matrix>> blocks;
    DecompositionResiduals residuals;
    bool certified_finest = false;
    ReportNode tree;
    /// shown in the text rendering only; the serialized report stays
    /// byte-identical across reruns
    double wall_time_ms = 0.0;
};

DecompositionReport make_report(const Decomposition& dec, const MatrixSet& set,
                                const SolverConfig& cfg, double wall_time_ms);
Json report_to_json(const DecompositionReport& report);
DecompositionReport report_from_json(const Json& j);
std::string report_to_text(const DecompositionReport& report);
void save_report(const DecompositionReport& report, const std::string& path);
DecompositionReport load_report(const std::string& path);

/// Verification entry point for serialized reports (used by the CLI).
VerificationReport verify_report(const DecompositionReport& report, const MatrixSet& original);

} // namespace sbdc
