#include "sbdc/types.hpp"

#include <cmath>
#include <sstream>

namespace sbdc {

const char* to_string(Field f) {
    return f == Field::Real ? "real" : "complex";
}

const char* to_string(SymmetryKind k) {
    return k == SymmetryKind::Symmetric ? "symmetric" : "hermitian";
}

const char* to_string(Mode m) {
    switch (m) {
    case Mode::Congruence: return "congruence";
    case Mode::OrthogonalCongruence: return "orthogonal";
    case Mode::StarCongruence: return "star";
    case Mode::UnitaryStarCongruence: return "unitary";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (tol_sym <= 0 || tol_rank <= 0 || tol_idem <= 0 || tol_block <= 0 || cluster_gap <= 0)
        throw InvalidConfig("all tolerances must be strictly positive");
    if (max_tries < 1)
        throw InvalidConfig("max_tries must be >= 1");
    if (max_depth < 0)
        throw InvalidConfig("max_depth must be >= 1 (or 0 for the dimension default)");
}

double symmetry_deviation(const Matrix& a, SymmetryKind kind) {
    const Matrix at = kind == SymmetryKind::Symmetric ? a.transpose().eval() : a.adjoint().eval();
    return (a - at).norm() / std::max(1.0, a.norm());
}

MatrixSet validate_matrix_set(const MatrixSet& set, const SolverConfig& cfg) {
    cfg.validate();
    if (set.m() == 0)
        throw EmptySet("matrix set is empty");
    const int n = set.n();
    if (n == 0)
        throw DimensionMismatch("matrices must be nonempty");

    MatrixSet out = set;
    double worst = 0.0;
    for (int i = 0; i < out.m(); ++i) {
        Matrix& a = out.matrices[static_cast<std::size_t>(i)];
        if (a.rows() != n || a.cols() != n) {
            std::ostringstream msg;
            msg << "matrix " << i << " is " << a.rows() << "x" << a.cols()
                << ", expected " << n << "x" << n;
            throw DimensionMismatch(msg.str());
        }
        if (!a.allFinite())
            throw SymmetryViolation("matrix entries must be finite");
        const double dev = symmetry_deviation(a, set.kind);
        if (dev > cfg.tol_sym) {
            std::ostringstream msg;
            msg << "matrix " << i << " violates " << to_string(set.kind)
                << " symmetry: residual " << dev << " > tol_sym " << cfg.tol_sym;
            throw SymmetryViolation(msg.str());
        }
        worst = std::max(worst, dev);
        if (set.kind == SymmetryKind::Symmetric)
            a = ((a + a.transpose().eval()) / 2.0).eval();
        else
            a = ((a + a.adjoint().eval()) / 2.0).eval();
        if (set.field == Field::Real) {
            if (a.imag().norm() > cfg.tol_sym * std::max(1.0, a.norm()))
                throw SymmetryViolation("real-field matrix has nonreal entries");
            a.imag().setZero();
        }
    }
    out.symmetry_residual = worst;
    return out;
}

void check_mode_compatibility(const MatrixSet& set, Mode mode) {
    switch (mode) {
    case Mode::Congruence:
        if (set.kind != SymmetryKind::Symmetric)
            throw ModeMismatch("congruence mode requires symmetric input; use star for Hermitian sets");
        break;
    case Mode::OrthogonalCongruence:
        if (set.kind != SymmetryKind::Symmetric || set.field != Field::Real)
            throw ModeMismatch("orthogonal mode requires real symmetric input");
        break;
    case Mode::StarCongruence:
    case Mode::UnitaryStarCongruence:
        if (set.kind != SymmetryKind::Hermitian)
            throw ModeMismatch("star/unitary modes require Hermitian input");
        break;
    }
}

Vector vectorize(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvectorize(const Vector& v, int n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& path) {
    // splitmix64 over the seed and each path byte
    auto step = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = step(seed);
    for (unsigned char c : path)
        h = step(h ^ c);
    return h;
}

} // namespace sbdc
