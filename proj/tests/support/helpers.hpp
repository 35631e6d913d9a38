#pragma once

#include "sbdc/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace helpers {

using sbdc::Field;
using sbdc::Matrix;
using sbdc::MatrixSet;
using sbdc::Scalar;
using sbdc::SymmetryKind;

inline Matrix random_symmetric_int(std::mt19937_64& rng, int n, int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g(r, c) = Scalar(dist(rng), 0);
    return g + g.transpose().eval();
}

inline Matrix random_hermitian_int(std::mt19937_64& rng, int n, int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g(r, c) = Scalar(dist(rng), dist(rng));
    return g + g.adjoint().eval();
}

inline Matrix random_complex_symmetric_int(std::mt19937_64& rng, int n, int lo = -3,
                                           int hi = 3) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g(r, c) = Scalar(dist(rng), dist(rng));
    return g + g.transpose().eval();
}

inline MatrixSet random_int_set(std::mt19937_64& rng, int n, int m, SymmetryKind kind) {
    MatrixSet set;
    set.kind = kind;
    set.field = kind == SymmetryKind::Hermitian ? Field::Complex : Field::Real;
    for (int i = 0; i < m; ++i)
        set.matrices.push_back(kind == SymmetryKind::Hermitian ? random_hermitian_int(rng, n)
                                                               : random_symmetric_int(rng, n));
    return set;
}

inline Matrix random_unitary(std::mt19937_64& rng, int n, bool complex_entries) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g(r, c) = Scalar(normal(rng), complex_entries ? normal(rng) : 0.0);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    return q;
}

/// Invertible transform with condition number at most max_cond.
inline Matrix random_conditioned(std::mt19937_64& rng, int n, double max_cond,
                                 bool complex_entries) {
    const Matrix q1 = random_unitary(rng, n, complex_entries);
    const Matrix q2 = random_unitary(rng, n, complex_entries);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Matrix d = Matrix::Zero(n, n);
    d(0, 0) = 1.0;
    for (int k = 1; k < n; ++k)
        d(k, k) = std::exp(uni(rng) * std::log(max_cond));
    return q1 * d * q2;
}

struct Planted {
    MatrixSet set;
    std::vector<int> sizes;
};

/// Block-diagonal family conjugated by a well-conditioned transform; the
/// planted signature is recoverable by construction. max_cond == 1 plants an
/// orthogonal/unitary transform.
inline Planted planted_set(std::mt19937_64& rng, int n, int m, SymmetryKind kind,
                           double max_cond, Field field = Field::Real) {
    Planted out;
    std::uniform_int_distribution<int> part(1, 3);
    int remaining = n;
    while (remaining > 0) {
        const int s = std::min(remaining, part(rng));
        out.sizes.push_back(s);
        remaining -= s;
    }
    if (kind == SymmetryKind::Hermitian)
        field = Field::Complex;
    out.set.kind = kind;
    out.set.field = field;

    const bool complex_entries = field == Field::Complex;
    const Matrix p = random_conditioned(rng, n, max_cond, complex_entries);
    for (int i = 0; i < m; ++i) {
        Matrix d = Matrix::Zero(n, n);
        int offset = 0;
        for (int s : out.sizes) {
            if (kind == SymmetryKind::Hermitian)
                d.block(offset, offset, s, s) = random_hermitian_int(rng, s);
            else if (field == Field::Complex)
                d.block(offset, offset, s, s) = random_complex_symmetric_int(rng, s);
            else
                d.block(offset, offset, s, s) = random_symmetric_int(rng, s);
            offset += s;
        }
        out.set.matrices.push_back(kind == SymmetryKind::Hermitian
                                       ? Matrix(p.adjoint() * d * p)
                                       : Matrix(p.transpose() * d * p));
    }
    return out;
}

/// True when `found` refines `planted` as a multiset of block sizes: the
/// found parts can be grouped into bins that sum to the planted parts.
inline bool refines(std::vector<int> found, std::vector<int> planted) {
    long sum_f = 0, sum_p = 0;
    for (int f : found)
        sum_f += f;
    for (int p : planted)
        sum_p += p;
    if (sum_f != sum_p)
        return false;
    std::sort(found.rbegin(), found.rend());
    std::vector<int> bins = planted;

    std::function<bool(std::size_t)> place = [&](std::size_t idx) {
        if (idx == found.size())
            return true;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (bins[b] < found[idx])
                continue;
            bool duplicate = false;
            for (std::size_t prev = 0; prev < b; ++prev)
                if (bins[prev] == bins[b])
                    duplicate = true;
            if (duplicate)
                continue;
            bins[b] -= found[idx];
            if (place(idx + 1))
                return true;
            bins[b] += found[idx];
        }
        return false;
    };
    return place(0);
}

} // namespace helpers
