#pragma once

#include "sbdc/types.hpp"

#include <vector>

// Regression fixtures: the worked by-hand examples this suite reproduces.
namespace fixtures {

using sbdc::Field;
using sbdc::Matrix;
using sbdc::MatrixSet;
using sbdc::Scalar;
using sbdc::SymmetryKind;

inline Matrix real3(double a11, double a12, double a13, double a21, double a22, double a23,
                    double a31, double a32, double a33) {
    Matrix m(3, 3);
    m << a11, a12, a13, a21, a22, a23, a31, a32, a33;
    return m;
}

inline Matrix real2(double a11, double a12, double a21, double a22) {
    Matrix m(2, 2);
    m << a11, a12, a21, a22;
    return m;
}

inline MatrixSet make_set(std::vector<Matrix> mats, SymmetryKind kind, Field field) {
    MatrixSet set;
    set.matrices = std::move(mats);
    set.kind = kind;
    set.field = field;
    return set;
}

// pair with center dimension 5; simultaneously diagonalizable via general
// congruence but carrying a common kernel vector (1,-1,-2)
inline MatrixSet pair3() {
    return make_set({real3(-2, 2, -2, 2, 2, 0, -2, 0, -1), real3(5, 7, -1, 7, 5, 1, -1, 1, -1)},
                    SymmetryKind::Symmetric, Field::Real);
}

inline MatrixSet pair3_sub() {
    return make_set({real2(2, 0, 0, -1), real2(5, 1, 1, -1)}, SymmetryKind::Symmetric,
                    Field::Real);
}

// real triple with center dimension 3: block-diagonalizable over R, fully
// diagonalizable over C (the field-dependence example)
inline MatrixSet triple_field_dependent(Field field = Field::Real) {
    return make_set({real3(1, 0, 0, 0, -1, 1, 0, 1, 2), real3(0, 1, -1, 1, -1, 1, -1, 1, 1),
                     real3(2, 1, -1, 1, -3, 3, -1, 3, -2)},
                    SymmetryKind::Symmetric, field);
}

inline MatrixSet triple_field_dependent_sub(Field field = Field::Real) {
    return make_set({real2(1, 1, 1, 0), real2(0, 1, 1, 1), real2(2, 3, 3, 1)},
                    SymmetryKind::Symmetric, field);
}

// complex symmetric triple whose sub-center has no nontrivial idempotents
// (a nilpotent direction); finest signature [1,2]
inline MatrixSet triple_nilpotent() {
    return make_set({real3(1, 2, 3, 2, 8, 16, 3, 16, 33), real3(1, 2, 3, 2, 6, 12, 3, 12, 25),
                     real3(1, 2, 3, 2, 7, 16, 3, 16, 37)},
                    SymmetryKind::Symmetric, Field::Complex);
}

inline MatrixSet triple_nilpotent_sub() {
    return make_set({real2(4, 10, 10, 24), real2(2, 6, 6, 16), real2(3, 10, 10, 28)},
                    SymmetryKind::Symmetric, Field::Complex);
}

// real triple decomposable via orthogonal congruence; center spanned by I and
// a matrix X with X^2 = 25X
inline MatrixSet triple_orthogonal() {
    return make_set({real3(-9, 4, 12, 4, 10, 3, 12, 3, -16), real3(16, 8, 12, 8, 5, 6, 12, 6, 9),
                     real3(41, -4, 12, -4, 20, -3, 12, -3, 34)},
                    SymmetryKind::Symmetric, Field::Real);
}

inline MatrixSet triple_orthogonal_sub() {
    return make_set({real2(10, 5, 5, 0), real2(5, 10, 10, 25), real2(20, -5, -5, 50)},
                    SymmetryKind::Symmetric, Field::Real);
}

inline Matrix herm2(Scalar a11, Scalar a12, Scalar a21, Scalar a22) {
    Matrix m(2, 2);
    m << a11, a12, a21, a22;
    return m;
}

// Hermitian triple, star-diagonalizable but noncommuting (so not unitarily)
inline MatrixSet hermitian_triple2() {
    const Scalar i(0, 1);
    return make_set({herm2(1, 1. + i, 1. - i, 1), herm2(2, 2. + 2. * i, 2. - 2. * i, 7),
                     herm2(-2, -2. - 2. * i, -2. + 2. * i, 1)},
                    SymmetryKind::Hermitian, Field::Complex);
}

inline Matrix herm3(Scalar a11, Scalar a12, Scalar a13, Scalar a21, Scalar a22, Scalar a23,
                    Scalar a31, Scalar a32, Scalar a33) {
    Matrix m(3, 3);
    m << a11, a12, a13, a21, a22, a23, a31, a32, a33;
    return m;
}

// Hermitian pair with star signature [1,2]
inline MatrixSet hermitian_pair3() {
    const Scalar i(0, 1);
    return make_set(
        {herm3(0, -2. - 2. * i, -3. - 2. * i, -2. + 2. * i, -2, 4. + 6. * i, -3. + 2. * i,
               4. - 6. * i, 11),
         herm3(-2, -2. - 5. * i, -3. - i, -2. + 5. * i, -3, 11. + 6. * i, -3. + i, 11. - 6. * i,
               19)},
        SymmetryKind::Hermitian, Field::Complex);
}

inline MatrixSet hermitian_pair3_sub() {
    const Scalar i(0, 1);
    return make_set({herm2(-1, 1. + i, 1. - i, 1), herm2(-1, 2. + i, 2. - i, 2)},
                    SymmetryKind::Hermitian, Field::Complex);
}

// Hermitian triple decomposable via unitary star-congruence, signature [1,2]
inline MatrixSet hermitian_triple3() {
    const Scalar i(0, 1);
    return make_set({herm3(9, -6. * i, 3. * i, 6. * i, 9, -6. * i, -3. * i, 6. * i, 9),
                     herm3(-4, -2, 5, -2, 8, -2, 5, -2, -4),
                     herm3(15, -6, 6, -6, 6, 12, 6, 12, 6)},
                    SymmetryKind::Hermitian, Field::Complex);
}

inline MatrixSet hermitian_triple3_sub() {
    const Scalar i(0, 1);
    return make_set({herm2(9, 9, 9, 9), herm2(0, -9. * i, 9. * i, 0), herm2(18, 0, 0, -9)},
                    SymmetryKind::Hermitian, Field::Complex);
}

} // namespace fixtures
