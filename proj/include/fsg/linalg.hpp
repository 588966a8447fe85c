#pragma once

#include <vector>

#include "fsg/cyclotomic.hpp"

namespace fsg {

using Vec = std::vector<Cyclo>;

/// Dense matrix over the cyclotomic field. Sizes stay small (character-table
/// scale), so everything below is straightforward exact Gaussian elimination
/// with first-nonzero pivoting; there is no floating point anywhere.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Cyclo& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Cyclo& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Vec operator*(const Vec& v) const;

private:
    std::size_t rows_, cols_;
    std::vector<Cyclo> data_;
};

std::size_t rank(Matrix a);

Cyclo determinant(Matrix a);

/// Throws std::domain_error when the matrix is singular.
Matrix inverse(Matrix a);

/// Unique solution of a square system; throws std::domain_error when singular.
Vec solve(const Matrix& a, const Vec& b);

/// Outcome of eliminating a general (possibly rectangular) system.
/// `solution` is meaningful only when `consistent`; free variables, if any,
/// are set to zero and flagged through `unique = false`.
struct LinearSolveResult {
    bool consistent = false;
    bool unique = false;
    Vec solution;
};

LinearSolveResult solve_general(const Matrix& a, const Vec& b);

}  // namespace fsg
