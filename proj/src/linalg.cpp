#include "fsg/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace fsg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Cyclo(1);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix::operator*: shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out.at(i, j) += at(i, k) * rhs.at(k, j);
        }
    return out;
}

Vec Matrix::operator*(const Vec& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("Matrix::operator*: shape mismatch");
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
}

namespace {

// Forward elimination in place on [a | extra]; returns pivot columns of a.
// `extra` may be empty (rank, determinant) or carry right-hand sides.
std::vector<std::size_t> eliminate(Matrix& a, Matrix& extra, int& swap_sign) {
    std::vector<std::size_t> pivots;
    swap_sign = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && a.at(p, col).is_zero()) ++p;
        if (p == a.rows()) continue;
        if (p != row) {
            swap_sign = -swap_sign;
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(row, j));
            for (std::size_t j = 0; j < extra.cols(); ++j) std::swap(extra.at(p, j), extra.at(row, j));
        }
        for (std::size_t i = row + 1; i < a.rows(); ++i) {
            if (a.at(i, col).is_zero()) continue;
            Cyclo f = a.at(i, col) / a.at(row, col);
            for (std::size_t j = col; j < a.cols(); ++j) a.at(i, j) -= f * a.at(row, j);
            a.at(i, col) = Cyclo(0);
            for (std::size_t j = 0; j < extra.cols(); ++j) extra.at(i, j) -= f * extra.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Back substitution after eliminate(): scales pivot rows to 1 and clears
// entries above each pivot, turning [a | extra] into reduced echelon form.
void back_substitute(Matrix& a, Matrix& extra, const std::vector<std::size_t>& pivots) {
    for (std::size_t r = pivots.size(); r-- > 0;) {
        std::size_t col = pivots[r];
        Cyclo inv = a.at(r, col).inverse();
        for (std::size_t j = col; j < a.cols(); ++j) a.at(r, j) *= inv;
        for (std::size_t j = 0; j < extra.cols(); ++j) extra.at(r, j) *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            Cyclo f = a.at(i, col);
            if (f.is_zero()) continue;
            for (std::size_t j = col; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
            for (std::size_t j = 0; j < extra.cols(); ++j) extra.at(i, j) -= f * extra.at(r, j);
        }
    }
}

}  // namespace

std::size_t rank(Matrix a) {
    Matrix none(a.rows(), 0);
    int sign;
    return eliminate(a, none, sign).size();
}

Cyclo determinant(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    Matrix none(a.rows(), 0);
    int sign;
    auto pivots = eliminate(a, none, sign);
    if (pivots.size() < a.rows()) return Cyclo(0);
    Cyclo det(sign);
    for (std::size_t i = 0; i < a.rows(); ++i) det *= a.at(i, pivots[i]);
    return det;
}

Matrix inverse(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
    Matrix id = Matrix::identity(a.rows());
    int sign;
    auto pivots = eliminate(a, id, sign);
    if (pivots.size() < a.rows()) throw std::domain_error("inverse: singular matrix");
    back_substitute(a, id, pivots);
    return id;
}

Vec solve(const Matrix& a, const Vec& b) {
    if (a.rows() != a.cols()) throw std::invalid_argument("solve: matrix not square");
    auto res = solve_general(a, b);
    if (!res.consistent || !res.unique) throw std::domain_error("solve: singular matrix");
    return res.solution;
}

LinearSolveResult solve_general(const Matrix& a, const Vec& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_general: shape mismatch");
    Matrix work = a;
    Matrix rhs(a.rows(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i) rhs.at(i, 0) = b[i];
    int sign;
    auto pivots = eliminate(work, rhs, sign);

    LinearSolveResult res;
    for (std::size_t i = pivots.size(); i < a.rows(); ++i)
        if (!rhs.at(i, 0).is_zero()) return res;
    res.consistent = true;
    res.unique = pivots.size() == a.cols();

    back_substitute(work, rhs, pivots);
    res.solution.assign(a.cols(), Cyclo(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) res.solution[pivots[r]] = rhs.at(r, 0);
    return res;
}

}  // namespace fsg
