#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fsg/linalg.hpp"

using namespace fsg;

namespace {

Matrix from_rows(const std::vector<std::vector<long>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = Cyclo(rows[i][j]);
    return m;
}

bool is_identity(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j) != Cyclo(i == j ? 1 : 0)) return false;
    return true;
}

}  // namespace

TEST_CASE("shape operations") {
    Matrix a = from_rows({{1, 2, 3}, {4, 5, 6}});
    Matrix t = a.transpose();
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
    CHECK(t.at(2, 1) == Cyclo(6));

    Matrix p = a * t;
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 2);
    CHECK(p.at(0, 0) == Cyclo(14));
    CHECK(p.at(0, 1) == Cyclo(32));
    CHECK(p.at(1, 1) == Cyclo(77));

    Vec v = {Cyclo(1), Cyclo(0), Cyclo(-1)};
    Vec av = a * v;
    CHECK(av[0] == Cyclo(-2));
    CHECK(av[1] == Cyclo(-2));
}

TEST_CASE("determinant and rank") {
    CHECK(determinant(from_rows({{1, 2}, {3, 4}})) == Cyclo(-2));
    CHECK(determinant(from_rows({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}})) == Cyclo(30));
    CHECK(determinant(from_rows({{1, 2}, {2, 4}})).is_zero());
    CHECK(rank(from_rows({{1, 2}, {2, 4}})) == 1);
    CHECK(rank(from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 2);
    CHECK(rank(Matrix(3, 3)) == 0);

    // row swaps flip the sign exactly once each
    CHECK(determinant(from_rows({{0, 1}, {1, 0}})) == Cyclo(-1));
}

TEST_CASE("inverse") {
    Matrix a = from_rows({{2, 1}, {7, 4}});
    CHECK(is_identity(a * inverse(a)));
    CHECK(is_identity(inverse(a) * a));

    CHECK_THROWS_AS(inverse(from_rows({{1, 2}, {2, 4}})), std::domain_error);

    // discrete Fourier matrix over the third roots of unity
    Cyclo w = Cyclo::root_of_unity(3, 1);
    Matrix f(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            f.at(i, j) = Cyclo::root_of_unity(3, static_cast<long>(i * j));
    CHECK(rank(f) == 3);
    Matrix g = inverse(f);
    CHECK(is_identity(f * g));
    CHECK(g.at(1, 1) == w.conj() / Cyclo(3));
}

TEST_CASE("square solve") {
    Matrix a = from_rows({{3, 1}, {1, 2}});
    Vec x = solve(a, {Cyclo(9), Cyclo(8)});
    CHECK(x[0] == Cyclo(2));
    CHECK(x[1] == Cyclo(3));
    CHECK_THROWS_AS(solve(from_rows({{1, 1}, {1, 1}}), Vec{Cyclo(0), Cyclo(1)}),
                    std::domain_error);
}

TEST_CASE("general solve") {
    // overdetermined but consistent
    Matrix a = from_rows({{1, 0}, {0, 1}, {1, 1}});
    auto res = solve_general(a, {Cyclo(2), Cyclo(5), Cyclo(7)});
    CHECK(res.consistent);
    CHECK(res.unique);
    CHECK(res.solution[0] == Cyclo(2));
    CHECK(res.solution[1] == Cyclo(5));

    // inconsistent
    res = solve_general(a, {Cyclo(2), Cyclo(5), Cyclo(8)});
    CHECK_FALSE(res.consistent);

    // underdetermined: flagged, and the particular solution still works
    Matrix u = from_rows({{1, 1, 0}, {0, 0, 1}});
    res = solve_general(u, {Cyclo(4), Cyclo(9)});
    CHECK(res.consistent);
    CHECK_FALSE(res.unique);
    Vec check = u * res.solution;
    CHECK(check[0] == Cyclo(4));
    CHECK(check[1] == Cyclo(9));
}

TEST_CASE("random round trips") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<long> entry(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) = Cyclo(entry(rng));
        if (determinant(a).is_zero()) continue;
        CHECK(is_identity(a * inverse(a)));

        Vec b(n);
        for (auto& x : b) x = Cyclo(entry(rng));
        Vec x = solve(a, b);
        Vec ax = a * x;
        for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] == b[i]);
    }
}
