#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fsg/group_table.hpp"

using namespace fsg;

#ifndef FSG_DATA_DIR
#define FSG_DATA_DIR "data"
#endif

TEST_CASE("builtin C2") {
    auto t = GroupTable::builtin("C2");
    CHECK(t->order() == 2);
    CHECK(t->characteristic() == 0);
    CHECK(t->conductor() == 2);
    CHECK(t->class_count() == 2);
    CHECK(t->classes()[0].label == "e");
    CHECK(t->classes()[1].size == 1);
    CHECK(t->identity_class() == 0);
    CHECK(t->trivial_simple() == t->simple_index("triv"));
    CHECK(t->phi(t->simple_index("sgn"), t->class_index("s")) == Cyclo(-1));
    CHECK(t->centralizer_order(0) == 2);
    CHECK(t->class_fraction(1) == Rational(1) / Rational(2));
    // x_s = (1/2) x_triv - (1/2) x_sgn
    CHECK(t->x_class_coeff(0, 1) == Cyclo(Rational(1) / Rational(2)));
    CHECK(t->x_class_coeff(1, 1) == Cyclo(Rational(-1) / Rational(2)));
}

TEST_CASE("builtin S3 character values") {
    auto t = GroupTable::builtin("S3");
    CHECK(t->order() == 6);
    CHECK(t->conductor() == 6);
    std::size_t std_ = t->simple_index("std");
    CHECK(t->phi(std_, t->class_index("e")) == Cyclo(2));
    CHECK(t->phi(std_, t->class_index("(12)")) == Cyclo(0));
    CHECK(t->phi(std_, t->class_index("(123)")) == Cyclo(-1));
    CHECK(t->classes()[t->class_index("(12)")].size == 3);
    CHECK(t->centralizer_order(t->class_index("(12)")) == 2);
}

TEST_CASE("orthogonality reports") {
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        auto report = t->verify_orthogonality();
        CHECK(report.size() == t->class_count() * t->class_count());
        for (const auto& entry : report) {
            CAPTURE(name);
            CAPTURE(entry.g);
            CAPTURE(entry.h);
            CHECK(entry.ok);
        }
    }

    auto c2 = GroupTable::builtin("C2");
    auto report = c2->verify_orthogonality();
    CHECK(report[0].computed == Cyclo(2));   // (e, e)
    CHECK(report[1].computed == Cyclo(0));   // (e, s)

    auto s3 = GroupTable::builtin("S3");
    std::size_t t12 = s3->class_index("(12)");
    for (const auto& entry : s3->verify_orthogonality())
        if (entry.g == t12 && entry.h == t12) CHECK(entry.computed == Cyclo(2));
}

TEST_CASE("C4 conjugate structure") {
    auto t = GroupTable::builtin("C4");
    std::size_t chi1 = t->simple_index("chi1");
    std::size_t chi3 = t->simple_index("chi3");
    Cyclo i = Cyclo::root_of_unity(4, 1);
    CHECK(t->phi(chi1, t->class_index("g")) == i);
    CHECK(t->phi(chi3, t->class_index("g")) == -i);
    for (std::size_t c = 0; c < t->class_count(); ++c)
        CHECK(t->phi(chi1, c).conj() == t->phi(chi3, c));
    // inverse classes: g and g3 swap, e and g2 are self-inverse
    CHECK(t->inverse_class(t->class_index("g")) == t->class_index("g3"));
    CHECK(t->inverse_class(t->class_index("g3")) == t->class_index("g"));
    CHECK(t->inverse_class(t->class_index("e")) == t->class_index("e"));
    CHECK(t->inverse_class(t->class_index("g2")) == t->class_index("g2"));
}

TEST_CASE("modular tables") {
    auto t3 = GroupTable::builtin("S3mod3");
    CHECK(t3->characteristic() == 3);
    CHECK(t3->class_count() == 2);
    CHECK(t3->projective_dim(t3->simple_index("triv")) == 3);
    CHECK(t3->Phi(t3->simple_index("sgn"), t3->class_index("(12)")) == Cyclo(-1));

    auto t2 = GroupTable::load_file(std::string(FSG_DATA_DIR) + "/tables/s3_mod2.table");
    CHECK(t2->name() == "S3mod2");
    CHECK(t2->characteristic() == 2);
    CHECK(t2->conductor() == 3);
    CHECK(t2->projective_dim(t2->simple_index("triv")) == 2);
    CHECK(t2->projective_dim(t2->simple_index("std")) == 2);
    for (const auto& entry : t2->verify_orthogonality()) CHECK(entry.ok);
}

TEST_CASE("value grammar forms") {
    // same table as builtin C3 with values spelled in assorted grammar forms
    auto t = GroupTable::load(R"(group C3x
order 3
characteristic 0
conductor 3
classes
e 1 1
g 1 3
g2 1 3
simples
triv : 1, 2/2, 1 + 0*z^1
chi1 : 1, 1*z^1, 0 - 1 - z   # z^2 = -1 - z
chi2 : 1, -1 - 1*z^1, z
)");
    auto c3 = GroupTable::builtin("C3");
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t c = 0; c < 3; ++c) CHECK(t->phi(s, c) == c3->phi(s, c));
}

TEST_CASE("round trip through str") {
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        auto reloaded = GroupTable::load(t->str(), "roundtrip:" + name);
        CHECK(reloaded->str() == t->str());
        CHECK(reloaded->order() == t->order());
        CHECK(reloaded->conductor() == t->conductor());
    }
}

TEST_CASE("load rejects invalid tables") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            GroupTable::load(text, "t");
            FAIL_CHECK("expected TableError containing \"" << needle << "\"");
        } catch (const TableError& e) {
            CAPTURE(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    // orthogonality violation: sgn value corrupted
    expect_error(R"(group X
order 2
characteristic 0
conductor 2
classes
e 1 1
s 1 2
simples
triv : 1, 1
sgn : 1, -2
)",
                 "orthogonality fails at");

    // class sizes do not sum to the order in characteristic 0
    expect_error(R"(group X
order 4
characteristic 0
conductor 2
classes
e 1 1
s 1 2
simples
triv : 1, 1
sgn : 1, -1
)",
                 "sum to the group order");

    // declared conductor disagrees with element orders
    expect_error(R"(group X
order 2
characteristic 0
conductor 4
classes
e 1 1
s 1 2
simples
triv : 1, 1
sgn : 1, -1
)",
                 "conductor must equal the lcm");

    // modular table without projectives
    expect_error(R"(group X
order 6
characteristic 3
conductor 2
classes
e 1 1
s 3 2
simples
triv : 1, 1
sgn : 1, -1
)",
                 "projectives block is required");

    // malformed value carries its line number
    expect_error(R"(group X
order 2
characteristic 0
conductor 2
classes
e 1 1
s 1 2
simples
triv : 1, 1
sgn : 1, bogus
)",
                 "t:10:");

    // wrong number of values in a row
    expect_error(R"(group X
order 2
characteristic 0
conductor 2
classes
e 1 1
s 1 2
simples
triv : 1
sgn : 1, -1
)",
                 "expected 2");

    // header typo
    expect_error("grup X\norder 2\n", "unknown header");
}

TEST_CASE("label lookups") {
    auto t = GroupTable::builtin("S3");
    CHECK(t->class_index("(123)") == 2);
    CHECK_THROWS_AS(t->class_index("(1234)"), TableError);
    CHECK_THROWS_AS(t->simple_index("spin"), TableError);
    CHECK_THROWS_AS(GroupTable::builtin("Q8"), TableError);
}

TEST_CASE("trace_to_coords inverts the character matrix") {
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        std::size_t k = t->class_count();
        Matrix p(k, k);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t s = 0; s < k; ++s) p.at(c, s) = t->phi(s, c);
        Matrix prod = t->trace_to_coords() * p;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                CHECK(prod.at(i, j) == Cyclo(i == j ? 1 : 0));
    }
}
