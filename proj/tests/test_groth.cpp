#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fsg/groth.hpp"

using namespace fsg;

namespace {

Rational half() { return Rational(1) / Rational(2); }

GrothElement random_element(const TablePtr& t, std::mt19937& rng) {
    std::uniform_int_distribution<long> small(-3, 3);
    Vec coords(t->class_count());
    for (auto& c : coords) {
        c = Cyclo(small(rng));
        if (t->conductor() > 1)
            c += Cyclo(small(rng)) * Cyclo::root_of_unity(t->conductor(), 1);
    }
    return GrothElement(t, std::move(coords));
}

}  // namespace

TEST_CASE("x_class coordinates") {
    auto c2 = GroupTable::builtin("C2");
    GrothElement xe = x_class(c2, c2->class_index("e"));
    CHECK(xe.coords()[0] == Cyclo(half()));
    CHECK(xe.coords()[1] == Cyclo(half()));
    GrothElement xs = x_class(c2, c2->class_index("s"));
    CHECK(xs.coords()[0] == Cyclo(half()));
    CHECK(xs.coords()[1] == Cyclo(-half()));

    auto s3 = GroupTable::builtin("S3");
    GrothElement e3 = x_class(s3, s3->class_index("e"));
    Rational sixth = Rational(1) / Rational(6);
    CHECK(e3.coords()[s3->simple_index("triv")] == Cyclo(sixth));
    CHECK(e3.coords()[s3->simple_index("sgn")] == Cyclo(sixth));
    CHECK(e3.coords()[s3->simple_index("std")] == Cyclo(Rational(2) * sixth));
}

TEST_CASE("traces") {
    auto c2 = GroupTable::builtin("C2");
    GrothElement xtriv = GrothElement::simple(c2, c2->simple_index("triv"));
    CHECK(trace(c2->class_index("s"), xtriv) == Cyclo(1));

    auto s3 = GroupTable::builtin("S3");
    GrothElement xstd = GrothElement::simple(s3, s3->simple_index("std"));
    CHECK(trace(s3->class_index("e"), xstd) == Cyclo(2));

    Vec dec = class_decompose(xstd);
    CHECK(dec[0] == Cyclo(2));
    CHECK(dec[1] == Cyclo(0));
    CHECK(dec[2] == Cyclo(-1));
}

TEST_CASE("biorthogonality over every bundled table") {
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        for (std::size_t c = 0; c < t->class_count(); ++c) {
            GrothElement xc = x_class(t, c);
            for (std::size_t g = 0; g < t->class_count(); ++g) {
                CAPTURE(name);
                CHECK(trace(g, xc) == Cyclo(g == c ? 1 : 0));
            }
        }
    }
}

TEST_CASE("decompose and recompose are inverse") {
    std::mt19937 rng(20240811);
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        for (int trial = 0; trial < 20; ++trial) {
            GrothElement v = random_element(t, rng);
            CHECK(recompose(t, class_decompose(v)) == v);
        }
    }

    auto c2 = GroupTable::builtin("C2");
    GrothElement zero(c2);
    for (const auto& tr : class_decompose(zero)) CHECK(tr.is_zero());

    // x_e + x_s = x_triv on C2
    GrothElement sum = x_class(c2, 0) + x_class(c2, 1);
    CHECK(sum == GrothElement::simple(c2, c2->simple_index("triv")));
}

TEST_CASE("tensor products") {
    std::mt19937 rng(77);
    for (const auto& name : GroupTable::builtin_names()) {
        auto t = GroupTable::builtin(name);
        GrothElement one = GrothElement::simple(t, t->trivial_simple());
        for (int trial = 0; trial < 10; ++trial) {
            GrothElement a = random_element(t, rng);
            GrothElement b = random_element(t, rng);
            GrothElement ab = tensor(a, b);
            for (std::size_t g = 0; g < t->class_count(); ++g)
                CHECK(trace(g, ab) == trace(g, a) * trace(g, b));
            CHECK(tensor(one, a) == a);
        }
    }

    // sgn (x) sgn = triv on C2
    auto c2 = GroupTable::builtin("C2");
    GrothElement sgn = GrothElement::simple(c2, c2->simple_index("sgn"));
    CHECK(tensor(sgn, sgn) == GrothElement::simple(c2, c2->trivial_simple()));
}

TEST_CASE("table mismatch is rejected") {
    GrothElement a(GroupTable::builtin("C2"));
    GrothElement b(GroupTable::builtin("C3"));
    CHECK_THROWS_AS(a += b, std::invalid_argument);
    CHECK_THROWS_AS(tensor(a, b), std::invalid_argument);
}
