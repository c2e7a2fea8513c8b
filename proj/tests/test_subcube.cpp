#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mts/subcube.hpp"

using namespace mts;

TEST_CASE("construction and rail accessors") {
    Subcube h = Subcube::from_string("01-");
    CHECK(h.dim() == 3);
    CHECK_FALSE(h.is_free(0));
    CHECK(h.fixed_value(0) == false);
    CHECK(h.fixed_value(1) == true);
    CHECK(h.is_free(2));
    CHECK(h.free_count() == 1);
    CHECK_FALSE(h.is_point());
    CHECK(Subcube::point({1, 0}).is_point());
    CHECK(Subcube::full(4).free_count() == 4);
}

TEST_CASE("string round trip accepts * and -") {
    CHECK(Subcube::from_string("10*1*").str() == "10-1-");
    CHECK(Subcube::from_string("10-1-").str() == "10-1-");
    CHECK_THROWS_AS(Subcube::from_string("10x"), std::exception);
}

TEST_CASE("containment") {
    Subcube outer = Subcube::from_string("1--0");
    CHECK(outer.contains(Configuration{1, 0, 1, 0}));
    CHECK_FALSE(outer.contains(Configuration{0, 0, 1, 0}));
    CHECK(outer.contains(Subcube::from_string("10-0")));
    CHECK(outer.contains(outer));
    CHECK_FALSE(outer.contains(Subcube::from_string("1---")));
    CHECK_FALSE(Subcube::from_string("10-0").contains(outer));
}

TEST_CASE("intersection") {
    Subcube a = Subcube::from_string("1--0");
    Subcube b = Subcube::from_string("-01-");
    Subcube c = a.intersect(b);
    CHECK(c.valid());
    CHECK(c.str() == "1010");
    Subcube d = Subcube::from_string("0---").intersect(a);
    CHECK_FALSE(d.valid());
}

TEST_CASE("packing beyond one word") {
    int n = 130;
    Subcube h = Subcube::full(n);
    Configuration x(n, 0);
    CHECK(h.contains(x));
    Subcube p = Subcube::point(x);
    CHECK(h.contains(p));
    CHECK_FALSE(p.contains(h));
    CHECK(p.free_count() == 0);
    CHECK(p.str().size() == size_t(n));
}

TEST_CASE("marker matching on cubes") {
    PartialAssignment m{{1, true}, {2, true}};
    CHECK_FALSE(matches(Subcube::from_string("010--"), m));  // dim 2 wrong
    CHECK(matches(Subcube::from_string("-11--"), m));
    CHECK_FALSE(matches(Subcube::from_string("-1---"), m));  // free marked dim
    CHECK(matches(Subcube::from_string("---"), PartialAssignment{}));
}

TEST_CASE("ordering is strict-weak and consistent with equality") {
    Subcube a = Subcube::from_string("01-");
    Subcube b = Subcube::from_string("0-1");
    CHECK(a == a);
    CHECK((a < b) != (b < a));
    CHECK_FALSE(a < a);
}
