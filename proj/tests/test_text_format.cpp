#include <doctest.h>

#include "sciforge/text_format.hpp"

using namespace sciforge;

TEST_CASE("format_double produces spec forms") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-5) == "1e-05");
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(42.0) == "42.0");
    CHECK(format_double(-2.25) == "-2.25");
}

TEST_CASE("format_double always re-parses to the same double") {
    for (double v : {1.0 / 3.0, 0.1, 1e300, -4.9e-324, 123456.789, 2.5e-10}) {
        auto parsed = parse_double(format_double(v));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == v);
    }
}

TEST_CASE("parse helpers reject partial input") {
    CHECK(!parse_double("1.5x"));
    CHECK(!parse_integer("12 "));
    CHECK(parse_integer("-42") == -42);
}

TEST_CASE("identifier grammar") {
    CHECK(is_identifier("nx"));
    CHECK(is_identifier("_private9"));
    CHECK(!is_identifier("2bad"));
    CHECK(!is_identifier(""));
    CHECK(!is_identifier("a-b"));
}
