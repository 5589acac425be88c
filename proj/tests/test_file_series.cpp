#include <algorithm>
#include <set>

#include <doctest.h>

#include "sciforge/file_series.hpp"
#include "test_support.hpp"

using namespace sciforge::series;

namespace {

const std::vector<std::string> kPaperFiles = {
    "im1_1.png", "im1_2.png", "im1_3.png",
    "im2_1.png", "im2_2.png", "im2_3.png",
};

// independent oracle for make_pairs: scan every ordered couple of files
std::vector<std::pair<std::string, std::string>> brute_force_pairs(
    const std::vector<std::string>& names, std::size_t axis, long long step) {
    std::vector<std::pair<IndexTuple, std::string>> parsed;
    for (const auto& n : names)
        parsed.emplace_back(parse_filename(n).second, n);
    std::sort(parsed.begin(), parsed.end(), [&](const auto& a, const auto& b) {
        IndexTuple ra = a.first, rb = b.first;
        ra.erase(ra.begin() + static_cast<long>(axis));
        rb.erase(rb.begin() + static_cast<long>(axis));
        return std::tie(ra, a.first[axis]) < std::tie(rb, b.first[axis]);
    });
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [tuple, name] : parsed) {
        IndexTuple partner = tuple;
        partner[axis] += step;
        for (const auto& [other_tuple, other_name] : parsed)
            if (other_tuple == partner)
                pairs.emplace_back(name, other_name);
    }
    return pairs;
}

}  // namespace

TEST_CASE("parse_filename decomposition") {
    auto [pattern, tuple] = parse_filename("im1_2.png");
    CHECK(pattern.literals == std::vector<std::string>{"im", "_", ""});
    CHECK(pattern.pad_widths == std::vector<int>{0, 0});
    CHECK(pattern.extension == "png");
    CHECK(tuple == IndexTuple{1, 2});

    auto [padded, ptuple] = parse_filename("frame007.tif");
    CHECK(padded.pad_widths == std::vector<int>{3});
    CHECK(ptuple == IndexTuple{7});

    CHECK_THROWS_AS(parse_filename("readme"), NoExtension);
    CHECK_THROWS_AS(parse_filename("trailingdot."), NoExtension);
}

TEST_CASE("single digit zero stays unpadded") {
    auto [pattern, tuple] = parse_filename("x0.png");
    CHECK(pattern.pad_widths == std::vector<int>{0});
    CHECK(tuple == IndexTuple{0});
    // so x0..x9 form one homogeneous serie
    CHECK_NOTHROW(build_serie({"x0.png", "x5.png", "x9.png"}));
}

TEST_CASE("reconstruction identity") {
    for (const char* name :
         {"im1_2.png", "frame007.tif", "a01b002c3.dat", "x0.png", "v10.t2.csv"}) {
        auto [pattern, tuple] = parse_filename(name);
        CHECK(render_filename(pattern, tuple) == name);
        auto [pattern2, tuple2] = parse_filename(render_filename(pattern, tuple));
        CHECK(pattern2 == pattern);
        CHECK(tuple2 == tuple);
    }
}

TEST_CASE("build_serie") {
    Serie serie = build_serie(kPaperFiles);
    CHECK(serie.arity() == 2);
    CHECK(serie.tuples().size() == 6);
    CHECK(serie.tuples().front() == IndexTuple{1, 1});
    CHECK(serie.tuples().back() == IndexTuple{2, 3});

    CHECK_THROWS_AS(build_serie({}), EmptyInput);
    CHECK_THROWS_AS(build_serie({"a1.png", "b1.png"}), HeterogeneousSeries);
    CHECK_THROWS_AS(build_serie({"frame007.tif", "frame100.tif"}),
                    HeterogeneousSeries);
    CHECK_NOTHROW(build_serie({"x1.png"}));

    // order independence and dedup
    Serie reversed = build_serie(
        {"im2_3.png", "im1_1.png", "im2_1.png", "im1_3.png", "im1_2.png",
         "im2_2.png", "im1_1.png"});
    CHECK(reversed.tuples() == serie.tuples());
}

TEST_CASE("index_ranges") {
    Serie serie = build_serie(kPaperFiles);
    auto ranges = index_ranges(serie);
    REQUIRE(ranges.size() == 2);
    CHECK(ranges[0] == AxisRange{1, 2, 2});
    CHECK(ranges[1] == AxisRange{1, 3, 3});

    Serie single = build_serie({"shot4.png"});
    CHECK(index_ranges(single)[0] == AxisRange{4, 4, 1});

    Serie gaps = build_serie({"t1.png", "t3.png"});
    CHECK(index_ranges(gaps)[0] == AxisRange{1, 3, 2});
}

TEST_CASE("groups along each axis reproduce the paper subsets") {
    Serie serie = build_serie(kPaperFiles);

    auto axis0 = groups_along_axis(serie, 0);
    REQUIRE(axis0.size() == 2);
    CHECK(axis0[0] == std::vector<std::string>{"im1_1.png", "im1_2.png", "im1_3.png"});
    CHECK(axis0[1] == std::vector<std::string>{"im2_1.png", "im2_2.png", "im2_3.png"});

    auto axis1 = groups_along_axis(serie, 1);
    REQUIRE(axis1.size() == 3);
    CHECK(axis1[0] == std::vector<std::string>{"im1_1.png", "im2_1.png"});
    CHECK(axis1[1] == std::vector<std::string>{"im1_2.png", "im2_2.png"});
    CHECK(axis1[2] == std::vector<std::string>{"im1_3.png", "im2_3.png"});

    CHECK_THROWS_AS(groups_along_axis(serie, 2), AxisOutOfRange);

    Serie single_axis = build_serie({"a1.png", "a2.png"});
    auto groups = groups_along_axis(single_axis, 0);
    CHECK(groups ==
          std::vector<std::vector<std::string>>{{"a1.png"}, {"a2.png"}});
}

TEST_CASE("groups partition the serie on every axis (property)") {
    testsup::ParamGen gen(0xabcd01);
    for (int trial = 0; trial < 50; ++trial) {
        int arity = gen.pick(1, 3);
        std::set<IndexTuple> tuples;
        int count = gen.pick(1, 24);
        for (int i = 0; i < count; ++i) {
            IndexTuple t;
            for (int a = 0; a < arity; ++a)
                t.push_back(gen.pick(0, 4));
            tuples.insert(t);
        }
        std::vector<std::string> names;
        for (const auto& t : tuples) {
            std::string name = "cam";
            for (std::size_t a = 0; a < t.size(); ++a)
                name += (a ? "_" : "") + std::to_string(t[a]);
            names.push_back(name + ".png");
        }
        Serie serie = build_serie(names);
        for (std::size_t axis = 0; axis < serie.arity(); ++axis) {
            std::multiset<std::string> seen;
            for (const auto& group : groups_along_axis(serie, axis))
                seen.insert(group.begin(), group.end());
            CHECK(seen == std::multiset<std::string>(names.begin(), names.end()));
        }
    }
}

TEST_CASE("make_pairs matches the brute-force oracle on the paper serie") {
    Serie serie = build_serie(kPaperFiles);
    auto pairs = make_pairs(serie, 1, 1);

    // frozen from the oracle below (4 couples)
    std::vector<std::pair<std::string, std::string>> expected = {
        {"im1_1.png", "im1_2.png"},
        {"im1_2.png", "im1_3.png"},
        {"im2_1.png", "im2_2.png"},
        {"im2_2.png", "im2_3.png"},
    };
    CHECK(brute_force_pairs(kPaperFiles, 1, 1) == expected);
    CHECK(pairs == expected);

    CHECK(make_pairs(serie, 1, 5).empty());  // step beyond the span
    CHECK_THROWS_AS(make_pairs(serie, 1, 0), NonPositiveStep);
    CHECK_THROWS_AS(make_pairs(serie, 9, 1), AxisOutOfRange);

    Serie gaps = build_serie({"t1.png", "t3.png"});
    CHECK(make_pairs(gaps, 0, 1).empty());  // partner absent
    CHECK(make_pairs(gaps, 0, 2).size() == 1);
}

TEST_CASE("make_pairs equals the oracle on random series") {
    testsup::ParamGen gen(0x9e3779b9);
    for (int trial = 0; trial < 50; ++trial) {
        std::set<std::string> names;
        int count = gen.pick(1, 15);
        for (int i = 0; i < count; ++i)
            names.insert("b" + std::to_string(gen.pick(0, 5)) + "_f" +
                         std::to_string(gen.pick(0, 5)) + ".tif");
        std::vector<std::string> list(names.begin(), names.end());
        Serie serie = build_serie(list);
        for (std::size_t axis = 0; axis < 2; ++axis) {
            long long step = gen.pick(1, 3);
            CHECK(make_pairs(serie, axis, step) ==
                  brute_force_pairs(list, axis, step));
        }
    }
}
