#include <doctest.h>

#include <sstream>

#include "randfield/lattice.hpp"
#include "randfield/rng.hpp"

using namespace randfield;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("boundary of boxes") {
    CHECK(boundary(make_domain("box:n=3,d=2")).size() == 8);
    CHECK(boundary(make_domain("box:n=10,d=2")).size() == 36);  // 4n - 4

    // every neighbor of a single point is outside
    Domain single(2, {LatticePoint{5, 5}});
    CHECK(boundary(single).size() == 1);

    // boundary is a subset of the domain, and the box ratio decreases
    double prev = 1.1;
    for (long long n = 2; n <= 16; n *= 2) {
        Domain g = make_domain("box:n=" + std::to_string(n) + ",d=2");
        Domain b = boundary(g);
        for (const auto& p : b.points()) CHECK(g.contains(p));
        double ratio = static_cast<double>(b.size()) / static_cast<double>(g.size());
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("shift_overlap on boxes") {
    Domain g = make_domain("box:n=4,d=2");
    CHECK(shift_overlap(g, LatticePoint{1, 0}) == 12);
    CHECK(shift_overlap(g, LatticePoint{0, 0}) == g.size());
    CHECK(shift_overlap(g, LatticePoint{5, 0}) == 0);
    CHECK_THROWS_AS(shift_overlap(g, LatticePoint{1}), std::invalid_argument);
}

TEST_CASE("lag_set examples") {
    Domain g = make_domain("box:n=4,d=2");
    CHECK(lag_set(g, LatticePoint{1, 1}).size() == 9);
    CHECK(lag_set(g, LatticePoint{0, 0}).size() == g.size());
    CHECK(lag_set(g, LatticePoint{4, 0}).size() == 0);
}

TEST_CASE("lag_set size equals shift_overlap at -k on random domains") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        for (std::size_t d = 1; d <= 3; ++d) {
            std::vector<LatticePoint> pts;
            for (int i = 0; i < 200; ++i) {
                LatticePoint p = LatticePoint::zero(d);
                for (std::size_t m = 0; m < d; ++m)
                    p[m] = static_cast<Coord>(detail::counter_bits(
                               seed, detail::kStreamSubset,
                               static_cast<std::uint64_t>(i * 8 + m)) %
                           9) -
                           4;
                pts.push_back(p);
            }
            Domain g(d, std::move(pts));
            for (int t = 0; t < 8; ++t) {
                LatticePoint k = LatticePoint::zero(d);
                for (std::size_t m = 0; m < d; ++m)
                    k[m] = static_cast<Coord>(detail::counter_bits(
                               seed + 17, detail::kStreamSubset,
                               static_cast<std::uint64_t>(t * 8 + m)) %
                           7) -
                           3;
                CHECK(lag_set(g, k).size() == shift_overlap(g, -k));
                CHECK(shift_overlap(g, k) == shift_overlap(g, -k));
            }
        }
    }
}

TEST_CASE("make_domain shapes") {
    CHECK(make_domain("box:n=3,d=2").size() == 9);

    Domain line = make_domain("line:n=5,d=2");
    CHECK(line.size() == 5);
    CHECK(line.contains(LatticePoint{3, 1}));
    CHECK_FALSE(line.contains(LatticePoint{3, 2}));

    Domain diag = make_domain("diagonal:n=4,d=3");
    CHECK(diag.size() == 4);
    CHECK(diag.contains(LatticePoint{2, 2, 2}));

    // 2 a t - t^2 points
    Domain l = make_domain("lshape:arm=60,thick=24");
    CHECK(l.size() == 2304);

    Domain u = make_domain("union2:n=3,gap=5,d=2");
    CHECK(u.size() == 18);

    CHECK_THROWS_AS(make_domain("box:n=0,d=2"), std::invalid_argument);
    CHECK_THROWS_AS(make_domain("wedge:n=3,d=2"), std::invalid_argument);
}

TEST_CASE("random subset is reproducible and roughly half") {
    Domain a = make_domain("random:n=8,d=2,keep=0.5,seed=7");
    Domain b = make_domain("random:n=8,d=2,keep=0.5,seed=7");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.points()[i] == b.points()[i]);
    CHECK(a.size() > 16);
    CHECK(a.size() < 48);

    Domain c = make_domain("random:n=8,d=2,keep=0.5,seed=8");
    CHECK(a.size() != c.size());  // different seed, almost surely different set
}

TEST_CASE("domain file round trip") {
    Domain g = make_domain("random:n=5,d=3,keep=0.6,seed=2");
    std::stringstream ss;
    write_domain(ss, g);
    Domain h = read_domain(ss);
    REQUIRE(g.size() == h.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.points()[i] == h.points()[i]);
}

TEST_CASE("domain deduplicates and orders points") {
    Domain g(2, {LatticePoint{2, 1}, LatticePoint{1, 1}, LatticePoint{2, 1}});
    REQUIRE(g.size() == 2);
    CHECK(g.points()[0] == LatticePoint{1, 1});
    CHECK(g.points()[1] == LatticePoint{2, 1});
}

TEST_SUITE_END();
