#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "randfield/normal.hpp"

using namespace randfield;

TEST_SUITE_BEGIN("normal");

namespace {

// independent quantile oracle: bisection on the tail-appropriate CDF, which
// keeps the target resolvable in double precision near 0 and 1
double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    if (p <= 0.5) {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
        }
    } else {
        const double q = 1.0 - p;  // exact for p >= 0.5
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (0.5 * std::erfc(mid / std::sqrt(2.0)) > q ? lo : hi) = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cdf matches reference values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_cdf(6.0) == doctest::Approx(1.0 - 9.865876450376946e-10).epsilon(1e-12));
    CHECK(normal_cdf(2.0, 2.0, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("quantile inverts the cdf to 1e-10") {
    for (double p : {1e-8, 1e-4, 0.025, 0.2, 0.5, 0.8, 0.975, 1.0 - 1e-4, 1.0 - 1e-8}) {
        const double z = normal_quantile(p);
        CHECK(std::abs(z - quantile_by_bisection(p)) < 1e-10);
        CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-11));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("quantile rejects values outside [0,1]") {
    CHECK_THROWS_AS(normal_quantile(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.5), std::invalid_argument);
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(std::isinf(normal_quantile(1.0)));
}

TEST_SUITE_END();
