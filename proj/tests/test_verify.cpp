#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "randfield/verify.hpp"

using namespace randfield;

TEST_SUITE_BEGIN("verify");

namespace {

const NoiseSpec kNormal = NoiseSpec::parse("normal");

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed) {
    NoiseField field{kNormal, seed, 0};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = field.sample(LatticePoint{static_cast<Coord>(i)});
    return out;
}

}  // namespace

TEST_CASE("empirical distribution sorts and validates") {
    CHECK_THROWS_AS(EmpiricalDistribution({1.0}), std::invalid_argument);
    EmpiricalDistribution e({3.0, -1.0, 2.0});
    CHECK(e.values()[0] == -1.0);
    CHECK(e.values()[2] == 3.0);
    CHECK(e.cdf(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(e.cdf_left(2.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("kolmogorov distance") {
    // point mass at 0 vs N(0,1): sup at the jump is exactly 1/2
    EmpiricalDistribution point({0.0, 0.0});
    CHECK(kolmogorov_distance(point, {0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));

    // duplicate-aware two-value case, hand computed
    EmpiricalDistribution two({0.0, 0.0, 1.0, 1.0});
    const double expected = 0.5;  // |F(0-)-Phi(0)| = .5 beats |1-Phi(1)| etc.
    CHECK(kolmogorov_distance(two, {0.0, 1.0}) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(kolmogorov_distance(point, {0.0, 0.0}), std::invalid_argument);

    // 10^6 true normal draws: DKW scale
    EmpiricalDistribution big(normal_draws(1000000, 3));
    CHECK(kolmogorov_distance(big, {0.0, 1.0}) < 0.002);
}

TEST_CASE("levy distance") {
    // identical samples vs their own law: at the Monte Carlo floor
    EmpiricalDistribution e(normal_draws(20000, 5));
    const double k = kolmogorov_distance(e, {0.0, 1.0});
    const double l = levy_distance(e, {0.0, 1.0});
    CHECK(l <= k + 1e-12);
    CHECK(l < 0.02);

    // point mass at 0 vs point mass at a: min(a, 1)
    EmpiricalDistribution point({0.0, 0.0});
    CHECK(levy_distance(point, {0.4, 0.0}) == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(levy_distance(point, {3.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(levy_distance(point, {0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-3));

    // metric domination on assorted mismatched pairs
    for (double mean : {-0.5, 0.0, 0.8}) {
        for (double var : {0.25, 1.0, 4.0}) {
            EmpiricalDistribution sample(normal_draws(4000, 7));
            CHECK(levy_distance(sample, {mean, var}) <=
                  kolmogorov_distance(sample, {mean, var}) + 1e-12);
        }
    }
}

TEST_CASE("clt_experiment: iid normal field sits at the DKW floor") {
    FieldModel iid = FieldModel::linear(LinearKernel::named("iid", 2), kNormal);
    Domain g = make_domain("box:n=16,d=2");
    CLTReport r = clt_experiment(iid, g, 3000, 11, StandardizationMode::ExactSigma, 0.04);
    CHECK(r.pass);
    CHECK(r.levy <= r.kolmogorov + 1e-12);
    CHECK(r.comparison_variance == doctest::Approx(1.0).epsilon(1e-12));

    // every shape in the battery matches N(0,1) under exact standardization
    for (const char* shape :
         {"line:n=256,d=2", "lshape:arm=32,thick=8", "random:n=24,d=2,keep=0.5,seed=2",
          "union2:n=11,gap=7,d=2", "diagonal:n=256,d=2"}) {
        Domain h = make_domain(shape);
        CLTReport rr = clt_experiment(iid, h, 3000, 13, StandardizationMode::ExactSigma, 0.04);
        INFO(shape);
        CHECK(rr.pass);
    }
}

TEST_CASE("clt_experiment modes and degenerate kernels") {
    FieldModel model = FieldModel::linear(LinearKernel::named("2tap", 2), kNormal);
    Domain g = make_domain("box:n=24,d=2");
    CLTReport longrun = clt_experiment(model, g, 2000, 17, StandardizationMode::Longrun, 0.1);
    CHECK(longrun.comparison_variance == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(longrun.pass);

    CLTReport emp = clt_experiment(model, g, 2000, 17, StandardizationMode::Empirical, 0.1);
    CHECK(emp.pass);

    FieldModel degenerate = FieldModel::linear(
        LinearKernel(2, {{LatticePoint{0, 0}, 1.0}, {LatticePoint{1, 0}, -1.0}}), kNormal);
    CLTReport dg = clt_experiment(degenerate, g, 500, 19, StandardizationMode::Longrun, 0.1);
    CHECK(dg.degenerate);
    CHECK_FALSE(dg.pass);
}

TEST_CASE("clt distance shrinks when the domain grows 4x") {
    // Rademacher noise keeps the finite-size error visible for all families.
    const NoiseSpec rad = NoiseSpec::parse("rademacher");
    std::vector<FieldModel> models;
    models.push_back(FieldModel::linear(LinearKernel::named("iid", 1), rad));
    models.push_back(FieldModel::volterra(VolterraKernel::named("lag1", 1), rad));
    models.push_back(
        FieldModel::subordinated(LinearKernel::named("2tap", 1), LipschitzMap::Abs, rad));
    for (const auto& model : models) {
        Domain small = make_domain("line:n=16,d=1");
        Domain large = make_domain("line:n=64,d=1");
        const StandardizationMode mode = model.has_closed_forms()
                                             ? StandardizationMode::ExactSigma
                                             : StandardizationMode::Empirical;
        CLTReport a = clt_experiment(model, small, 6000, 23, mode, 1.0);
        CLTReport b = clt_experiment(model, large, 6000, 23, mode, 1.0);
        INFO(static_cast<int>(model.kind()));
        CHECK(b.kolmogorov < a.kolmogorov);
    }
}

TEST_CASE("moment inequality: single-site instance and homogeneity") {
    FieldModel iid = FieldModel::linear(LinearKernel::named("iid", 1), kNormal);
    Domain site(1, {LatticePoint{0}});
    MomentReport one = moment_inequality_check(iid, site, {1.0}, 2.0, 2000, 3);
    CHECK(one.pass);
    REQUIRE(one.cases.size() == 1);
    // ||X_0||_2 = 1 <= sqrt(2p) Delta_p = 2 sqrt(2)
    REQUIRE(one.cases[0].exact.has_value());
    CHECK(*one.cases[0].exact == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.cases[0].bound == doctest::Approx(2.0 * std::sqrt(2.0) * 1.0).epsilon(1e-12));

    // doubling the weights doubles both sides
    FieldModel model = FieldModel::linear(LinearKernel::named("2tap", 1), kNormal);
    Domain g = make_domain("line:n=9,d=1");
    std::vector<double> w(g.size()), w2(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = 0.1 * static_cast<double>(i + 1);
        w2[i] = 2.0 * w[i];
    }
    MomentReport a = moment_inequality_check(model, g, w, 2.0, 1500, 5);
    MomentReport b = moment_inequality_check(model, g, w2, 2.0, 1500, 5);
    CHECK(b.cases[0].bound == doctest::Approx(2.0 * a.cases[0].bound).epsilon(1e-12));
    CHECK(b.cases[0].estimate == doctest::Approx(2.0 * a.cases[0].estimate).epsilon(1e-12));
}

TEST_CASE("moment inequality battery: no violations on the 8x8 box") {
    FieldModel model = FieldModel::linear(LinearKernel::named("2tap", 2), kNormal);
    Domain g = make_domain("box:n=8,d=2");
    for (double p : {2.0, 4.0}) {
        MomentReport r = moment_inequality_battery(model, g, p, 20, 400, 7);
        INFO("p=", p);
        CHECK(r.violations == 0);
        CHECK(r.exact_violations == 0);
        CHECK(r.pass);
    }
}

TEST_CASE("variance limit check") {
    FieldModel model = FieldModel::linear(LinearKernel::named("2tap", 1), kNormal);
    VarianceLimitReport r = variance_limit_check(model, {8, 16, 32, 64});
    CHECK(r.limit == doctest::Approx(4.0).epsilon(1e-14));
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        // closed form: ratio = 4 - 2/n, relative error exactly 1/(2n)
        CHECK(row.ratio == doctest::Approx(4.0 - 2.0 / row.n).epsilon(1e-14));
        CHECK(row.rel_error == doctest::Approx(0.5 / row.n).epsilon(1e-12));
    }
    CHECK(r.decreasing);
    CHECK(r.pass);

    // iid: exact at every size
    FieldModel iid = FieldModel::linear(LinearKernel::named("iid", 1), kNormal);
    VarianceLimitReport ri = variance_limit_check(iid, {4, 8});
    for (const auto& row : ri.rows) CHECK(row.rel_error <= 1e-15);
    CHECK(ri.pass);

    FieldModel degenerate = FieldModel::linear(
        LinearKernel(1, {{LatticePoint{0}, 1.0}, {LatticePoint{1}, -1.0}}), kNormal);
    CHECK(variance_limit_check(degenerate, {8, 16}).degenerate);
}

TEST_CASE("truncation gap: exact zero at full window, tail oracle below") {
    const double c = 0.5;
    FieldModel model = FieldModel::linear(
        LinearKernel(1, {{LatticePoint{0}, 1.0}, {LatticePoint{2}, c}}), kNormal);
    Domain g = make_domain("line:n=200,d=1");
    TruncationReport r = truncation_gap_check(model, g, {0, 1, 2, 3}, 3000, 11);
    CHECK(r.zero_at_full_window);
    CHECK(r.nonincreasing);
    CHECK(r.pass);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[2].gap == 0.0);
    CHECK(r.rows[3].gap == 0.0);
    // m = 0 and m = 1 both drop exactly the tail tap: identical statistics
    CHECK(r.rows[0].gap == r.rows[1].gap);

    // tail-kernel variance oracle: ||S - Sbar||^2 = c^2 |Gamma| sigma_eps^2
    const double sigma2 = variance_exact(model, g);
    const double oracle = std::sqrt(c * c * 200.0 / sigma2);
    CHECK(std::abs(r.rows[1].gap - oracle) <= 3.0 * r.rows[1].se);
}

TEST_CASE("autocovariance CLT experiment") {
    FieldModel iid = FieldModel::linear(LinearKernel::named("iid", 1), kNormal);
    Domain g = make_domain("line:n=2001,d=1");
    AutocovCLTReport r = autocov_clt_experiment(iid, g, LatticePoint{1}, 5000, 13, 0.04);
    CHECK(r.xi_size == 2000);
    CHECK(r.pass);
    CHECK(r.levy <= r.kolmogorov + 1e-12);
    CHECK(std::abs(r.gamma_mean - r.gamma_exact) <= 3.0 * r.gamma_se);

    FieldModel zero = FieldModel::linear(LinearKernel(1, {}), kNormal);
    AutocovCLTReport dz = autocov_clt_experiment(zero, g, LatticePoint{1}, 100, 13, 0.04);
    CHECK(dz.degenerate);

    CHECK_THROWS_AS(autocov_clt_experiment(iid, g, LatticePoint{3000}, 100, 13, 0.04),
                    std::invalid_argument);
}

TEST_SUITE_END();
