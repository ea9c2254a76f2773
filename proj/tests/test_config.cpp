#include <doctest.h>

#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "randfield/config.hpp"

using namespace randfield;
using nlohmann::json;

TEST_SUITE_BEGIN("config");

namespace {

ExperimentConfig small_clt_config() {
    ExperimentConfig c;
    c.subcommand = "verify-clt";
    c.model = "linear:2tap";
    c.noise = "normal";
    c.shape = "box:n=8,d=2";
    c.replicates = 300;
    c.seed = 5;
    c.tolerance = 0.2;
    return c;
}

json report_without_timestamp(const ExperimentConfig& c) {
    json r = run_report(c);
    r.erase("timestamp");
    return r;
}

}  // namespace

TEST_CASE("config round-trips through json") {
    ExperimentConfig c = small_clt_config();
    c.lags = {"1,0", "0,1"};
    c.m_values = {0, 1, 2};
    c.set_pairs = {"quadrant:t=0.5,0.5|quadrant:t=1,1"};
    const json j = config_to_json(c);
    CHECK(config_to_json(config_from_json(j)) == j);
}

TEST_CASE("reports reproduce byte-identically across runs and thread counts") {
    ExperimentConfig c = small_clt_config();
    const std::string first = report_without_timestamp(c).dump();
    const std::string second = report_without_timestamp(c).dump();
    CHECK(first == second);

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string single = report_without_timestamp(c).dump();
    omp_set_num_threads(saved > 1 ? saved : 2);
    const std::string multi = report_without_timestamp(c).dump();
    omp_set_num_threads(saved);
    CHECK(single == multi);
    CHECK(single == first);
#endif
}

TEST_CASE("config hash tracks content") {
    ExperimentConfig a = small_clt_config();
    ExperimentConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 6;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("run writes a report and returns the verification status") {
    ExperimentConfig c = small_clt_config();
    std::ostringstream out;
    CHECK(run(c, out) == 0);
    json report = json::parse(out.str());
    CHECK(report["tool"] == "randfield");
    CHECK(report["subcommand"] == "verify-clt");
    CHECK(report["pass"].get<bool>());
    CHECK(report["results"]["domain_size"] == 64);
    CHECK_FALSE(report.contains("_csv"));

    // an impossible tolerance turns the exit code into 2
    c.tolerance = 1e-9;
    std::ostringstream out2;
    CHECK(run(c, out2) == 2);
}

TEST_CASE("dispatch covers every subcommand") {
    std::ostringstream sink;

    ExperimentConfig sim;
    sim.subcommand = "simulate";
    sim.shape = "box:n=4,d=2";
    sim.model = "linear:iid";
    CHECK(run(sim, sink) == 0);

    ExperimentConfig dep;
    dep.subcommand = "dependence";
    dep.model = "linear:2tap";
    dep.dim = 1;
    dep.replicates = 300;
    CHECK(run(dep, sink) == 0);

    ExperimentConfig est;
    est.subcommand = "estimate";
    est.shape = "line:n=40,d=1";
    est.model = "linear:2tap";
    est.lags = {"1"};
    est.replicates = 20;
    CHECK(run(est, sink) == 0);

    ExperimentConfig mom;
    mom.subcommand = "verify-moment";
    mom.shape = "box:n=4,d=2";
    mom.model = "linear:2tap";
    mom.cases = 3;
    mom.replicates = 200;
    CHECK(run(mom, sink) == 0);

    ExperimentConfig var;
    var.subcommand = "verify-variance";
    var.model = "linear:2tap";
    var.dim = 1;
    var.box_sizes = {8, 16};
    CHECK(run(var, sink) == 0);

    ExperimentConfig trunc;
    trunc.subcommand = "verify-truncation";
    trunc.shape = "line:n=50,d=1";
    trunc.model = "linear:2tap";
    trunc.m_values = {0, 1};
    trunc.replicates = 300;
    CHECK(run(trunc, sink) == 0);

    ExperimentConfig ac;
    ac.subcommand = "verify-autocov";
    ac.shape = "line:n=150,d=1";
    ac.model = "linear:2tap";
    ac.lags = {"1"};
    ac.replicates = 1500;
    ac.tolerance = 0.2;
    CHECK(run(ac, sink) == 0);

    ExperimentConfig fc;
    fc.subcommand = "fclt";
    fc.model = "linear:iid";
    fc.grid_n = 8;
    fc.replicates = 500;
    fc.set_pairs = {"quadrant:t=0.5,0.5|quadrant:t=1,1"};
    CHECK(run(fc, sink) == 0);

    ExperimentConfig gap;
    gap.subcommand = "fclt";
    gap.model = "linear:iid";
    gap.grid_n = 8;
    gap.replicates = 500;
    gap.gap_set = "quadrant:t=0.55,0.55";
    CHECK(run(gap, sink) == 0);

    ExperimentConfig vc;
    vc.subcommand = "vc-index";
    vc.family = "quadrant";
    vc.vc_dim = 1;
    CHECK(run(vc, sink) == 0);

    // no closed forms: the exact mode falls back to empirical standardization
    ExperimentConfig sub;
    sub.subcommand = "verify-clt";
    sub.model = "subordinated:2tap:K=tanh";
    sub.shape = "box:n=10,d=2";
    sub.replicates = 400;
    sub.tolerance = 0.15;
    sub.mode = "exact";
    std::ostringstream cap;
    CHECK(run(sub, cap) == 0);
    CHECK(json::parse(cap.str())["results"]["mode"] == "empirical");
}

TEST_CASE("config errors surface as exceptions") {
    std::ostringstream sink;
    ExperimentConfig c;
    c.subcommand = "verify-clt";  // no shape, no domain file
    CHECK_THROWS_AS(run(c, sink), std::invalid_argument);

    c.subcommand = "no-such-command";
    CHECK_THROWS_AS(run(c, sink), std::invalid_argument);

    ExperimentConfig missing = small_clt_config();
    missing.shape = "";
    missing.domain_file = "/nonexistent/domain.txt";
    CHECK_THROWS_AS(run(missing, sink), std::runtime_error);
}

TEST_SUITE_END();
