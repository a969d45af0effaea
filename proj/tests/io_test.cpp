#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace steingauge;
using R = Rational;

namespace {

DensitySpec round_trip(const DensitySpec& in) {
    Json j = density_spec_to_json(in);
    return density_spec_from_json(j);
}

}  // namespace

TEST(SpecJson, PoissonRoundTrip) {
    Json j = {{"family", "poisson"}, {"params", {{"lambda", 2.5}}}};
    DensitySpec ds = density_spec_from_json(j);
    auto p = build_density<R>(ds);
    EXPECT_EQ(p.lo(), 0);
    EXPECT_GT(p.hi(), 10);
    DensitySpec again = round_trip(ds);
    auto p2 = build_density<R>(again);
    EXPECT_EQ(total_variation(p, p2), R(0));
}

TEST(SpecJson, ExplicitPmfWithSupport) {
    Json j = {{"family", "explicit"},
              {"support", {2, 4}},
              {"pmf", {0.25, 0.25, 0.5}}};
    auto p = build_density<double>(density_spec_from_json(j));
    EXPECT_EQ(p.lo(), 2);
    EXPECT_EQ(p.hi(), 4);
    EXPECT_DOUBLE_EQ(p.mass(4), 0.5);
}

TEST(SpecJson, TruncationBlockParsed) {
    Json j = {{"family", "poisson"},
              {"params", {{"lambda", 1.0}}},
              {"truncation", {{"tail_mass", 1e-6}}}};
    DensitySpec ds = density_spec_from_json(j);
    EXPECT_DOUBLE_EQ(ds.truncation.tail_mass, 1e-6);
    auto loose = build_density<R>(ds);
    Json tight = j;
    tight["truncation"]["tail_mass"] = 1e-14;
    auto strict = build_density<R>(density_spec_from_json(tight));
    EXPECT_LT(loose.hi(), strict.hi());
}

TEST(SpecJson, EveryFamilyBuilds) {
    std::vector<Json> specs = {
        {{"family", "poisson"}, {"params", {{"lambda", 1.5}}}},
        {{"family", "binomial"}, {"params", {{"n", 12}, {"p", 0.3}}}},
        {{"family", "polya_urn"}, {"params", {{"n", 6}, {"alpha", 2.0}, {"beta", 3.0}}}},
        {{"family", "ord"}, {"params", {{"a", 0}, {"s", {0.0, 1.0, 2.0, 3.0}},
                                        {"tau", {2.0, 2.0, 1.0, 1.0}}}}},
        {{"family", "gibbs"}, {"params", {{"omega", 1.0}, {"N", 6},
                                          {"V", {0.0, 0.1, 0.2, 0.1, 0.0, -0.1, -0.2}}}}},
        {{"family", "rank_limit"}, {"params", {{"theta", 2}}}},
        {{"family", "rank_finite"}, {"params", {{"theta", 2}, {"n", 4}}}},
    };
    for (const Json& j : specs) {
        DensitySpec ds = density_spec_from_json(j);
        auto p = build_density<R>(ds);
        R total(0);
        for (int64_t x = p.lo(); x <= p.hi(); ++x) total += p.mass(x);
        EXPECT_EQ(total, R(1)) << j["family"].get<std::string>();
        round_trip(ds);  // must emit something parseable
    }
}

TEST(SpecJson, ErrorsAreSpecErrors) {
    EXPECT_THROW(density_spec_from_json({{"family", "cauchy"}}), SpecError);
    EXPECT_THROW(density_spec_from_json({{"family", "poisson"}}), SpecError);
    EXPECT_THROW(density_spec_from_json(Json::array()), SpecError);
    // shape errors surface at parse time, value errors at build time
    auto neg = density_spec_from_json({{"family", "poisson"}, {"params", {{"lambda", -1.0}}}});
    EXPECT_THROW(build_density<R>(neg), std::invalid_argument);
    auto zero_n = density_spec_from_json({{"family", "binomial"},
                                          {"params", {{"n", 0}, {"p", 0.5}}}});
    EXPECT_THROW(build_density<R>(zero_n), std::invalid_argument);
}

TEST(SpecJson, FileLoader) {
    const char* path = "io_test_spec.json";
    {
        std::ofstream out(path);
        out << R"({"family":"binomial","params":{"n":5,"p":0.5}})";
    }
    DensitySpec ds = load_density_spec(path);
    auto p = build_density<R>(ds);
    EXPECT_EQ(p.hi(), 5);
    std::remove(path);
    EXPECT_THROW(load_density_spec("definitely_missing.json"), SpecError);
}

TEST(ReportJson, NumbersAndInfinities) {
    Json finite = json_number(1.25);
    EXPECT_TRUE(finite.is_number());
    Json inf = json_number(std::numeric_limits<double>::infinity(), "support");
    ASSERT_TRUE(inf.is_object());
    EXPECT_EQ(inf["value"], "inf");
    EXPECT_EQ(inf["reason"], "support");
    Json ninf = json_number(-std::numeric_limits<double>::infinity());
    EXPECT_EQ(ninf["value"], "-inf");
}

TEST(ReportJson, SuiteReportShape) {
    SuiteConfig cfg;
    cfg.pairs = 5;
    auto r = run_suite<R>(SuiteName::classic_pinsker, cfg);
    Json j = report_to_json(r, "pairs=5");
    EXPECT_EQ(j["suite"], "classic_pinsker");
    EXPECT_EQ(j["grid"], "pairs=5");
    EXPECT_EQ(j["backend"], "rational");
    ASSERT_TRUE(j["checks"].is_array());
    const Json& c0 = j["checks"][0];
    for (const char* k : {"name", "params", "lhs", "rhs", "slack", "passed",
                          "truncation_error", "provenance"})
        EXPECT_TRUE(c0.contains(k)) << k;
    EXPECT_EQ(c0["provenance"], "rational arithmetic, exact comparisons");
    EXPECT_EQ(j["summary"]["total"].get<int>(), r.total);
    EXPECT_EQ(j["summary"]["passed"].get<int>(), r.passed);
    EXPECT_EQ(j["summary"]["skipped"].get<int>(), r.skipped);
}

TEST(ReportJson, FloatProvenanceString) {
    SuiteConfig cfg;
    cfg.pairs = 3;
    auto r = run_suite<double>(SuiteName::classic_pinsker, cfg);
    Json j = report_to_json(r, "");
    EXPECT_EQ(j["backend"], "float");
    EXPECT_EQ(j["checks"][0]["provenance"], "double arithmetic, tolerance-padded comparisons");
}

TEST(ReportJson, RankExperimentShape) {
    auto ex = run_rank_experiment<R>(2, 3, 2, 1000, 42);
    Json j = rank_to_json(ex, "rational");
    EXPECT_EQ(j["experiment"], "rank");
    EXPECT_EQ(j["theta"].get<int64_t>(), 2);
    ASSERT_EQ(j["links"].size(), 3u);
    EXPECT_TRUE(j["links"][0].contains("chain_holds"));
    ASSERT_TRUE(j.contains("monte_carlo"));
    EXPECT_EQ(j["monte_carlo"]["samples"].get<int64_t>(), 1000);
    EXPECT_TRUE(j.contains("all_chains_hold"));
}

TEST(ReportCsv, QuotingAndHeader) {
    SuiteReport r;
    r.suite = "demo";
    BoundCheck c;
    c.name = "row";
    c.params = "a=1, b=\"x\"";
    c.lhs = 0.5;
    c.rhs = 1.0;
    c.slack = 0.5;
    c.passed = true;
    r.checks.push_back(c);
    std::ostringstream os;
    write_report_csv(r, os);
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "name,params,lhs,rhs,slack,passed,skipped,truncation_error,reason");
    EXPECT_NE(row.find("\"a=1, b=\"\"x\"\"\""), std::string::npos);
}

TEST(ReportJson, DeterministicDump) {
    SuiteConfig cfg;
    cfg.pairs = 10;
    auto a = report_to_json(run_suite<R>(SuiteName::classic_pinsker, cfg), "pairs=10").dump(2);
    auto b = report_to_json(run_suite<R>(SuiteName::classic_pinsker, cfg), "pairs=10").dump(2);
    EXPECT_EQ(a, b);
}
