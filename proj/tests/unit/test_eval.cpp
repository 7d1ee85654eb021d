#include <doctest.h>

#include <numeric>

#include "gkeca/eval.hpp"
#include "test_support.hpp"

using namespace gkeca;
using namespace gkeca::testing;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

PipelineConfig small_config() {
    PipelineConfig cfg;
    cfg.image_size = {40, 40};
    cfg.gabor.num_scales = 2;
    cfg.gabor.num_orientations = 4;
    cfg.gabor.window = 15;
    cfg.block_size = 5;
    cfg.threads = 2;
    return cfg;
}

// Identities 0 and 1 are enrolled; identity 2 only appears as an impostor.
LabeledDataset synthetic_dataset(std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset ds;
    auto add = [&](int id, Role role, int count) {
        const auto base = synthetic_identity(id, 40, 40);
        for (int i = 0; i < count; ++i) {
            ds.entries.push_back({"id" + std::to_string(id) + "_" + to_string(role) + std::to_string(i),
                                  "s" + std::to_string(id), role, perturbed(base, rng, 4.0)});
        }
    };
    add(0, Role::train, 4);
    add(1, Role::train, 4);
    add(0, Role::positive_test, 3);
    add(1, Role::positive_test, 3);
    add(2, Role::negative_test, 4);
    return ds;
}

std::vector<ScoredProbe> probes(std::initializer_list<std::tuple<Role, const char*, const char*, double>> list) {
    std::vector<ScoredProbe> out;
    for (const auto& [role, truth, pred, d] : list) out.push_back({role, truth, pred, d});
    return out;
}

}  // namespace

TEST_CASE("metric formulas on the published counts") {
    const auto r1 = compute_metrics({1481, 0, 0, 119});
    REQUIRE(r1.sensitivity.has_value());
    CHECK(r1.sensitivity->percent(2) == "92.56");
    CHECK(r1.sensitivity->percent(1) == "92.6");
    CHECK(*r1.sensitivity == Rate{1481, 1600});
    CHECK_FALSE(r1.specificity.has_value());
    CHECK_FALSE(r1.false_positive_rate.has_value());

    const auto r2 = compute_metrics({0, 20, 1380, 0});
    REQUIRE(r2.specificity.has_value());
    CHECK(r2.specificity->percent(2) == "98.57");
    CHECK(r2.false_positive_rate->percent(2) == "1.43");

    CHECK(compute_metrics({773, 0, 0, 27}).sensitivity->percent(2) == "96.63");
    CHECK(compute_metrics({773, 0, 0, 27}).sensitivity->percent(1) == "96.6");

    const auto full = compute_metrics({1481, 31, 1369, 119});
    CHECK(full.accuracy == Rate{2850, 3000});
    CHECK(full.accuracy.percent(1) == "95.0");
    CHECK(full.false_negative_rate->percent(1) == "7.4");
    CHECK(*full.false_negative_rate == full.sensitivity->complement());
    CHECK(*full.false_positive_rate == full.specificity->complement());

    CHECK_THROWS_AS(compute_metrics({0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("rate rendering rounds half away from zero exactly") {
    CHECK(Rate{1, 8}.percent(1) == "12.5");
    CHECK(Rate{1, 8}.percent(0) == "13");
    CHECK(Rate{1, 16}.percent(2) == "6.25");
    CHECK(Rate{1, 16}.percent(1) == "6.3");
    CHECK(Rate{1, 3}.fraction(4) == "0.3333");
    CHECK(Rate{2, 3}.fraction(4) == "0.6667");
    CHECK(Rate{5, 5}.percent(2) == "100.00");
    CHECK(Rate{0, 7}.percent(2) == "0.00");
    CHECK(Rate{1481, 1600}.fraction(4) == "0.9256");

    // agreement with long-double arithmetic on random counts
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto den = static_cast<std::uint64_t>(uniform_int(rng, 1, 100000));
        const auto num = static_cast<std::uint64_t>(uniform_int(rng, 0, static_cast<int>(den)));
        const long double scaled = static_cast<long double>(num) * 10000.0L / den;
        const auto rounded = static_cast<std::uint64_t>(std::floor(scaled + 0.5L));
        const auto text = Rate{num, den}.percent(2);
        const auto expected = std::to_string(rounded / 100) + "." + (rounded % 100 < 10 ? "0" : "") +
                              std::to_string(rounded % 100);
        // skip values within float noise of a half, where long double cannot arbitrate
        if (std::abs(scaled - std::floor(scaled) - 0.5L) > 1e-9L) CHECK(text == expected);
    }
}

TEST_CASE("counting at a threshold") {
    const auto ps = probes({{Role::positive_test, "a", "a", 1.0},
                            {Role::positive_test, "a", "b", 0.5},
                            {Role::positive_test, "b", "b", 3.0},
                            {Role::negative_test, "z", "a", 2.0},
                            {Role::negative_test, "z", "b", 4.0}});
    CHECK(count_at(ps, 2.5) == ConfusionCounts{1, 1, 1, 2});
    CHECK(count_at(ps, 1.0) == ConfusionCounts{1, 0, 2, 2});
    CHECK(count_at(ps, inf) == ConfusionCounts{2, 2, 0, 1});
    CHECK(count_at(ps, -inf) == ConfusionCounts{0, 0, 2, 3});
    CHECK_THROWS_AS(count_at(ps, std::nan("")), std::invalid_argument);
}

TEST_CASE("counts are monotone in tau") {
    Rng rng(2);
    std::vector<ScoredProbe> ps;
    for (int i = 0; i < 60; ++i) {
        const bool pos = i % 2 == 0;
        ps.push_back({pos ? Role::positive_test : Role::negative_test, "a", uniform(rng, 0, 1) < 0.8 ? "a" : "b",
                      uniform(rng, 0, 10)});
    }
    ConfusionCounts prev = count_at(ps, -inf);
    for (double tau = -1; tau <= 11; tau += 0.25) {
        const auto c = count_at(ps, tau);
        CHECK(c.tp + c.fp >= prev.tp + prev.fp);
        CHECK(c.tn + c.fn <= prev.tn + prev.fn);
        CHECK(c.total() == ps.size());
        prev = c;
    }
}

TEST_CASE("protocol on synthetic identities") {
    const auto ds = synthetic_dataset(3);
    const auto cfg = small_config();

    SUBCASE("degenerate thresholds") {
        const auto open = run_protocol(ds, cfg, inf, Measure::l2);
        CHECK(open.tn == 0);
        CHECK(open.fp == 4);
        const auto closed = run_protocol(ds, cfg, -inf, Measure::l2);
        CHECK(closed.tp == 0);
        CHECK(closed.fp == 0);
        CHECK(closed.fn == 6);
        CHECK(closed.tn == 4);
    }
    SUBCASE("deterministic and thread-count independent") {
        std::vector<const DatasetEntry*> train = ds.with_role(Role::train);
        auto c1 = cfg;
        c1.threads = 1;
        auto c4 = cfg;
        c4.threads = 4;
        const auto p1 = train_pipeline(train, c1);
        const auto p4 = train_pipeline(train, c4);
        for (auto m : kAllMeasures) {
            const auto s1 = score_probes(p1, ds, m);
            const auto s4 = score_probes(p4, ds, m);
            REQUIRE(s1.size() == s4.size());
            for (std::size_t i = 0; i < s1.size(); ++i) {
                CHECK(s1[i].distance == s4[i].distance);
                CHECK(s1[i].predicted == s4[i].predicted);
            }
        }
    }
    SUBCASE("role requirements") {
        LabeledDataset no_neg;
        for (const auto& e : ds.entries) {
            if (e.role != Role::negative_test) no_neg.entries.push_back(e);
        }
        CHECK_THROWS_AS(run_protocol(no_neg, cfg, 1.0, Measure::l2), std::invalid_argument);
        CHECK_THROWS_AS(run_protocol(ds, cfg, std::nan(""), Measure::l2), std::invalid_argument);

        auto bad = ds;
        bad.entries.back().label = "s0";  // impostor carrying an enrolled label
        CHECK_THROWS_AS(run_protocol(bad, cfg, 1.0, Measure::l2), std::invalid_argument);
    }
}

TEST_CASE("report formatting") {
    CHECK(report_csv_header() == "measure,tau,TP,FP,TN,FN,sensitivity,specificity,fpr,fnr,accuracy");
    const ReportRow row{Measure::l1, 0.5, compute_metrics({3, 1, 2, 1})};
    CHECK(report_csv_row(row) == "l1,0.5,3,1,2,1,0.750000,0.666667,0.333333,0.250000,0.714286");
    const ReportRow half{Measure::cosine, inf, compute_metrics({2, 0, 0, 0})};
    CHECK(report_csv_row(half) == "cosine,inf,2,0,0,0,1.000000,NA,NA,0.000000,1.000000");
    const auto table = report_table({row, half}, 1234);
    CHECK(table.find("1234") != std::string::npos);
    CHECK(table.find("cosine") != std::string::npos);

    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-inf) == "-inf");
    CHECK(format_double(1e300) == "1e+300");
}
