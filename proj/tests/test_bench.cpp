#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "copulasim/bench.hpp"
#include "test_util.hpp"

using namespace csim;
using namespace testutil;

TEST_CASE("patch_sweep_timing") {
    const Image img = random_image(64, 64, 3, 1);
    const auto records = patch_sweep_timing(img, img, {8}, 3);
    REQUIRE(records.size() == 1);
    CHECK(records[0].patch_size == 8);
    CHECK(records[0].score == 1.0);
    CHECK(records[0].median_time_s > 0.0);
    CHECK(records[0].repetitions == 3);

    // Scores deterministic across repeated sweeps.
    const Image other = random_image(64, 64, 3, 2);
    const auto r1 = patch_sweep_timing(img, other, {4, 8}, 3);
    const auto r2 = patch_sweep_timing(img, other, {4, 8}, 3);
    CHECK(r1[0].score == r2[0].score);
    CHECK(r1[1].score == r2[1].score);

    CHECK_THROWS_AS(patch_sweep_timing(img, img, {128}, 3), PatchTooLarge);
    CHECK_THROWS_AS(patch_sweep_timing(img, img, {8}, 2), Error);
}

namespace {

BenchRecord planted(int p, double t) { return {p, 1024, 1024, 5, t, 1.0}; }

} // namespace

TEST_CASE("fit_complexity_trend recovers a planted log model") {
    std::vector<BenchRecord> records;
    for (int p : {2, 4, 8, 16, 32})
        records.push_back(planted(p, 3.0 * std::log(p) + 1.0));
    const auto report = fit_complexity_trend(records);
    CHECK(report.best == TrendModel::LogP);
    CHECK_FALSE(report.indistinguishable);
    for (const auto& f : report.fits) {
        if (f.model == TrendModel::LogP) {
            CHECK(f.scale == doctest::Approx(3.0).epsilon(1e-9));
            CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(f.rss < 1e-18);
        }
    }
}

TEST_CASE("fit_complexity_trend recovers a planted 1/P^2 model") {
    std::vector<BenchRecord> records;
    for (int p : {2, 4, 8, 16, 32})
        records.push_back(planted(p, 0.5 / (p * p) + 0.01));
    CHECK(fit_complexity_trend(records).best == TrendModel::InverseP2);
}

TEST_CASE("fit_complexity_trend degenerate and error cases") {
    std::vector<BenchRecord> flat;
    for (int p : {2, 4, 8, 16})
        flat.push_back(planted(p, 0.25));
    const auto report = fit_complexity_trend(flat);
    CHECK(report.indistinguishable);
    for (const auto& f : report.fits)
        CHECK(f.offset == doctest::Approx(0.25).epsilon(1e-9));

    CHECK_THROWS_AS(fit_complexity_trend({planted(2, 1), planted(16, 2)}),
                    InsufficientData);
    // Four records but only a 4x span in P.
    CHECK_THROWS_AS(fit_complexity_trend({planted(2, 1), planted(4, 1),
                                          planted(6, 1), planted(8, 1)}),
                    InsufficientData);
}
