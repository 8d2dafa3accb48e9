#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "copulasim/copula.hpp"
#include "copulasim/normal.hpp"
#include "test_util.hpp"

using namespace csim;
using namespace testutil;

TEST_CASE("compute_ranks matches hand-worked examples") {
    const std::vector<std::uint8_t> a{10, 30, 20, 20};
    CHECK(compute_ranks(a) == RankVector{1, 4, 2, 3});

    const std::vector<std::uint8_t> ties{5, 5, 5};
    CHECK(compute_ranks(ties) == RankVector{1, 2, 3});

    const std::vector<std::uint8_t> inc{1, 2, 3, 4};
    CHECK(compute_ranks(inc) == RankVector{1, 2, 3, 4});

    CHECK_THROWS_AS(compute_ranks(std::vector<std::uint8_t>{}), EmptyInput);
}

TEST_CASE("compute_ranks agrees with the pairwise-count oracle") {
    Rng rng(42);
    for (int p : {2, 4, 8}) {
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<std::uint8_t> vals(p * p);
            for (auto& v : vals) v = rng.byte();
            CHECK(compute_ranks(vals) == brute_force_ranks(vals));
        }
    }
}

TEST_CASE("normalize_ranks divides by N") {
    CHECK(normalize_ranks({1, 2, 3, 4}) ==
          std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(normalize_ranks({2, 1}) == std::vector<double>{1.0, 0.5});
    CHECK(normalize_ranks({1}) == std::vector<double>{1.0});
}

TEST_CASE("standard_normal_ppf") {
    CHECK(standard_normal_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(standard_normal_ppf(0.975) ==
          doctest::Approx(bisect_ppf(0.975)).epsilon(1e-6));
    CHECK(std::abs(standard_normal_ppf(0.975) - 1.959964) < 1e-6);

    // Symmetry.
    for (double u : {0.01, 0.2, 0.37, 0.49}) {
        CHECK(standard_normal_ppf(u) ==
              doctest::Approx(-standard_normal_ppf(1.0 - u)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(standard_normal_ppf(0.0), DomainError);
    CHECK_THROWS_AS(standard_normal_ppf(1.0), DomainError);
    CHECK_THROWS_AS(standard_normal_ppf(-0.3), DomainError);

    // Round trip against an independent erf CDF.
    for (int i = 1; i < 2000; ++i) {
        const double u = 1e-6 + (1.0 - 2e-6) * i / 2000.0;
        CHECK(std::abs(erf_cdf(standard_normal_ppf(u)) - u) <= 1e-9);
    }
}

TEST_CASE("patch_copula hand-worked examples") {
    // Degenerate 1x1 patch: u = 1 clamps to 0.5, value 0.
    const std::vector<std::uint8_t> one{42};
    const CopulaVector cv1 = patch_copula(one, 1, 1);
    CHECK(cv1.values.size() == 1);
    CHECK(cv1.values[0] == doctest::Approx(0.0).epsilon(1e-12));

    // P=2 single channel [0,255,128,64] -> ranks [1,4,3,2].
    const std::vector<std::uint8_t> block{0, 255, 128, 64};
    const CopulaVector cv = patch_copula(block, 2, 1);
    REQUIRE(cv.values.size() == 4);
    CHECK(cv.values[0] == doctest::Approx(-0.6745).epsilon(1e-3));
    CHECK(cv.values[1] == doctest::Approx(1.1503).epsilon(1e-3));
    CHECK(cv.values[2] == doctest::Approx(0.6745).epsilon(1e-3));
    CHECK(cv.values[3] == doctest::Approx(0.0).epsilon(1e-3));
    // Element-wise quantile oracle.
    const double clamped[] = {0.25, 0.875, 0.75, 0.5};
    for (int i = 0; i < 4; ++i)
        CHECK(cv.values[i] ==
              doctest::Approx(bisect_ppf(clamped[i])).epsilon(1e-9));

    // Constant patch: tie policy forces the identity permutation.
    const std::vector<std::uint8_t> flat(16, 7);
    const CopulaVector cvf = patch_copula(flat, 4, 1);
    const auto table = normal_score_table(16);
    for (int i = 0; i < 16; ++i) CHECK(cvf.values[i] == table[i]);
}

TEST_CASE("per-channel copula values form the fixed quantile multiset") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int p = 1 << (1 + rng.below(3)); // 2, 4 or 8
        const int n = p * p;
        std::vector<std::uint8_t> block(3 * n);
        for (auto& v : block) v = rng.byte();
        const CopulaVector cv = patch_copula(block, p, 3);
        auto expected = normal_score_table(n);
        std::sort(expected.begin(), expected.end());
        for (int c = 0; c < 3; ++c) {
            std::vector<double> got(cv.values.begin() + c * n,
                                    cv.values.begin() + (c + 1) * n);
            std::sort(got.begin(), got.end());
            CHECK(got == expected);
        }
        // Clamp bound holds for every element.
        const double bound = normal_score_table(n).back();
        for (double v : cv.values) CHECK(std::abs(v) <= bound + 1e-12);
    }
}

TEST_CASE("monotone remap leaves the copula unchanged") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 1 << (1 + rng.below(3));
        const int n = p * p;
        std::vector<std::uint8_t> block(n);
        for (auto& v : block) v = rng.byte();

        // Random strictly increasing remap of [0,255].
        std::vector<std::uint8_t> remap(256);
        int cur = rng.below(3);
        for (int v = 0; v < 256; ++v) {
            remap[v] = static_cast<std::uint8_t>(std::min(cur, 255));
            cur += 1 + rng.below(2); // strictly increasing until saturation
        }
        std::vector<std::uint8_t> remapped(n);
        bool strict = true;
        for (int i = 0; i < n; ++i) {
            remapped[i] = remap[block[i]];
            for (int j = 0; j < n; ++j)
                if ((block[i] < block[j]) != (remapped[i] < remapped[j]))
                    strict = false;
        }
        if (!strict) continue; // remap saturated over this patch's range

        const CopulaVector a = patch_copula(block, p, 1);
        const CopulaVector b = patch_copula(remapped, p, 1);
        CHECK(a.values == b.values); // bitwise
    }
}

TEST_CASE("image_copula structure") {
    const Image img = random_image(8, 8, 3, 3);
    const ImageCopula ic = image_copula(img, 8);
    CHECK(ic.n_patches() == 1);
    CHECK(ic.total_len() == 3 * 64);

    const Image flat(16, 16, 1, 99);
    const ImageCopula icf = image_copula(flat, 8);
    REQUIRE(icf.n_patches() == 4);
    for (int p = 1; p < 4; ++p)
        CHECK(icf.patch_copulas[p].values == icf.patch_copulas[0].values);
}

TEST_CASE("copula_distance") {
    const Image img = random_image(16, 16, 3, 5);
    const ImageCopula ic = image_copula(img, 8);
    CHECK(copula_distance(ic, ic) == 0.0);

    ImageCopula a, b;
    a.patch_copulas.push_back({1, 1, {0.0, 0.0}});
    b.patch_copulas.push_back({1, 1, {3.0, 4.0}});
    CHECK(copula_distance(a, b) == doctest::Approx(5.0).epsilon(1e-12));

    ImageCopula c;
    c.patch_copulas.push_back({1, 1, {1.0, 2.0, 3.0}});
    CHECK_THROWS_AS(copula_distance(a, c), LengthMismatch);

    // Independent element-wise summation oracle on a random pair.
    const ImageCopula x = image_copula(random_image(32, 32, 3, 8), 8);
    const ImageCopula y = image_copula(random_image(32, 32, 3, 9), 8);
    double sum = 0.0;
    for (std::size_t p = 0; p < x.patch_copulas.size(); ++p)
        for (std::size_t i = 0; i < x.patch_copulas[p].values.size(); ++i) {
            const double d =
                x.patch_copulas[p].values[i] - y.patch_copulas[p].values[i];
            sum += d * d;
        }
    CHECK(copula_distance(x, y) ==
          doctest::Approx(std::sqrt(sum)).epsilon(1e-9));
}

TEST_CASE("csim_score basics") {
    const Image x = random_image(64, 64, 3, 17);
    CHECK(csim_score(x, x, 8) == 1.0);

    const Image y = random_image(64, 64, 3, 18);
    CHECK(csim_score(x, y, 8) == csim_score(y, x, 8));
    const double s = csim_score(x, y, 8);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);

    const Image z = random_image(32, 64, 3, 19);
    CHECK_THROWS_AS(csim_score(x, z, 8), DimensionMismatch);
    CHECK_THROWS_AS(csim_score(x, y, 128), PatchTooLarge);
}

// End-to-end straight-line oracle: brute-force ranks, bisection PPF,
// element-wise accumulation.
static double oracle_csim(const Image& a, const Image& b, int p) {
    const int rows = a.height / p, cols = a.width / p;
    const int n = p * p;
    double sum = 0.0;
    std::size_t total_len = 0;
    for (int pr = 0; pr < rows; ++pr)
        for (int pc = 0; pc < cols; ++pc)
            for (int c = 0; c < a.channels; ++c) {
                std::vector<std::uint8_t> va(n), vb(n);
                for (int dy = 0; dy < p; ++dy)
                    for (int dx = 0; dx < p; ++dx) {
                        va[dy * p + dx] = a.at(pc * p + dx, pr * p + dy, c);
                        vb[dy * p + dx] = b.at(pc * p + dx, pr * p + dy, c);
                    }
                const auto ra = brute_force_ranks(va);
                const auto rb = brute_force_ranks(vb);
                auto score = [&](int r) {
                    double u = static_cast<double>(r) / n;
                    const double lo = 1.0 / (2.0 * n);
                    u = std::clamp(u, lo, 1.0 - lo);
                    return bisect_ppf(u);
                };
                for (int i = 0; i < n; ++i) {
                    const double d = score(ra[i]) - score(rb[i]);
                    sum += d * d;
                }
                total_len += n;
            }
    const double s = 1.0 - std::sqrt(sum) / std::sqrt(double(total_len));
    return s > 0.0 ? s : 0.0;
}

TEST_CASE("csim_score matches an independent re-derivation") {
    const Image a = random_image(64, 64, 3, 101);
    const Image b = random_image(64, 64, 3, 102);
    CHECK(csim_score(a, b, 8) ==
          doctest::Approx(oracle_csim(a, b, 8)).epsilon(1e-9));
}

TEST_CASE("csim_map") {
    const Image x = random_image(64, 64, 3, 23);
    const SimilarityMap identical = csim_map(x, x, 8);
    CHECK(identical.grid_rows == 8);
    CHECK(identical.grid_cols == 8);
    for (double s : identical.scores) CHECK(s == 1.0);

    // Permute pixels inside exactly one patch.
    Image y = x;
    std::swap(y.at(1, 1, 0), y.at(6, 6, 0));
    std::swap(y.at(2, 3, 1), y.at(5, 0, 1));
    const SimilarityMap map = csim_map(x, y, 8);
    int below_one = 0;
    for (double s : map.scores) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        if (s < 1.0) ++below_one;
    }
    CHECK(below_one == 1);
    CHECK(map.at(0, 0) < 1.0);
}
