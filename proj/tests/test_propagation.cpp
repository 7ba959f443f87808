#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "udn/propagation.hpp"

using namespace udn;

TEST_CASE("path_gain values") {
    CHECK(path_gain(1.0, 3.7) == 1.0);
    CHECK(path_gain(2.0, 2.0) == 0.25);
    // three-route cross-check of 2^-5.76
    const double via_pow = path_gain(2.0, 5.76);
    const double via_exp = std::exp(-5.76 * std::log(2.0));
    const double via_exp2 = std::exp2(-5.76);
    CHECK(via_pow == Catch::Approx(via_exp).epsilon(1e-14));
    CHECK(via_pow == Catch::Approx(via_exp2).epsilon(1e-14));
    CHECK_THROWS_AS(path_gain(0.0, 4.0), Error);
}

TEST_CASE("sinr_mu closed cases") {
    // interference-free link at unit distance with unit fading and noise:
    // 1 / (0 + 1); the denominator holds interference plus noise only
    const LinkSample serving{1.0, 1.0, false};
    CHECK(sinr_mu(serving, {}, 4.0, 1.0).value == Catch::Approx(1.0));
    // one interferer identical to the serving link, sigma2 = 0: ratio 1
    std::vector<LinkSample> ifs{{1.0, 1.0, false}};
    CHECK(sinr_mu(serving, ifs, 4.0, 0.0).value == Catch::Approx(1.0));
    // the same interferer with noise: 1/(1 + sigma2 r^alpha / g)
    CHECK(sinr_mu(serving, ifs, 4.0, 1.0).value == Catch::Approx(0.5));
}

TEST_CASE("sinr_mm_out closed cases") {
    CHECK(sinr_mm_out(std::nullopt, {}, 5.76, 1.0).value == 0.0);
    LinkSample blocked{1.0, 1.0, true};
    CHECK(sinr_mm_out(blocked, {}, 5.76, 1.0).value == 0.0);
    LinkSample serving{1.0, 1.0, false};
    CHECK(sinr_mm_out(serving, {}, 5.76, 1.0).value == Catch::Approx(1.0));
    // blocked or misaligned interferers do not contribute
    std::vector<MmInterferer> ifs{{{0.5, 3.0, true}, true}, {{0.5, 3.0, false}, false}};
    CHECK(sinr_mm_out(serving, ifs, 5.76, 1.0).value == Catch::Approx(1.0));
    // an aligned, clear interferer identical to the serving link halves it
    std::vector<MmInterferer> twin{{{1.0, 1.0, false}, true}};
    CHECK(sinr_mm_out(serving, twin, 5.76, 1.0).value == Catch::Approx(0.5));
}

TEST_CASE("sinr_mm_in closed cases") {
    LinkSample lone{2.0, 1.5, false};
    CHECK(sinr_mm_in(lone, {}, 0.5).value == Catch::Approx(1.5 * 0.25 / 0.5));
    // two co-located equal links, aligned, sigma2=0, unit lobe gain: ratio 1
    std::vector<MmInterferer> twin{{{2.0, 1.5, false}, true}};
    CHECK(sinr_mm_in(lone, twin, 0.0).value == Catch::Approx(1.0));
}

TEST_CASE("SINR is invariant under joint fading/noise rescale") {
    Rng rng(3);
    for (int iter = 0; iter < 300; ++iter) {
        const double c = std::exp(uniform(rng, -3.0, 3.0));
        LinkSample serving{uniform(rng, 0.1, 5.0), exp_unit(rng), false};
        std::vector<LinkSample> ifs;
        const int n = static_cast<int>(uniform_index(rng, 6));
        for (int i = 0; i < n; ++i) ifs.push_back({uniform(rng, 0.1, 20.0), exp_unit(rng), false});
        const double sigma2 = uniform(rng, 0.01, 2.0);
        const double base = sinr_mu(serving, ifs, 4.58, sigma2).value;
        LinkSample s2 = serving;
        s2.fading *= c;
        std::vector<LinkSample> ifs2 = ifs;
        for (auto& l : ifs2) l.fading *= c;
        const double scaled = sinr_mu(s2, ifs2, 4.58, sigma2 * c).value;
        CHECK(scaled == Catch::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("removing an interferer never decreases SINR") {
    Rng rng(5);
    for (int iter = 0; iter < 300; ++iter) {
        LinkSample serving{uniform(rng, 0.1, 5.0), exp_unit(rng), false};
        std::vector<LinkSample> ifs;
        const int n = 1 + static_cast<int>(uniform_index(rng, 6));
        for (int i = 0; i < n; ++i) ifs.push_back({uniform(rng, 0.1, 20.0), exp_unit(rng), false});
        const double full = sinr_mu(serving, ifs, 4.58, 0.3).value;
        std::vector<LinkSample> fewer(ifs.begin(), ifs.end() - 1);
        CHECK(sinr_mu(serving, fewer, 4.58, 0.3).value >= full);
    }
}

TEST_CASE("with sigma2=0 and one interferer, only the distance ratio and fading ratio matter") {
    Rng rng(7);
    for (int iter = 0; iter < 300; ++iter) {
        const double r = uniform(rng, 0.1, 3.0), ri = uniform(rng, 0.1, 30.0);
        const double g = exp_unit(rng), gi = exp_unit(rng);
        const double c = std::exp(uniform(rng, -2.0, 2.0));
        LinkSample s1{r, g, false};
        std::vector<LinkSample> i1{{ri, gi, false}};
        LinkSample s2{c * r, g, false};
        std::vector<LinkSample> i2{{c * ri, gi, false}};
        CHECK(sinr_mu(s1, i1, 4.0, 0.0).value == Catch::Approx(sinr_mu(s2, i2, 4.0, 0.0).value).epsilon(1e-12));
    }
}

TEST_CASE("draw_alignment probability") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) CHECK(draw_alignment(2.0 * std::numbers::pi, rng));

    const double theta = 10.0 * std::numbers::pi / 180.0;
    const double p = theta / (2.0 * std::numbers::pi);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += draw_alignment(theta, rng) ? 1 : 0;
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) <= 3.0 * se);
    CHECK_THROWS_AS(draw_alignment(0.0, rng), Error);
}
