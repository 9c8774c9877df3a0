#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "gazetype/random.hpp"
#include "gazetype/stability.hpp"
#include "oracles.hpp"

using namespace gazetype;

namespace {

std::vector<GazeSample> make_segment(const std::vector<std::pair<double, double>>& angles) {
    std::vector<GazeSample> seg;
    double t = 0.0;
    for (const auto& [yaw, pitch] : angles) {
        seg.push_back({t, yaw, pitch, 1.0});
        t += 33.0;
    }
    return seg;
}

}  // namespace

TEST_CASE("constant gaze has stability 1 everywhere") {
    std::vector<std::pair<double, double>> angles(50, {12.5, -8.0});
    const auto s = stability(std::span<const GazeSample>(make_segment(angles)), 5);
    REQUIRE(s.size() == 46);
    for (double v : s.values) CHECK(v == 1.0);
}

TEST_CASE("half/half orthogonal window gives S = 0.5") {
    // Window of 4: two frames straight ahead, two at 90 degrees yaw.
    // Pairs split evenly between cos=1 and cos=0.
    std::vector<std::pair<double, double>> angles{{0, 0}, {0, 0}, {90, 0}, {90, 0}};
    const auto s = stability(std::span<const GazeSample>(make_segment(angles)), 4);
    REQUIRE(s.size() == 1);
    CHECK(s.values[0] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("stability matches the O(N^2) brute force within 1e-12") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int window = 2 + static_cast<int>(rng.uniform_index(11));
        std::vector<std::pair<double, double>> angles;
        for (int i = 0; i < 100; ++i)
            angles.push_back({rng.uniform(-60.0, 60.0), rng.uniform(-40.0, 40.0)});
        const auto seg = make_segment(angles);
        const auto fast = stability(std::span<const GazeSample>(seg), window);
        const auto brute = oracles::stability_brute_force(seg, window);
        REQUIRE(fast.size() == brute.size());
        for (std::size_t i = 0; i < brute.size(); ++i)
            CHECK(std::fabs(fast.values[i] - brute[i]) < 1e-12);
    }
}

TEST_CASE("stability never exceeds 1 and equals 1 only for coincident directions") {
    Rng rng(23);
    std::vector<std::pair<double, double>> angles;
    for (int i = 0; i < 200; ++i)
        angles.push_back({rng.uniform(-30.0, 30.0), rng.uniform(-20.0, 20.0)});
    const auto s = stability(std::span<const GazeSample>(make_segment(angles)), 6);
    for (double v : s.values) {
        CHECK(v <= 1.0);
        CHECK(v < 1.0);  // random directions never coincide
    }
}

TEST_CASE("segments shorter than the window are rejected") {
    std::vector<std::pair<double, double>> angles{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(stability(std::span<const GazeSample>(make_segment(angles)), 5),
                    SegmentTooShort);
    CHECK_THROWS_AS(stability(std::span<const GazeSample>(make_segment(angles)), 1),
                    SegmentTooShort);
}
