#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gazetype/mapper.hpp"
#include "gazetype/random.hpp"
#include "oracles.hpp"

using namespace gazetype;

TEST_CASE("estimate_plane: straight-ahead gaze gives the x axis and identity rotation") {
    const std::vector<GazeVector> gaze(5, angles_to_unit_vector(0.0, 0.0));
    const auto est = estimate_plane(gaze);
    CHECK(est.normal.x == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::fabs(est.normal.y) < 1e-12);
    const GazeVector probe = est.rotation.apply(angles_to_unit_vector(10.0, 5.0));
    const GazeVector expect = angles_to_unit_vector(10.0, 5.0);
    CHECK(probe.x == Catch::Approx(expect.x).margin(1e-12));
}

TEST_CASE("estimate_plane: gaze symmetric about a direction recovers it") {
    const GazeVector d = angles_to_unit_vector(30.0, 10.0);
    std::vector<GazeVector> gaze;
    for (double delta : {2.0, 5.0, 9.0}) {
        gaze.push_back(angles_to_unit_vector(30.0 + delta, 10.0));
        gaze.push_back(angles_to_unit_vector(30.0 - delta, 10.0));
        gaze.push_back(angles_to_unit_vector(30.0, 10.0 + delta));
        gaze.push_back(angles_to_unit_vector(30.0, 10.0 - delta));
    }
    const auto est = estimate_plane(gaze);
    const double angle_deg = rad_to_deg(std::acos(std::clamp(est.normal.dot(d), -1.0, 1.0)));
    CHECK(angle_deg < 0.5);
}

TEST_CASE("estimate_plane: antipodal pair is degenerate") {
    CHECK_THROWS_AS(estimate_plane({{1, 0, 0}, {-1, 0, 0}}), DegenerateGaze);
    CHECK_THROWS_AS(estimate_plane({{1, 0, 0}}), DegenerateGaze);
}

TEST_CASE("pca_orientation: near-horizontal line gives the y axis") {
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back({i * 0.1, 1e-3 * std::sin(i * 0.7)});
    const auto axes = pca_orientation(pts);
    CHECK(std::fabs(std::fabs(axes.a) - 1.0) < 1e-6);
    CHECK(std::fabs(axes.b) < 1e-3);
}

TEST_CASE("pca_orientation: rotated typing cloud recovers the rotation angle") {
    Rng rng(29);
    const double rho = deg_to_rad(17.0);
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 400; ++i) {
        const double y = rng.uniform(0.0, 9.0) * 0.07;
        const double z = rng.uniform(-3.0, 0.0) * 0.07;
        pts.push_back({y * std::cos(rho) - z * std::sin(rho),
                       y * std::sin(rho) + z * std::cos(rho)});
    }
    const auto axes = pca_orientation(pts);
    CHECK(std::fabs(axes.horizontal_angle_deg() - 17.0) < 3.0);
}

TEST_CASE("pca_orientation matches an iterative eigensolver on random SPD matrices") {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        // Random covariance with a clear eigenvalue gap, realized as a
        // large sample so the empirical covariance is the target matrix.
        const double ang = rng.uniform(-M_PI / 2, M_PI / 2);
        const double l0 = rng.uniform(1.0, 5.0);
        const double l1 = l0 * rng.uniform(0.05, 0.8);
        const double c = std::cos(ang), s = std::sin(ang);
        const double a = c * c * l0 + s * s * l1;
        const double b = c * s * (l0 - l1);
        const double d = s * s * l0 + c * c * l1;

        // Four deterministic points whose sample covariance is exactly
        // [[a,b],[b,d]] (mean zero, n-1 = 3 normalization).
        // Using +/- sqrt(3/2) * eigenvector scaled by sqrt(lambda).
        const double k = std::sqrt(1.5);
        std::vector<PlanePoint> pts{{k * std::sqrt(l0) * c, k * std::sqrt(l0) * s},
                                    {-k * std::sqrt(l0) * c, -k * std::sqrt(l0) * s},
                                    {-k * std::sqrt(l1) * s, k * std::sqrt(l1) * c},
                                    {k * std::sqrt(l1) * s, -k * std::sqrt(l1) * c}};
        const auto axes = pca_orientation(pts);
        const auto ref = oracles::eigen_power_iteration(a, b, d);
        CHECK(std::fabs(axes.eig0 - ref.l0) < 1e-10);
        CHECK(std::fabs(axes.eig1 - ref.l1) < 1e-10);
        const double dot = std::fabs(axes.a * ref.v0y + axes.b * ref.v0z);
        CHECK(std::fabs(dot - 1.0) < 1e-10);
    }
}

TEST_CASE("pca_orientation rejects collinear points") {
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({i * 0.3, i * 0.15});
    CHECK_THROWS_AS(pca_orientation(pts), RankDeficient);
    CHECK_THROWS_AS(pca_orientation({{0, 0}, {1, 1}}), RankDeficient);
}

TEST_CASE("pca axes are orthonormal and transform isometrically") {
    Rng rng(53);
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back({rng.normal(0.0, 2.0), rng.normal(0.0, 0.7)});
    const auto axes = pca_orientation(pts);
    CHECK(std::fabs(axes.a * axes.a + axes.b * axes.b - 1.0) < 1e-9);
    CHECK(std::fabs(axes.c * axes.c + axes.d * axes.d - 1.0) < 1e-9);
    CHECK(std::fabs(axes.a * axes.c + axes.b * axes.d) < 1e-9);
    for (int i = 0; i < 50; ++i) {
        const PlanePoint p{rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
        const PlanePoint q{rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
        const PlanePoint tp = axes.transform(p), tq = axes.transform(q);
        const double d1 = std::hypot(p.y - q.y, p.z - q.z);
        const double d2 = std::hypot(tp.y - tq.y, tp.z - tq.z);
        CHECK(std::fabs(d1 - d2) < 1e-9);
        const PlanePoint back = axes.inverse(tp);
        CHECK(std::fabs(back.y - p.y) < 1e-9);
        CHECK(std::fabs(back.z - p.z) < 1e-9);
    }
}

namespace {

std::vector<PlanePoint> key_center_points(const KeyboardLayout& kb, const std::string& keys,
                                          double scale) {
    std::vector<PlanePoint> pts;
    for (char c : keys) {
        const KeyInfo* k = c == ' ' ? kb.find("SPACE") : kb.find(std::string(1, c));
        REQUIRE(k != nullptr);
        pts.push_back({k->cy * scale, k->cz * scale});
    }
    return pts;
}

}  // namespace

TEST_CASE("estimate_boundary maps a pangram's keys within half a pitch") {
    const auto kb = layouts::qwerty();
    const auto pts = key_center_points(kb, "a quick brown fox jumps over the lazy dog", 0.07);
    const auto frame = estimate_boundary(pts, kb);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PlanePoint l = frame.pca_to_layout(pts[i]);
        // Compare against the true center of the key this point came from.
        const std::string text = "a quick brown fox jumps over the lazy dog";
        const KeyInfo* k = text[i] == ' ' ? kb.find("SPACE") : kb.find(std::string(1, text[i]));
        CHECK(std::hypot(l.y - k->cy, l.z - k->cz) < 0.5);
    }
}

TEST_CASE("estimate_boundary rejects a single-key cluster") {
    Rng rng(61);
    std::vector<PlanePoint> pts;
    for (int i = 0; i < 30; ++i)
        pts.push_back({rng.uniform(-0.45, 0.45) * 0.07, rng.uniform(-0.45, 0.45) * 0.07});
    CHECK_THROWS_AS(estimate_boundary(pts, layouts::qwerty()), InsufficientSpread);
    CHECK_THROWS_AS(estimate_boundary({{0, 0}, {1, 1}, {2, 0}}, layouts::qwerty()),
                    InsufficientSpread);
}

TEST_CASE("estimate_boundary is scale free") {
    const auto kb = layouts::qwerty();
    const auto pts = key_center_points(kb, "a quick brown fox jumps over the lazy dog", 0.05);
    std::vector<PlanePoint> doubled;
    for (const auto& p : pts) doubled.push_back({2.0 * p.y, 2.0 * p.z});
    const auto f1 = estimate_boundary(pts, kb);
    const auto f2 = estimate_boundary(doubled, kb);
    CHECK(f2.pitch_plane_units() == Catch::Approx(2.0 * f1.pitch_plane_units()).epsilon(1e-9));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PlanePoint l1 = f1.pca_to_layout(pts[i]);
        const PlanePoint l2 = f2.pca_to_layout(doubled[i]);
        CHECK(l1.y == Catch::Approx(l2.y).margin(1e-9));
        CHECK(l1.z == Catch::Approx(l2.z).margin(1e-9));
    }
}
