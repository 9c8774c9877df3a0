#include <catch2/catch_amalgamated.hpp>

#include "gazetype/geometry.hpp"
#include "gazetype/random.hpp"

using namespace gazetype;

TEST_CASE("angles_to_unit_vector hits the axis cases") {
    const GazeVector straight = angles_to_unit_vector(0.0, 0.0);
    CHECK(straight.x == Catch::Approx(1.0).margin(1e-15));
    CHECK(straight.y == Catch::Approx(0.0).margin(1e-15));
    CHECK(straight.z == Catch::Approx(0.0).margin(1e-15));

    const GazeVector side = angles_to_unit_vector(90.0, 0.0);
    CHECK(side.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(side.y == Catch::Approx(1.0).margin(1e-15));
    CHECK(side.z == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("angles_to_unit_vector is unit norm across the ingest range") {
    Rng rng(42);
    for (int i = 0; i < 10000; ++i) {
        const double yaw = rng.uniform(-120.0, 120.0);
        const double pitch = rng.uniform(-70.0, 70.0);
        CHECK(std::fabs(angles_to_unit_vector(yaw, pitch).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("angle round trip reproduces inputs within 1e-9 degrees") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double yaw = rng.uniform(-120.0, 120.0);
        const double pitch = rng.uniform(-70.0, 70.0);
        double yaw2, pitch2;
        unit_vector_to_angles(angles_to_unit_vector(yaw, pitch), yaw2, pitch2);
        CHECK(std::fabs(yaw - yaw2) < 1e-9);
        CHECK(std::fabs(pitch - pitch2) < 1e-9);
    }
}

TEST_CASE("project_to_plane basics") {
    const PlanePoint origin = project_to_plane({1.0, 0.0, 0.0}, 1.0);
    CHECK(origin.y == 0.0);
    CHECK(origin.z == 0.0);

    const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
    const PlanePoint yawed = project_to_plane({c, s, 0.0}, 1.0);
    CHECK(yawed.y == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(yawed.z == Catch::Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(project_to_plane({0.0, 1.0, 0.0}, 1.0), GazeAwayFromPlane);
    CHECK_THROWS_AS(project_to_plane({-0.5, 0.5, 0.0}, 1.0), GazeAwayFromPlane);
}

TEST_CASE("project_to_plane is homogeneous in the plane distance") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const GazeVector v = angles_to_unit_vector(rng.uniform(-80.0, 80.0),
                                                   rng.uniform(-60.0, 60.0));
        const double c = rng.uniform(0.1, 10.0);
        const PlanePoint p1 = project_to_plane(v, 1.0);
        const PlanePoint pc = project_to_plane(v, c);
        CHECK(pc.y == Catch::Approx(c * p1.y).margin(1e-12));
        CHECK(pc.z == Catch::Approx(c * p1.z).margin(1e-12));
    }
}

TEST_CASE("rotation_between maps from onto to") {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const GazeVector a = angles_to_unit_vector(rng.uniform(-179.0, 179.0),
                                                   rng.uniform(-89.0, 89.0));
        const GazeVector b = angles_to_unit_vector(rng.uniform(-179.0, 179.0),
                                                   rng.uniform(-89.0, 89.0));
        const GazeVector r = rotation_between(a, b).apply(a);
        CHECK(std::fabs(r.x - b.x) < 1e-12);
        CHECK(std::fabs(r.y - b.y) < 1e-12);
        CHECK(std::fabs(r.z - b.z) < 1e-12);
    }
    // Antiparallel still lands correctly.
    const GazeVector flipped = rotation_between({1, 0, 0}, {-1, 0, 0}).apply({1, 0, 0});
    CHECK(std::fabs(flipped.x + 1.0) < 1e-12);
}
