#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gazetype/posterior.hpp"
#include "gazetype/random.hpp"
#include "oracles.hpp"

using namespace gazetype;

TEST_CASE("a frame at a key center with tiny sigma concentrates on that key") {
    const auto kb = layouts::qwerty();
    const KeyInfo* h = kb.find("h");
    const auto post = key_posterior_from_points({{h->cy, h->cz}}, kb, 0.01, 5);
    CHECK(kb.keys[post.top[0].first].id == "h");
    CHECK(post.top[0].second > 1.0 - 1e-9);
}

TEST_CASE("a frame equidistant between g and h splits mass symmetrically") {
    const auto kb = layouts::qwerty();
    const KeyInfo* g = kb.find("g");
    const KeyInfo* h = kb.find("h");
    const PlanePoint mid{0.5 * (g->cy + h->cy), 0.5 * (g->cz + h->cz)};
    const auto post = key_posterior_from_points({mid}, kb, 0.25, 5);
    const double pg = post.probs[kb.index_of("g")];
    const double ph = post.probs[kb.index_of("h")];
    CHECK(std::fabs(pg - ph) < 1e-9);
}

TEST_CASE("closed-form rectangle mass equals grid quadrature within 1e-6") {
    Rng rng(67);
    const auto kb = layouts::qwerty();
    for (int trial = 0; trial < 100; ++trial) {
        const double py = rng.uniform(-1.0, 10.0);
        const double pz = rng.uniform(-4.0, 1.0);
        const auto& key = kb.keys[rng.uniform_index(kb.keys.size())];
        const double closed = gaussian_rect_mass(py, pz, 0.25, 0.25, key.y_lo(), key.y_hi(),
                                                 key.z_lo(), key.z_hi());
        const double quad = oracles::gaussian_rect_quadrature(py, pz, 0.25, 0.25, key.y_lo(),
                                                              key.y_hi(), key.z_lo(), key.z_hi());
        CHECK(std::fabs(closed - quad) < 1e-6);
    }
}

TEST_CASE("posterior mass over keys plus off-keyboard mass is 1 within 1e-6") {
    Rng rng(71);
    const auto kb = layouts::qwerty();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PlanePoint> pts;
        for (int i = 0; i < 8; ++i)
            pts.push_back({rng.uniform(-1.0, 10.0), rng.uniform(-4.0, 1.0)});
        const auto post = key_posterior_from_points(pts, kb, 0.25, 5);
        double total = post.off_mass;
        for (double p : post.probs) {
            total += p;
            CHECK(p >= 0.0);
        }
        CHECK(std::fabs(total - 1.0) < 1e-6);
    }
}

TEST_CASE("posterior sum never exceeds 1 plus tolerance") {
    Rng rng(73);
    const auto kb = layouts::pin();
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PlanePoint> pts;
        for (int i = 0; i < 5; ++i)
            pts.push_back({rng.uniform(-0.5, 2.5), rng.uniform(-3.5, 0.5)});
        const auto post =
            key_posterior_from_points(pts, kb, 0.25, static_cast<int>(kb.keys.size()));
        double sum = 0.0;
        for (double p : post.probs) sum += p;
        CHECK(sum <= 1.0 + 1e-9);
    }
}

TEST_CASE("shrinking sigma concentrates the posterior at a key center") {
    const auto kb = layouts::qwerty();
    const KeyInfo* e = kb.find("e");
    double prev = 0.0;
    for (double sigma : {1.0, 0.5, 0.25, 0.12, 0.05}) {
        const auto post = key_posterior_from_points({{e->cy, e->cz}}, kb, sigma, 1);
        CHECK(kb.keys[post.top[0].first].id == "e");
        CHECK(post.top[0].second >= prev);
        prev = post.top[0].second;
    }
}

TEST_CASE("top-K with K beyond the key count returns every key") {
    const auto kb = layouts::pin();
    const auto post = key_posterior_from_points({{1.0, -1.0}}, kb, 0.25, 99);
    CHECK(post.top.size() == kb.keys.size());
}

TEST_CASE("empty fixation points are rejected") {
    CHECK_THROWS_AS(key_posterior_from_points({}, layouts::qwerty(), 0.25, 5), EmptyFixation);
}

TEST_CASE("tie-break is deterministic in layout order") {
    const auto kb = layouts::pin();
    // Dead center of the keypad: 2/5/8 column symmetric left-right, so 4
    // and 6 tie exactly; 4 precedes 6 in the layout.
    const auto post = key_posterior_from_points({{1.0, -1.5}}, kb, 0.25, 10);
    const double p4 = post.probs[kb.index_of("4")];
    const double p6 = post.probs[kb.index_of("6")];
    REQUIRE(p4 == p6);
    int rank4 = -1, rank6 = -1;
    for (std::size_t i = 0; i < post.top.size(); ++i) {
        if (kb.keys[post.top[i].first].id == "4") rank4 = static_cast<int>(i);
        if (kb.keys[post.top[i].first].id == "6") rank6 = static_cast<int>(i);
    }
    CHECK(rank4 < rank6);
}
