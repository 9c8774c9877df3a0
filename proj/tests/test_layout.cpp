#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "gazetype/layout.hpp"

using namespace gazetype;

TEST_CASE("qwerty anchors: Q at origin, P nine pitches right") {
    const auto kb = layouts::qwerty();
    const KeyInfo* q = kb.find("q");
    const KeyInfo* p = kb.find("p");
    REQUIRE(q);
    REQUIRE(p);
    CHECK(q->cy == 0.0);
    CHECK(q->cz == 0.0);
    CHECK(p->cy == 9.0);
    CHECK(p->cz == 0.0);
    CHECK(kb.find("SPACE")->cz == -3.0);
    CHECK(kb.anchor_y_hi - kb.anchor_y_lo == 9.0);
    CHECK(kb.anchor_z_hi - kb.anchor_z_lo == 3.0);
}

TEST_CASE("pin keypad is a 3x4 grid with 5 in the middle of row 1") {
    const auto kb = layouts::pin();
    REQUIRE(kb.keys.size() == 10);
    const KeyInfo* five = kb.find("5");
    REQUIRE(five);
    CHECK(five->cy == 1.0);
    CHECK(five->cz == -1.0);
    CHECK(kb.find("0")->cz == -3.0);
    CHECK(kb.is_pin());
}

TEST_CASE("no two keys overlap in any builtin layout") {
    for (const auto& kb : builtin_layouts()) {
        for (std::size_t i = 0; i < kb.keys.size(); ++i) {
            for (std::size_t j = i + 1; j < kb.keys.size(); ++j) {
                const auto& a = kb.keys[i];
                const auto& b = kb.keys[j];
                const bool overlap = a.y_lo() < b.y_hi() && b.y_lo() < a.y_hi() &&
                                     a.z_lo() < b.z_hi() && b.z_lo() < a.z_hi();
                INFO(kb.name << ": " << a.id << " vs " << b.id);
                CHECK_FALSE(overlap);
            }
        }
    }
}

TEST_CASE("layout files round trip") {
    const auto kb = layouts::numberspace();
    std::ostringstream out;
    save_layout(kb, out);
    std::istringstream in(out.str());
    const auto loaded = load_layout(in, "numberspace");
    REQUIRE(loaded.keys.size() == kb.keys.size());
    for (std::size_t i = 0; i < kb.keys.size(); ++i) {
        CHECK(loaded.keys[i].id == kb.keys[i].id);
        CHECK(loaded.keys[i].cy == Catch::Approx(kb.keys[i].cy));
        CHECK(loaded.keys[i].cz == Catch::Approx(kb.keys[i].cz));
    }
}

TEST_CASE("layout loader rejects malformed input") {
    std::istringstream bad_header("key,x,y\nq,0,0,1,1\n");
    CHECK_THROWS_AS(load_layout(bad_header, "x"), ParseError);
    std::istringstream bad_extent("key,center_y,center_z,w,h\nq,0,0,0,1\n");
    CHECK_THROWS_AS(load_layout(bad_extent, "x"), ParseError);
    std::istringstream empty("key,center_y,center_z,w,h\n");
    CHECK_THROWS_AS(load_layout(empty, "x"), ParseError);
}

TEST_CASE("resolve_layout finds builtins and rejects unknowns") {
    CHECK(resolve_layout("qwerty").name == "qwerty");
    CHECK(resolve_layout("pin").keys.size() == 10);
    CHECK_THROWS_AS(resolve_layout("dvorak"), ConfigError);
}
