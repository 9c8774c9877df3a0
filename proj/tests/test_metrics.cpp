#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gazetype/metrics.hpp"

using namespace gazetype;

namespace {
double round3(double x) { return std::round(x * 1000.0) / 1000.0; }
}  // namespace

TEST_CASE("perfect prediction scores 1/1/1") {
    const std::vector<int> truth{0, 1, 1, 0, 1};
    const auto c = frame_confusion(truth, truth);
    CHECK(c.precision() == 1.0);
    CHECK(c.recall() == 1.0);
    CHECK(c.accuracy() == 1.0);
}

TEST_CASE("all-negative prediction against all-positive truth") {
    const std::vector<int> pred(10, 0);
    const std::vector<int> truth(10, 1);
    const auto c = frame_confusion(pred, truth);
    CHECK(c.undefined_precision());
    CHECK(c.precision() == 0.0);
    CHECK(c.recall() == 0.0);
    CHECK_FALSE(c.undefined_recall());
}

TEST_CASE("mismatched lengths throw") {
    const std::vector<int> a(3, 1), b(4, 1);
    CHECK_THROWS_AS(frame_confusion(a, b), LengthMismatch);
}

TEST_CASE("aggregate click counts reproduce the reported rates") {
    // 12839 actual clicks, 12428 identified, 2039 spurious detections.
    ConfusionCounts c;
    c.tp = 12428;
    c.fp = 2039;
    c.fn = 411;
    CHECK(round3(c.precision()) == 0.859);
    CHECK(round3(c.recall()) == 0.968);
}

TEST_CASE("demo-scale click counts reproduce the reported rates") {
    // 35 true keystrokes, 36 detections: 35 hits, 1 spurious, 0 missed.
    ConfusionCounts c;
    c.tp = 35;
    c.fp = 1;
    c.fn = 0;
    CHECK(round3(c.precision()) == 0.972);
    CHECK(c.recall() == 1.0);
}

TEST_CASE("count conservation") {
    const std::vector<int> pred{1, 0, 1, 1, 0, 0, 1};
    const std::vector<int> truth{1, 1, 0, 1, 0, 0, 0};
    const auto c = frame_confusion(pred, truth);
    CHECK(c.total() == 7);
    CHECK(c.tp == 2);
    CHECK(c.fp == 2);
    CHECK(c.fn == 1);
    CHECK(c.tn == 2);
}
