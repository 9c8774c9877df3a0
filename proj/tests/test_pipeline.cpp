#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "gazetype/config.hpp"
#include "gazetype/evaluate.hpp"
#include "gazetype/pipeline.hpp"
#include "gazetype/report_json.hpp"
#include "gazetype/synth.hpp"

using namespace gazetype;

namespace {

Dictionary shipped_dict() {
    return expand_identical_keystrokes(
        Dictionary::load_file(std::string(GAZETYPE_SOURCE_DIR) + "/data/english_words.txt"));
}

const std::string kPangram = "a quick brown fox jumps over the lazy dog";

}  // namespace

TEST_CASE("zero-noise message closure: recovered text equals the input") {
    const auto dict = shipped_dict();
    const auto kb = layouts::qwerty();
    SceneConfig scene;
    const GazeTrace trace =
        generate_typing_trace(kPangram, kb, TypistProfile::zero_noise(), scene, 3);
    PipelineConfig cfg;
    const auto result = run_pipeline(trace, cfg, nullptr, dict, kb);
    REQUIRE(result.sessions.size() == 1);
    CHECK(result.sessions[0].text.scenario == Scenario::Message);
    CHECK(result.sessions[0].text.best_text() == kPangram);

    // Top-1 key identities invert the generator exactly.
    const auto& sr = result.sessions[0];
    REQUIRE(sr.posteriors.size() == trace.keystrokes.size());
    for (std::size_t i = 0; i < sr.posteriors.size(); ++i)
        CHECK(sr.posteriors[i].top1_id(sr.frame->layout) == trace.keystrokes[i].key);
}

TEST_CASE("distractor-only traces produce no typing sessions") {
    const auto dict = shipped_dict();
    const GazeTrace trace = generate_distractor_trace(20000.0, TypistProfile{}, 5);
    PipelineConfig cfg;
    const auto result = run_pipeline(trace, cfg, nullptr, dict, layouts::qwerty());
    CHECK(result.sessions.empty());
    CHECK(result.total_events() == 0);
}

TEST_CASE("the pipeline is deterministic") {
    const auto dict = shipped_dict();
    const auto kb = layouts::qwerty();
    SceneConfig scene;
    TypistProfile profile;  // noisy
    const GazeTrace trace = generate_typing_trace(kPangram, kb, profile, scene, 7);
    PipelineConfig cfg;
    const auto a = run_pipeline(trace, cfg, nullptr, dict, kb);
    const auto b = run_pipeline(trace, cfg, nullptr, dict, kb);
    REQUIRE(a.sessions.size() == b.sessions.size());
    for (std::size_t i = 0; i < a.sessions.size(); ++i) {
        CHECK(a.sessions[i].text.best_text() == b.sessions[i].text.best_text());
        REQUIRE(a.sessions[i].events.size() == b.sessions[i].events.size());
        for (std::size_t j = 0; j < a.sessions[i].events.size(); ++j)
            CHECK(a.sessions[i].events[j].start_ms == b.sessions[i].events[j].start_ms);
    }
}

TEST_CASE("zero-noise passcode closure: the true PIN ranks first") {
    const auto dict = shipped_dict();
    const auto kb = layouts::pin();
    SceneConfig scene;
    const GazeTrace trace =
        generate_typing_trace("183046", kb, TypistProfile::zero_noise(), scene, 11);
    PipelineConfig cfg;
    cfg.layout = "pin";
    const auto result = run_pipeline(trace, cfg, nullptr, dict, kb);
    REQUIRE(result.sessions.size() == 1);
    const auto& text = result.sessions[0].text;
    CHECK(text.scenario == Scenario::Passcode);
    REQUIRE_FALSE(text.passcode_guesses.empty());
    CHECK(text.passcode_guesses[0].digits == "183046");
}

TEST_CASE("zero-noise numberspace string decodes exactly") {
    const auto dict = shipped_dict();
    const auto kb = layouts::numberspace();
    SceneConfig scene;
    const GazeTrace trace =
        generate_typing_trace("10:45-60/3.9\n", kb, TypistProfile::zero_noise(), scene, 13);
    PipelineConfig cfg;
    cfg.layout = "numberspace";
    const auto result = run_pipeline(trace, cfg, nullptr, dict, kb);
    REQUIRE(result.sessions.size() == 1);
    const auto& sr = result.sessions[0];
    CHECK(sr.text.scenario == Scenario::Password);
    REQUIRE(sr.posteriors.size() == trace.keystrokes.size());
    for (std::size_t i = 0; i < sr.posteriors.size(); ++i)
        CHECK(sr.posteriors[i].top1_id(sr.frame->layout) == trace.keystrokes[i].key);
}

TEST_CASE("stage failures carry the stage name") {
    const auto dict = shipped_dict();
    const auto kb = layouts::qwerty();
    SceneConfig scene;
    // A single repeated key gives one fixation cluster: the keyboard fit
    // must fail, and the error message must name the stage.
    const GazeTrace trace =
        generate_typing_trace("gggg", kb, TypistProfile::zero_noise(), scene, 17);
    PipelineConfig cfg;
    try {
        run_pipeline(trace, cfg, nullptr, dict, kb);
        FAIL("expected a stage error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("keyboard-mapping") != std::string::npos);
    }
}

TEST_CASE("argmax invariance under in-range camera rotation") {
    const auto dict = shipped_dict();
    const auto kb = layouts::qwerty();
    PipelineConfig cfg;
    std::vector<std::string> reference;
    for (const auto& [cy, cp] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {40.0, 0.0}, {0.0, -45.0}, {-30.0, 30.0}}) {
        SceneConfig scene;
        scene.camera_yaw_deg = cy;
        scene.camera_pitch_deg = cp;
        const GazeTrace trace =
            generate_typing_trace(kPangram, kb, TypistProfile::zero_noise(), scene, 29);
        const auto result = run_pipeline(trace, cfg, nullptr, dict, kb);
        REQUIRE(result.sessions.size() == 1);
        std::vector<std::string> ids;
        for (const auto& post : result.sessions[0].posteriors)
            ids.push_back(post.top1_id(result.sessions[0].frame->layout));
        if (reference.empty())
            reference = ids;
        else
            CHECK(ids == reference);
    }
}

TEST_CASE("evaluate aggregates a small zero-noise dataset to perfect rates") {
    const auto dict = shipped_dict();
    SceneConfig scene;
    std::vector<EvalSample> dataset;
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        EvalSample s;
        s.trace = generate_typing_trace(kPangram, layouts::qwerty(),
                                        TypistProfile::zero_noise(), scene, seed);
        s.expected_text = kPangram;
        dataset.push_back(std::move(s));
    }
    PipelineConfig cfg;
    const EvalReport report = evaluate(dataset, cfg, nullptr, dict);
    CHECK(report.clicks.recall == 1.0);
    CHECK(report.session.accuracy == 1.0);
    const auto acc = report.topk_accuracy();
    REQUIRE(acc.size() == 5);
    CHECK(acc[0] >= 0.99);
    for (std::size_t k = 1; k < acc.size(); ++k) CHECK(acc[k] >= acc[k - 1]);
    CHECK(report.space_confusion.fp == 0);
    CHECK(report.space_confusion.fn == 0);
    CHECK(report.space_confusion.tp > 0);
    CHECK(report.word_accuracy() == 1.0);
    // Count conservation.
    CHECK(report.space_confusion.total() <= report.keystrokes_total);
    CHECK(report.clicks.counts.tp + report.clicks.counts.fn ==
          static_cast<std::int64_t>(2 * dataset[0].trace.keystrokes.size()));
}

TEST_CASE("evaluate requires ground truth") {
    const auto dict = shipped_dict();
    EvalSample s;
    s.trace = generate_distractor_trace(3000.0, TypistProfile{}, 3);
    s.trace.labels.clear();
    PipelineConfig cfg;
    CHECK_THROWS_AS(evaluate({s}, cfg, nullptr, dict), MissingGroundTruth);
}

TEST_CASE("reports serialize and re-parse equal") {
    EvalReport r;
    r.seed = 42;
    r.session.counts = {100, 5, 3, 900};
    r.session.precision = r.session.counts.precision();
    r.session.recall = r.session.counts.recall();
    r.session.accuracy = r.session.counts.accuracy();
    r.clicks.counts = {35, 1, 0, 0};
    r.clicks.precision = r.clicks.counts.precision();
    r.clicks.recall = r.clicks.counts.recall();
    r.keystrokes_total = 41;
    r.topk_correct = {38, 40, 41, 41, 41};
    r.topk_accuracy_by_scenario["message"] = {0.9, 0.95, 1.0, 1.0, 1.0};
    r.keystrokes_by_scenario["message"] = 41;
    r.space_confusion = {1457, 242, 153, 9608};
    r.words_by_length[3] = {5, 6};
    r.passcode_attempts[1] = 2;

    const json j = to_json(r);
    const json j2 = json::parse(j.dump());
    const EvalReport r2 = report_from_json(j2);
    CHECK(to_json(r2) == j);
    CHECK(r2.space_confusion.tp == 1457);
    CHECK(r2.space_confusion.fp == 242);
    CHECK(r2.space_confusion.fn == 153);
    CHECK(r2.space_confusion.tn == 9608);
}

TEST_CASE("config files parse with overrides and reject junk") {
    std::istringstream in(
        "# comment\n"
        "stability_window = 7\n"
        "s_t=estimate\n"
        "dict = /tmp/words.txt\n"
        "top_k =3\n");
    PipelineConfig cfg;
    for (const auto& [k, v] : parse_config_text(in)) apply_config_entry(cfg, k, v);
    CHECK(cfg.stability_window == 7);
    CHECK(cfg.estimate_s_t);
    CHECK(cfg.dictionary_path == "/tmp/words.txt");
    CHECK(cfg.top_k == 3);

    CHECK_THROWS_AS(apply_config_entry(cfg, "nonsense_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "top_k", "banana"), ConfigError);
    std::istringstream bad("just some text\n");
    CHECK_THROWS_AS(parse_config_text(bad), ParseError);
}

TEST_CASE("pipeline config validation") {
    PipelineConfig cfg;
    cfg.top_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.s_t = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    CHECK_NOTHROW(cfg.validate());
}
