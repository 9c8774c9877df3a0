// gazetype command line: synthesize gaze-typing traces, train the session
// classifier, and run any slice of the inference pipeline on trace files.
//
// Exit codes: 0 success, 2 input/usage error, 3 pipeline error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gazetype/config.hpp"
#include "gazetype/gazetype.hpp"
#include "gazetype/report_json.hpp"

namespace gt = gazetype;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value pairs

    gt::PipelineConfig build() const {
        gt::PipelineConfig cfg;
        if (!config_path.empty()) cfg = gt::load_config_file(config_path, cfg);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw gt::ConfigError("override must be key=value: '" + kv + "'");
            gt::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "flat key=value config file");
    cmd->add_option("--set", opts.overrides, "config override, key=value (repeatable)");
}

std::string default_sidecar(const std::string& trace_path) {
    const auto dot = trace_path.find_last_of('.');
    const std::string stem = dot == std::string::npos ? trace_path : trace_path.substr(0, dot);
    return stem + ".keys.csv";
}

std::optional<gt::SessionModel> maybe_load_model(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return gt::load_session_model_file(path);
}

gt::Dictionary load_dict_or_default(const std::string& path) {
    if (!path.empty()) return gt::expand_identical_keystrokes(gt::Dictionary::load_file(path));
    // A tiny fallback so decode-only commands work without a word list.
    return gt::expand_identical_keystrokes(gt::Dictionary(std::vector<std::string>{
        "the", "a", "i", "to", "of", "and", "in", "is", "it", "you"}));
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw gt::ConfigError("cannot open output '" + path + "'");
    return file;
}

// --------------------------------------------------------------------------

int cmd_synth(const std::string& text, const std::string& layout_name, std::uint64_t seed,
              double noise, bool zero_noise, double distract_before, double distract_after,
              double target_ms, int sentence_index, double kb_yaw, double kb_pitch, double roll,
              double cam_yaw, double cam_pitch, double pitch_plane, double rate,
              const std::string& out_path, const std::string& truth_path) {
    gt::TypistProfile profile = zero_noise ? gt::TypistProfile::zero_noise() : gt::TypistProfile{};
    if (!zero_noise) profile.noise_deg = noise;
    gt::SceneConfig scene;
    scene.keyboard_yaw_deg = kb_yaw;
    scene.keyboard_pitch_deg = kb_pitch;
    scene.roll_deg = roll;
    scene.camera_yaw_deg = cam_yaw;
    scene.camera_pitch_deg = cam_pitch;
    scene.key_pitch_plane = pitch_plane;
    scene.sample_rate_hz = rate;

    gt::GazeTrace trace;
    if (distract_before > 0.0 || distract_after > 0.0) {
        std::vector<gt::ScenarioSegment> segs;
        if (distract_before > 0.0)
            segs.push_back(gt::ScenarioSegment::distractor(distract_before));
        auto typing = gt::ScenarioSegment::typing(
            text, layout_name,
            target_ms > 0.0 ? std::optional<double>(target_ms) : std::nullopt);
        typing.sentence_index = sentence_index;
        segs.push_back(typing);
        if (distract_after > 0.0) segs.push_back(gt::ScenarioSegment::distractor(distract_after));
        trace = gt::compose_scenario(segs, profile, scene, seed);
    } else {
        trace = gt::generate_typing_trace(
            text, gt::resolve_layout(layout_name), profile, scene, seed, sentence_index,
            target_ms > 0.0 ? std::optional<double>(target_ms) : std::nullopt);
    }

    std::ofstream out_file;
    gt::trace_io::save_trace(trace, open_output(out_file, out_path));
    const std::string sidecar = truth_path.empty() && !out_path.empty() && out_path != "-"
                                    ? default_sidecar(out_path)
                                    : truth_path;
    if (!sidecar.empty()) gt::trace_io::save_keystrokes_file(trace.keystrokes, sidecar);
    return kExitOk;
}

int cmd_train(const std::vector<std::string>& trace_paths, const std::string& out_path,
              int epochs, int batch, double lr, int hidden, int window, std::uint64_t seed) {
    std::vector<gt::GazeTrace> traces;
    for (const auto& p : trace_paths) traces.push_back(gt::trace_io::load_trace_file(p));
    gt::SessionHyperparams hp;
    hp.epochs = epochs;
    hp.batch_size = batch;
    hp.learning_rate = lr;
    hp.hidden = hidden;
    hp.window = window;
    hp.seed = seed;
    const gt::SessionModel model = gt::train_session_model(traces, hp);
    gt::save_session_model_file(model, out_path);
    std::cerr << "final training loss " << model.final_loss << "\n";
    return kExitOk;
}

gt::PipelineResult run_on_trace(const gt::GazeTrace& trace, const gt::PipelineConfig& cfg,
                                const std::optional<gt::SessionModel>& model,
                                const gt::Dictionary& dict) {
    const gt::KeyboardLayout layout = gt::resolve_layout(cfg.layout);
    return gt::run_pipeline(trace, cfg, model ? &*model : nullptr, dict, layout);
}

int cmd_segment(const std::string& trace_path, const CommonOpts& common,
                const std::vector<std::string>& sessions, const std::string& out_path) {
    gt::PipelineConfig cfg = common.build();
    const gt::GazeTrace trace = gt::trace_io::load_trace_file(trace_path);

    std::vector<gt::TimeSpan> spans;
    for (const auto& s : sessions) {
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw gt::ConfigError("--session expects start_ms:end_ms");
        spans.push_back({std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
    }
    if (spans.empty())
        spans.push_back({trace.samples.front().t_ms, trace.samples.back().t_ms});

    std::ofstream out_file;
    std::ostream& out = open_output(out_file, out_path);
    out << "start_ms,end_ms\n";
    for (const auto& span : spans) {
        std::vector<gt::GazeSample> frames;
        for (const auto& s : trace.samples)
            if (span.contains(s.t_ms) || s.t_ms == span.end_ms) frames.push_back(s);
        if (frames.size() < static_cast<std::size_t>(cfg.stability_window)) continue;
        const auto stab =
            gt::stability(std::span<const gt::GazeSample>(frames), cfg.stability_window);
        double s_t = cfg.s_t;
        if (cfg.estimate_s_t) {
            try {
                s_t = gt::estimate_threshold({stab});
            } catch (const gt::InsufficientDips&) {
                s_t = gt::kDefaultStabilityThreshold;
            }
        }
        for (const auto& ev : gt::segment_keystrokes(stab, s_t, span))
            out << ev.start_ms << ',' << ev.end_ms << '\n';
    }
    return kExitOk;
}

int cmd_locate(const std::string& trace_path, const CommonOpts& common) {
    gt::PipelineConfig cfg = common.build();
    const gt::GazeTrace trace = gt::trace_io::load_trace_file(trace_path);
    const auto model = maybe_load_model(cfg.model_path);
    const auto dict = load_dict_or_default(cfg.dictionary_path);
    const auto result = run_on_trace(trace, cfg, model, dict);

    gt::json j = gt::json::array();
    for (const auto& sr : result.sessions) {
        if (!sr.frame) continue;
        const auto& f = *sr.frame;
        j.push_back({{"session_start_ms", sr.span.start_ms},
                     {"session_end_ms", sr.span.end_ms},
                     {"normal", {f.normal.x, f.normal.y, f.normal.z}},
                     {"axes", {{f.axes.a, f.axes.b}, {f.axes.c, f.axes.d}}},
                     {"eigenvalues", {f.axes.eig0, f.axes.eig1}},
                     {"boundary_pca",
                      {{"y_lo", f.bound_y_lo},
                       {"y_hi", f.bound_y_hi},
                       {"z_lo", f.bound_z_lo},
                       {"z_hi", f.bound_z_hi}}},
                     {"pitch_plane_units", f.pitch_plane_units()},
                     {"layout", f.layout.name}});
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_decode(const std::string& trace_path, const CommonOpts& common,
               const std::string& out_path) {
    gt::PipelineConfig cfg = common.build();
    const gt::GazeTrace trace = gt::trace_io::load_trace_file(trace_path);
    const auto model = maybe_load_model(cfg.model_path);
    const auto dict = load_dict_or_default(cfg.dictionary_path);
    const gt::KeyboardLayout layout = gt::resolve_layout(cfg.layout);
    const auto result = run_on_trace(trace, cfg, model, dict);

    std::ofstream out_file;
    std::ostream& out = open_output(out_file, out_path);
    out << "idx";
    for (int k = 1; k <= cfg.top_k; ++k) out << ",k" << k << ",p" << k;
    out << "\n";
    std::size_t idx = 0;
    for (const auto& sr : result.sessions) {
        const gt::KeyboardLayout& kb = sr.frame ? sr.frame->layout : layout;
        for (const auto& post : sr.posteriors) {
            out << idx++;
            for (int k = 0; k < cfg.top_k; ++k) {
                if (k < static_cast<int>(post.top.size()))
                    out << ',' << kb.keys[post.top[k].first].id << ',' << post.top[k].second;
                else
                    out << ",,0";
            }
            out << "\n";
        }
    }
    return kExitOk;
}

int cmd_recover(const std::string& trace_path, const CommonOpts& common) {
    gt::PipelineConfig cfg = common.build();
    const gt::GazeTrace trace = gt::trace_io::load_trace_file(trace_path);
    const auto model = maybe_load_model(cfg.model_path);
    const auto dict = load_dict_or_default(cfg.dictionary_path);
    const auto result = run_on_trace(trace, cfg, model, dict);

    gt::json j = gt::json::array();
    for (const auto& sr : result.sessions)
        j.push_back({{"session_start_ms", sr.span.start_ms},
                     {"session_end_ms", sr.span.end_ms},
                     {"recovery", gt::to_json(sr.text)}});
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& trace_path, const CommonOpts& common) {
    gt::PipelineConfig cfg = common.build();
    const gt::GazeTrace trace = gt::trace_io::load_trace_file(trace_path);
    const auto model = maybe_load_model(cfg.model_path);
    const auto dict = load_dict_or_default(cfg.dictionary_path);
    const auto result = run_on_trace(trace, cfg, model, dict);

    gt::json j;
    j["seed"] = cfg.seed;
    j["trace"] = trace_path;
    j["sessions"] = gt::json::array();
    for (const auto& sr : result.sessions) {
        gt::json s;
        s["start_ms"] = sr.span.start_ms;
        s["end_ms"] = sr.span.end_ms;
        s["keystrokes"] = sr.events.size();
        s["s_t_used"] = sr.s_t_used;
        s["recovery"] = gt::to_json(sr.text);
        j["sessions"].push_back(s);
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_eval(const std::vector<std::string>& trace_paths,
             const std::vector<std::string>& expected_texts, const CommonOpts& common,
             const std::string& plots_dir) {
    gt::PipelineConfig cfg = common.build();
    const auto model = maybe_load_model(cfg.model_path);
    const auto dict = load_dict_or_default(cfg.dictionary_path);

    std::vector<gt::EvalSample> dataset;
    for (std::size_t i = 0; i < trace_paths.size(); ++i) {
        gt::EvalSample s;
        s.trace = gt::trace_io::load_trace_file(trace_paths[i]);
        s.trace.keystrokes = gt::trace_io::load_keystrokes_file(default_sidecar(trace_paths[i]));
        if (i < expected_texts.size()) s.expected_text = expected_texts[i];
        s.layout = cfg.layout;
        dataset.push_back(std::move(s));
    }
    const gt::EvalReport report = gt::evaluate(dataset, cfg, model ? &*model : nullptr, dict);
    std::cout << gt::to_json(report).dump(2) << "\n";

    if (!plots_dir.empty()) {
        std::ofstream acc(plots_dir + "/topk_accuracy.csv");
        acc << "k,accuracy\n";
        const auto a = report.topk_accuracy();
        for (std::size_t k = 0; k < a.size(); ++k) acc << k + 1 << ',' << a[k] << '\n';
        std::ofstream conf(plots_dir + "/space_confusion.csv");
        conf << "cell,count\n"
             << "tp," << report.space_confusion.tp << "\nfp," << report.space_confusion.fp
             << "\nfn," << report.space_confusion.fn << "\ntn," << report.space_confusion.tn
             << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaze-typing keystroke inference toolkit"};
    app.require_subcommand(1);

    // synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic gaze-typing trace");
    std::string sy_text, sy_layout = "qwerty", sy_out, sy_truth;
    std::uint64_t sy_seed = 1;
    double sy_noise = 0.5, sy_before = 0.0, sy_after = 0.0, sy_target = 0.0;
    double sy_kb_yaw = 0.0, sy_kb_pitch = -15.0, sy_roll = 0.0, sy_cam_yaw = 0.0,
           sy_cam_pitch = 0.0, sy_pitch_plane = gt::kDefaultKeyPitchPlane,
           sy_rate = gt::kDefaultSampleRateHz;
    int sy_sentence = 0;
    bool sy_zero = false;
    synth->add_option("--text", sy_text, "text to type")->required();
    synth->add_option("--layout", sy_layout, "qwerty|numberspace|pin|layout file");
    synth->add_option("--seed", sy_seed, "random seed");
    synth->add_option("--noise", sy_noise, "angular noise sigma, degrees");
    synth->add_flag("--zero-noise", sy_zero, "no noise, no micro-adjustments");
    synth->add_option("--distract-before", sy_before, "distractor ms before typing");
    synth->add_option("--distract-after", sy_after, "distractor ms after typing");
    synth->add_option("--typing-ms", sy_target, "rescale fixations to hit this duration");
    synth->add_option("--sentence-index", sy_sentence, "proficiency drift index");
    synth->add_option("--keyboard-yaw", sy_kb_yaw, "keyboard center yaw, degrees");
    synth->add_option("--keyboard-pitch", sy_kb_pitch, "keyboard center pitch, degrees");
    synth->add_option("--roll", sy_roll, "keyboard roll about its normal, degrees");
    synth->add_option("--camera-yaw", sy_cam_yaw, "virtual camera yaw offset");
    synth->add_option("--camera-pitch", sy_cam_pitch, "virtual camera pitch offset");
    synth->add_option("--pitch-plane", sy_pitch_plane, "plane units per key pitch");
    synth->add_option("--rate", sy_rate, "sample rate, Hz");
    synth->add_option("--out", sy_out, "trace CSV path ('-' for stdout)")->required();
    synth->add_option("--truth", sy_truth, "keystroke sidecar path (default <out>.keys.csv)");

    // train ------------------------------------------------------------
    auto* train = app.add_subcommand("train", "train the typing-session classifier");
    std::vector<std::string> tr_traces;
    std::string tr_out;
    int tr_epochs = 100, tr_batch = 64, tr_hidden = 128, tr_window = gt::kSessionWindowFrames;
    double tr_lr = 1e-3;
    std::uint64_t tr_seed = 1;
    train->add_option("--trace", tr_traces, "labeled trace CSV (repeatable)")->required();
    train->add_option("--out", tr_out, "model checkpoint path")->required();
    train->add_option("--epochs", tr_epochs, "training epochs");
    train->add_option("--batch", tr_batch, "minibatch size");
    train->add_option("--lr", tr_lr, "Adam learning rate");
    train->add_option("--hidden", tr_hidden, "hidden units per direction");
    train->add_option("--window", tr_window, "frames per training window");
    train->add_option("--seed", tr_seed, "random seed");

    // pipeline commands --------------------------------------------------
    CommonOpts seg_common, loc_common, dec_common, rec_common, ana_common, ev_common;
    auto* segment = app.add_subcommand("segment", "keystroke fixations as CSV");
    std::string sg_trace, sg_out;
    std::vector<std::string> sg_sessions;
    segment->add_option("--trace", sg_trace, "trace CSV")->required();
    segment->add_option("--session", sg_sessions, "start_ms:end_ms (repeatable)");
    segment->add_option("--out", sg_out, "output CSV ('-' for stdout)");
    add_common(segment, seg_common);

    auto* locate = app.add_subcommand("locate", "estimated keyboard frame as JSON");
    std::string lc_trace;
    locate->add_option("--trace", lc_trace, "trace CSV")->required();
    add_common(locate, loc_common);

    auto* decode = app.add_subcommand("decode", "per-keystroke top-K table as CSV");
    std::string dc_trace, dc_out;
    decode->add_option("--trace", dc_trace, "trace CSV")->required();
    decode->add_option("--out", dc_out, "output CSV ('-' for stdout)");
    add_common(decode, dec_common);

    auto* recover = app.add_subcommand("recover", "recovered text as JSON");
    std::string rc_trace;
    recover->add_option("--trace", rc_trace, "trace CSV")->required();
    add_common(recover, rec_common);

    auto* analyze = app.add_subcommand("analyze", "full pipeline report as JSON");
    std::string an_trace;
    analyze->add_option("--trace", an_trace, "trace CSV")->required();
    add_common(analyze, ana_common);

    auto* eval = app.add_subcommand("eval", "evaluation report over labeled traces");
    std::vector<std::string> ev_traces, ev_texts;
    std::string ev_plots;
    eval->add_option("--trace", ev_traces, "trace CSV with .keys.csv sidecar (repeatable)")
        ->required();
    eval->add_option("--expected-text", ev_texts, "expected text per trace, in order");
    eval->add_option("--plots-dir", ev_plots, "emit plot data CSVs into this directory");
    add_common(eval, ev_common);

    // Convenience flags shared by pipeline commands map straight onto
    // config keys via --set; also accept the most common ones directly.
    for (auto [cmd, common] :
         std::initializer_list<std::pair<CLI::App*, CommonOpts*>>{{segment, &seg_common},
                                                                  {locate, &loc_common},
                                                                  {decode, &dec_common},
                                                                  {recover, &rec_common},
                                                                  {analyze, &ana_common},
                                                                  {eval, &ev_common}}) {
        auto push = [common](const std::string& key) {
            return [common, key](const std::string& v) { common->overrides.push_back(key + "=" + v); };
        };
        cmd->add_option_function<std::string>("--dict", push("dict"), "dictionary file");
        cmd->add_option_function<std::string>("--layout", push("layout"),
                                              "qwerty|numberspace|pin|layout file");
        cmd->add_option_function<std::string>("--model", push("model"), "session model");
        cmd->add_option_function<std::string>("--s-t", push("s_t"),
                                              "stability threshold or 'estimate'");
        cmd->add_option_function<std::string>("--window", push("stability_window"),
                                              "stability window frames");
        cmd->add_option_function<std::string>("--k", push("top_k"), "top-K candidates");
        cmd->add_option_function<std::string>("--seed", push("seed"), "random seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(sy_text, sy_layout, sy_seed, sy_noise, sy_zero, sy_before, sy_after,
                             sy_target, sy_sentence, sy_kb_yaw, sy_kb_pitch, sy_roll, sy_cam_yaw,
                             sy_cam_pitch, sy_pitch_plane, sy_rate, sy_out, sy_truth);
        if (train->parsed())
            return cmd_train(tr_traces, tr_out, tr_epochs, tr_batch, tr_lr, tr_hidden, tr_window,
                             tr_seed);
        if (segment->parsed()) return cmd_segment(sg_trace, seg_common, sg_sessions, sg_out);
        if (locate->parsed()) return cmd_locate(lc_trace, loc_common);
        if (decode->parsed()) return cmd_decode(dc_trace, dec_common, dc_out);
        if (recover->parsed()) return cmd_recover(rc_trace, rec_common);
        if (analyze->parsed()) return cmd_analyze(an_trace, ana_common);
        if (eval->parsed()) return cmd_eval(ev_traces, ev_texts, ev_common, ev_plots);
    } catch (const gt::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const gt::ConfigError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const gt::NonMonotonicTimestamps& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const gt::CheckpointError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const gt::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitOk;
}
