#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "emoclick/config.hpp"
#include "emoclick/errors.hpp"
#include "emoclick/jsonl.hpp"
#include "emoclick/pipeline.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    bool offline = false;
};

emoclick::PipelineConfig load_effective_config(const GlobalArgs& args) {
    emoclick::PipelineConfig config = emoclick::load_config(args.config_path);
    if (!args.output_dir.empty()) {
        config.output_dir = args.output_dir;
    }
    if (args.seed) {
        config.seed = *args.seed;
    }
    if (args.offline) {
        config.offline = true;
        if (config.embedding.kind == "openai" || config.generation.kind == "openai" ||
            config.emotion.kind == "http") {
            throw emoclick::ConfigError("--offline forbids network backends");
        }
    }
    return config;
}

emoclick::Json candidate_json(const emoclick::AttackCandidate& c) {
    emoclick::Json j;
    j["rank"] = c.rank;
    j["post_id"] = c.post_id;
    j["variant_id"] = c.variant_id;
    j["style"] = c.style;
    j["text"] = c.text;
    j["backend_id"] = c.backend_id;
    j["model_id"] = c.model_id;
    j["similarity"] = c.similarity;
    j["cg_comment"] = c.cg_comment;
    j["delta_cg"] = c.delta_cg;
    j["framing"] = std::string(emoclick::to_string(c.framing));
    return j;
}

int run_stage_command(const GlobalArgs& args, const std::string& last_stage) {
    const auto config = load_effective_config(args);
    emoclick::PipelineRun run(config, config.output_dir);
    run.run(last_stage);
    std::cout << "completed through stage '"
              << (last_stage.empty() ? "evaluate" : last_stage) << "'; artifacts in "
              << config.output_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"emoclick: emotion-aware clickbait corpus analysis pipeline"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("-c,--config", args.config_path, "pipeline config JSON")
        ->required();
    app.add_option("-o,--out", args.output_dir, "override output directory");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override random seed");
    app.add_flag("--offline", args.offline, "forbid network backends");

    for (const std::string& stage : emoclick::PipelineRun::stage_names()) {
        app.add_subcommand(stage, "run the pipeline through the " + stage + " stage");
    }
    auto* run_cmd = app.add_subcommand("run", "run the full pipeline and emit the report");
    auto* report_cmd = app.add_subcommand("report", "emit the report bundle for a finished run");

    auto* attack_cmd =
        app.add_subcommand("attack-candidates", "rank styled variants for one post");
    std::string post_id;
    std::uint64_t top_k = 5;
    attack_cmd->add_option("--post-id", post_id, "target post id")->required();
    attack_cmd->add_option("-k,--top-k", top_k, "candidates per ranking");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) {
        args.seed = seed_value;
    }

    try {
        for (const std::string& stage : emoclick::PipelineRun::stage_names()) {
            if (app.got_subcommand(stage)) {
                return run_stage_command(args, stage);
            }
        }
        if (app.got_subcommand(run_cmd)) {
            const auto config = load_effective_config(args);
            emoclick::PipelineRun run(config, config.output_dir);
            run.run();
            const auto report_dir = emoclick::emit_report(config.output_dir);
            std::cout << "run complete; report bundle in " << report_dir.string() << "\n";
            return 0;
        }
        if (app.got_subcommand(report_cmd)) {
            const auto config = load_effective_config(args);
            const auto report_dir = emoclick::emit_report(config.output_dir);
            std::cout << "report bundle in " << report_dir.string() << "\n";
            return 0;
        }
        if (app.got_subcommand(attack_cmd)) {
            const auto config = load_effective_config(args);
            const auto lists =
                emoclick::attack_candidates(config, config.output_dir, post_id, top_k);
            emoclick::Json out;
            emoclick::Json positive = emoclick::Json::array();
            for (const auto& c : lists.positive) {
                positive.push_back(candidate_json(c));
            }
            emoclick::Json negative = emoclick::Json::array();
            for (const auto& c : lists.negative) {
                negative.push_back(candidate_json(c));
            }
            out["post_id"] = post_id;
            out["positive_framing"] = positive;
            out["negative_framing"] = negative;
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
