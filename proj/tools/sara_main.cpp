#include "sara/config.hpp"
#include "sara/agents/pipeline.hpp"
#include "sara/backend/backend.hpp"
#include "sara/backend/retrieval.hpp"
#include "sara/eval/eval.hpp"
#include "sara/theory/suite.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // verification or eval failure
constexpr int kExitUsage = 2;    // flag / config errors

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sara::ConfigError("cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sara::ConfigError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOptions {
    std::string config_path;
    std::string mock_script_path;
};

sara::CliConfig load_cli_config(const CommonOptions& opts) {
    if (opts.config_path.empty()) return {};
    return sara::CliConfig::load(opts.config_path);
}

std::unique_ptr<sara::backend::Backend> build_backend(
    const sara::CliConfig& config, const CommonOptions& opts,
    std::optional<sara::backend::MockScript>& script_storage) {
    if (!opts.mock_script_path.empty()) {
        script_storage =
            sara::backend::MockScript::load(opts.mock_script_path);
        sara::backend::BackendConfig mock;
        mock.kind = sara::backend::BackendConfig::Kind::Mock;
        return sara::backend::make_backend(mock, &*script_storage);
    }
    auto backend_config = config.backend_config();
    if (backend_config.kind == sara::backend::BackendConfig::Kind::Mock)
        throw sara::ConfigError(
            "backend.kind = mock requires --mock-script");
    return sara::backend::make_backend(backend_config);
}

std::vector<std::unique_ptr<sara::backend::KnowledgeSource>> build_sources(
    const sara::CliConfig& config) {
    std::vector<std::unique_ptr<sara::backend::KnowledgeSource>> sources;
    for (const auto& name : config.retrieval_sources) {
        if (name == "stub") {
            if (config.retrieval_stub_corpus_path.empty())
                throw sara::ConfigError(
                    "retrieval.stub_corpus_path required for the stub source");
            sources.push_back(std::make_unique<sara::backend::StubCorpusSource>(
                config.retrieval_stub_corpus_path));
        } else if (name == "wikipedia") {
            sources.push_back(
                std::make_unique<sara::backend::WikipediaSource>());
        }
    }
    return sources;
}

// ---- verify-theory --------------------------------------------------------

int cmd_verify_theory(const std::string& suite, std::uint64_t seed, int count,
                      const std::string& shape, const std::string& error_kind,
                      const std::string& out_path) {
    sara::theory::SuiteConfig config;
    config.generator.seed = seed;
    config.generator.shape = sara::theory::shape_from_string(shape);
    config.count = count;

    if (suite == "full") {
        config.claims = sara::theory::kAllClaims;
    } else {
        config.claims = {suite};
    }
    if (error_kind == "zeroone") {
        std::erase(config.claims, std::string("error-prob"));
    } else if (error_kind == "prob") {
        std::erase(config.claims, std::string("error-zeroone"));
    } else if (error_kind != "both") {
        throw sara::ConfigError("--error must be zeroone, prob or both");
    }

    auto result = sara::theory::run_suite(config);
    auto summary = result.summary();
    if (!out_path.empty()) write_file(out_path, summary.dump(2) + "\n");

    for (const auto& claim : summary["claims"]) {
        std::cout << (claim["pass"].get<bool>() ? "pass" : "FAIL") << "  "
                  << claim["claim_id"].get<std::string>() << "  instances="
                  << claim["instances_checked"].get<int>() << "  min_slack=";
        if (claim["min_slack"].is_null())
            std::cout << "n/a";
        else
            std::cout << claim["min_slack"].get<double>();
        std::cout << "\n";
    }
    std::cout << "checked " << result.instances_checked << " instances, "
              << result.instances_skipped << " skipped\n";
    return result.pass ? kExitOk : kExitFailure;
}

// ---- run ------------------------------------------------------------------

int cmd_run(const std::string& question, const CommonOptions& opts,
            const std::string& transcript_out, bool update_golden) {
    auto config = load_cli_config(opts);
    std::optional<sara::backend::MockScript> script;
    auto backend = build_backend(config, opts, script);
    auto owned_sources = build_sources(config);
    std::vector<sara::backend::KnowledgeSource*> sources;
    for (auto& s : owned_sources) sources.push_back(s.get());

    sara::agents::Pipeline pipeline(*backend, sources,
                                    config.pipeline_config());
    auto transcript = pipeline.run(question);

    if (!transcript_out.empty()) {
        std::string rendered = transcript.to_text();
        std::ifstream existing(transcript_out, std::ios::binary);
        if (existing && !update_golden) {
            std::ostringstream buf;
            buf << existing.rdbuf();
            if (buf.str() != rendered) {
                std::cerr << "transcript differs from " << transcript_out
                          << " (pass --update-golden to overwrite)\n";
                return kExitFailure;
            }
        } else {
            write_file(transcript_out, rendered);
        }
    }

    if (transcript.error) {
        std::cerr << "pipeline error: " << *transcript.error << "\n";
        return kExitFailure;
    }
    std::cout << "final answer: "
              << transcript.memory.final_answer.value_or("") << "\n";
    return kExitOk;
}

// ---- eval -----------------------------------------------------------------

int cmd_eval(const std::string& dataset, const std::string& kind_name,
             const std::string& runner_name, const std::string& attack_name,
             int limit, int parallel, const std::string& out_path,
             const CommonOptions& opts) {
    if (limit == 0) throw sara::ConfigError("--limit must be nonzero");
    auto config = load_cli_config(opts);
    auto kind = sara::eval::kind_from_string(kind_name);
    auto records = sara::eval::load_records(dataset, kind);
    if (limit > 0 && static_cast<std::size_t>(limit) < records.size())
        records.resize(static_cast<std::size_t>(limit));

    std::optional<sara::backend::MockScript> script;
    auto backend = build_backend(config, opts, script);
    auto owned_sources = build_sources(config);
    std::vector<sara::backend::KnowledgeSource*> sources;
    for (auto& s : owned_sources) sources.push_back(s.get());
    sara::agents::PromptLibrary prompts(
        config.pipeline_config().prompt_dir.empty()
            ? sara::agents::PromptLibrary::default_prompt_dir()
            : config.pipeline_config().prompt_dir);

    sara::eval::Runner runner;
    if (runner_name == "pipeline") {
        runner = [&](const sara::eval::TaskRecord& record) {
            sara::agents::Pipeline pipeline(*backend, sources,
                                            config.pipeline_config());
            auto transcript = pipeline.run(record.question);
            if (transcript.error)
                throw std::runtime_error(*transcript.error);
            return transcript.memory.final_answer.value_or("");
        };
    } else {
        sara::eval::BaselineMode mode;
        if (runner_name == "vanilla")
            mode = sara::eval::BaselineMode::Vanilla;
        else if (runner_name == "cot0")
            mode = sara::eval::BaselineMode::Cot0;
        else if (runner_name == "cot0_with_analysis")
            mode = sara::eval::BaselineMode::Cot0WithAnalysis;
        else
            throw sara::ConfigError("unknown --runner '" + runner_name + "'");
        runner = [&, mode](const sara::eval::TaskRecord& record) {
            return sara::eval::run_baseline(record, mode, *backend, prompts);
        };
    }

    sara::eval::EvalConfig eval_config;
    eval_config.parallelism = parallel > 0 ? parallel : config.eval_parallelism;
    if (config.eval_judge_mode == "llm") {
        eval_config.judge_mode = sara::eval::JudgeMode::Llm;
        eval_config.judge_backend = backend.get();
    }
    if (attack_name == "preemptive") {
        eval_config.attack = sara::eval::AttackSpec{};
        eval_config.attack->kind = sara::eval::AttackKind::Preemptive;
    } else if (attack_name == "badchain") {
        eval_config.attack = sara::eval::AttackSpec{};
        eval_config.attack->kind = sara::eval::AttackKind::BadChain;
    } else if (attack_name != "none") {
        throw sara::ConfigError("--attack must be none, badchain or preemptive");
    }

    auto report = sara::eval::run_eval(records, runner, eval_config);
    if (!out_path.empty()) write_file(out_path, report.to_json().dump(2) + "\n");

    std::printf("accuracy %.3f (%d/%d)\n", report.accuracy, report.correct,
                report.total);
    if (report.attack_success_rate)
        std::printf("attack_success_rate %.3f\n", *report.attack_success_rate);
    return kExitOk;
}

// ---- attack-demo ----------------------------------------------------------

int cmd_attack_demo(const std::string& kind, const std::string& trigger,
                    const std::string& target, const std::string& demos_in,
                    const std::string& out_path) {
    std::string input = read_file(demos_in);
    std::ostringstream out;
    std::istringstream is(input);
    std::string line;
    int lineno = 0;
    if (kind == "badchain") {
        sara::eval::AttackSpec spec;
        spec.kind = sara::eval::AttackKind::BadChain;
        if (!trigger.empty()) spec.trigger = trigger;
        std::vector<sara::eval::Demonstration> demos;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("question") ||
                !j.contains("rationale"))
                throw sara::ConfigError(
                    "demos line " + std::to_string(lineno) +
                    ": expected {question, rationale}");
            demos.push_back({j["question"].get<std::string>(),
                             j["rationale"].get<std::string>()});
        }
        for (const auto& demo :
             sara::eval::poison_demonstrations(demos, spec)) {
            nlohmann::ordered_json j;
            j["question"] = demo.question;
            j["rationale"] = demo.rationale;
            out << j.dump() << "\n";
        }
    } else if (kind == "preemptive") {
        std::string t = target.empty() ? sara::eval::kDefaultTargetAnswer
                                       : target;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            out << sara::eval::inject_preemptive(line, t) << "\n";
        }
    } else {
        throw sara::ConfigError("--kind must be badchain or preemptive");
    }
    if (out_path.empty())
        std::cout << out.str();
    else
        write_file(out_path, out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theory-verification and multi-agent reasoning workbench"};
    app.require_subcommand(1);

    // verify-theory
    auto* verify = app.add_subcommand("verify-theory",
                                      "run the inequality suites");
    std::string suite = "full", shape = "tree", error_kind = "both";
    std::string verify_out;
    std::uint64_t seed = 42;
    int count = 500;
    verify->add_option("--suite", suite, "full or one claim id");
    verify->add_option("--seed", seed, "generator seed");
    verify->add_option("--count", count, "instances per claim");
    verify->add_option("--shape", shape, "chain|tree|canonical|fig3|diamond-multipath");
    verify->add_option("--error", error_kind, "zeroone|prob|both");
    verify->add_option("--out", verify_out, "summary json path");

    // run
    auto* run = app.add_subcommand("run", "answer one question");
    std::string question;
    CommonOptions run_opts;
    std::string transcript_out;
    bool update_golden = false;
    run->add_option("question", question, "the question text")->required();
    run->add_option("--config", run_opts.config_path, "config file");
    run->add_option("--mock-script", run_opts.mock_script_path,
                    "scripted backend responses");
    run->add_option("--transcript-out", transcript_out, "transcript path");
    run->add_flag("--update-golden", update_golden,
                  "overwrite an existing, differing transcript file");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a jsonl dataset");
    std::string dataset, kind_name = "hotpotqa", runner_name = "vanilla";
    std::string attack_name = "none", eval_out;
    int limit = -1, parallel = 0;
    CommonOptions eval_opts;
    eval->add_option("--dataset", dataset, "jsonl dataset path")->required();
    eval->add_option("--kind", kind_name, "hotpotqa|fever|mmlu");
    eval->add_option("--runner", runner_name,
                     "vanilla|cot0|cot0_with_analysis|pipeline");
    eval->add_option("--attack", attack_name, "none|badchain|preemptive");
    eval->add_option("--limit", limit, "max records (-1 = all)");
    eval->add_option("--parallel", parallel, "worker threads");
    eval->add_option("--out", eval_out, "report json path");
    eval->add_option("--config", eval_opts.config_path, "config file");
    eval->add_option("--mock-script", eval_opts.mock_script_path,
                     "scripted backend responses");

    // attack-demo
    auto* attack = app.add_subcommand("attack-demo",
                                      "emit poisoned demonstrations");
    std::string attack_kind = "badchain", attack_trigger, attack_target;
    std::string demos_in, attack_out;
    attack->add_option("--kind", attack_kind, "badchain|preemptive");
    attack->add_option("--trigger", attack_trigger, "trigger phrase override");
    attack->add_option("--target", attack_target, "target answer override");
    attack->add_option("--demos-in", demos_in, "input file")->required();
    attack->add_option("--out", attack_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (verify->parsed())
            return cmd_verify_theory(suite, seed, count, shape, error_kind,
                                     verify_out);
        if (run->parsed())
            return cmd_run(question, run_opts, transcript_out, update_golden);
        if (eval->parsed())
            return cmd_eval(dataset, kind_name, runner_name, attack_name,
                            limit, parallel, eval_out, eval_opts);
        if (attack->parsed())
            return cmd_attack_demo(attack_kind, attack_trigger, attack_target,
                                   demos_in, attack_out);
    } catch (const sara::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
