#include <doctest.h>

#include "sara/agents/pipeline.hpp"
#include "sara/util/sha256.hpp"

#include <fstream>
#include <sstream>

using namespace sara;

namespace {

const std::string kFixtureDir = SARA_FIXTURE_DIR;
const std::string kPromptDir = SARA_PROMPT_SOURCE_DIR;

const std::string kQuestion =
    "What is the fight song of the university whose main campus is in "
    "Lawrence, Kansas?";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

agents::PipelineConfig test_config() {
    agents::PipelineConfig config;
    config.prompt_dir = kPromptDir;
    return config;
}

const std::string kGoodAnalysis =
    "Grammar notes.\n"
    "1. Identify Key Components:\n- a\n- b\n"
    "2. Relationship between Components:\nlinked\n"
    "3. Sub-Question Decomposition:\n1. q1\n"
    "4. Implications for Solving the Problem:\n1. i1\n";

backend::MockScript script_of(
    std::vector<std::pair<std::string, std::string>> entries) {
    backend::MockScript script;
    for (auto& [match, response] : entries)
        script.entries.push_back({match, response});
    return script;
}

struct FailingSource : backend::KnowledgeSource {
    std::string id() const override { return "stub"; }
    backend::FetchResult fetch(const std::string&) override {
        backend::FetchResult r;
        r.status = backend::FetchResult::Status::Error;
        r.error = "connection refused";
        return r;
    }
};

}  // namespace

TEST_CASE("prompt templates render slots and keep their checksums") {
    agents::PromptLibrary prompts(kPromptDir);
    auto names = prompts.names();
    CHECK(names.size() == 8);

    auto rendered = prompts.render("analysis", {{"question", "What is X?"}});
    CHECK(rendered.text.find("Question: What is X?") != std::string::npos);
    CHECK(rendered.text.find("{{") == std::string::npos);
    CHECK(rendered.template_name == "analysis");
    CHECK(rendered.template_sha256 ==
          util::sha256_hex(slurp(kPromptDir + "/analysis.txt")));
    CHECK(agents::PromptLibrary::rendered_contains_template(
        rendered.text, prompts.raw("analysis")));

    CHECK_THROWS(prompts.render("analysis", {{"wrong_slot", "x"}}));
    CHECK_THROWS(prompts.render("nonexistent", {}));
}

TEST_CASE("full scripted run follows the stage grammar") {
    auto script = backend::MockScript::load(kFixtureDir +
                                            "/fight_song_script.json");
    backend::MockBackend mock(script);
    auto stub = backend::StubCorpusSource(kFixtureDir + "/stub_corpus.tsv");
    agents::Pipeline pipeline(mock, {&stub}, test_config());

    auto transcript = pipeline.run(kQuestion);
    REQUIRE_FALSE(transcript.error.has_value());
    CHECK(transcript.memory.final_answer == "Kansas Song");
    CHECK_FALSE(transcript.budget_exhausted);
    CHECK(mock.exhausted());

    std::vector<std::string> expected{
        "analyze", "refine_analysis", "store",       "reason",
        "retrieve", "refine_step",    "store",       "reason",
        "refine_step", "store",       "consolidate"};
    CHECK(transcript.stage_labels() == expected);

    // the retrieval stage holds both of its calls
    for (const auto& stage : transcript.stages) {
        if (stage.label == "retrieve") CHECK(stage.calls.size() == 2);
        if (stage.label == "store") CHECK(stage.calls.empty());
    }

    REQUIRE(transcript.memory.retrieved.size() == 1);
    CHECK(transcript.memory.retrieved[0].retrieval_key ==
          "University of Kansas");
    CHECK(transcript.memory.retrieved[0].hit);
    CHECK(transcript.memory.retrieved[0].source_id == "stub");
    REQUIRE(transcript.memory.trajectory.size() == 2);
    CHECK(transcript.memory.trajectory[1].terminal);
}

TEST_CASE("scripted runs are byte-identical and match the committed golden") {
    auto script = backend::MockScript::load(kFixtureDir +
                                            "/fight_song_script.json");
    std::string first, second;
    for (std::string* out : {&first, &second}) {
        backend::MockBackend mock(script);
        auto stub = backend::StubCorpusSource(kFixtureDir + "/stub_corpus.tsv");
        agents::Pipeline pipeline(mock, {&stub}, test_config());
        *out = pipeline.run(kQuestion).to_text();
    }
    CHECK(first == second);
    CHECK(first == slurp(kFixtureDir + "/golden_transcript.json"));
}

TEST_CASE("every rendered prompt embeds its template") {
    auto script = backend::MockScript::load(kFixtureDir +
                                            "/fight_song_script.json");
    backend::MockBackend mock(script);
    auto stub = backend::StubCorpusSource(kFixtureDir + "/stub_corpus.tsv");
    agents::Pipeline pipeline(mock, {&stub}, test_config());
    auto transcript = pipeline.run(kQuestion);

    agents::PromptLibrary prompts(kPromptDir);
    for (const auto& stage : transcript.stages) {
        for (const auto& call : stage.calls) {
            CHECK(call.template_sha256 ==
                  util::sha256_hex(
                      slurp(kPromptDir + "/" + call.template_name + ".txt")));
            CHECK(agents::PromptLibrary::rendered_contains_template(
                call.prompt, prompts.raw(call.template_name)));
        }
    }
}

TEST_CASE("analysis parse failures are retried, then fatal") {
    auto script = script_of({{"", "garbage"},
                             {"", "still garbage"},
                             {"", kGoodAnalysis}});
    backend::MockBackend mock(script);
    agents::Pipeline pipeline(mock, {}, test_config());
    auto analysis = pipeline.analyze_structure("q?");
    CHECK(analysis.key_components == std::vector<std::string>{"a", "b"});
    CHECK(mock.consumed() == 3);

    auto bad = script_of({{"", "g1"}, {"", "g2"}, {"", "g3"}});
    backend::MockBackend mock2(bad);
    agents::Pipeline pipeline2(mock2, {}, test_config());
    CHECK_THROWS_AS(pipeline2.analyze_structure("q?"), agents::PipelineError);
}

TEST_CASE("step budget exhaustion still consolidates") {
    auto script = script_of(
        {{"", kGoodAnalysis},
         {"", "Judgement: approve\nReasons: fine"},
         {"", "Thought: partial progress\nRetrieval needed: no"},
         {"", "Aligned with analysis: yes\nConsistent with trajectory: yes\n"
              "Factually correct: yes\nReasons: ok"},
         {"", "Final answer: incomplete"}});
    backend::MockBackend mock(script);
    auto config = test_config();
    config.max_steps = 1;
    agents::Pipeline pipeline(mock, {}, config);
    auto transcript = pipeline.run("q?");
    REQUIRE_FALSE(transcript.error.has_value());
    CHECK(transcript.budget_exhausted);
    CHECK(transcript.memory.final_answer == "incomplete");
}

TEST_CASE("analysis revision replaces the analysis") {
    auto script = script_of(
        {{"", kGoodAnalysis},
         {"", "Judgement: revise\nReasons: missing a component\n"
              "Revised analysis:\n"
              "Better notes.\n"
              "1. Identify Key Components:\n- a\n- b\n- c\n"
              "2. Relationship between Components:\nlinked\n"
              "3. Sub-Question Decomposition:\n1. q1\n"
              "4. Implications for Solving the Problem:\n1. i1\n"}});
    backend::MockBackend mock(script);
    agents::Pipeline pipeline(mock, {}, test_config());
    auto analysis = pipeline.analyze_structure("q?");
    auto refined = pipeline.refine_analysis(analysis);
    CHECK(refined.refined);
    CHECK(refined.key_components == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("step revision swaps the thought and keeps the original in the note") {
    auto script = script_of(
        {{"", kGoodAnalysis},
         {"", "Aligned with analysis: no\nConsistent with trajectory: yes\n"
              "Factually correct: yes\nReasons: wrong order\n"
              "Revised step: identify the university first"}});
    backend::MockBackend mock(script);
    agents::Pipeline pipeline(mock, {}, test_config());
    auto transcript_question = std::string("q?");
    auto analysis = pipeline.analyze_structure(transcript_question);
    (void)analysis;
    agents::ReasoningStep step;
    step.thought = "find the fight song first";
    auto result = pipeline.refine_step(step);
    CHECK_FALSE(result.aligned_with_analysis);
    CHECK(step.thought == "identify the university first");
    CHECK(pipeline.transcript().stages.back().note ==
          "original thought: find the fight song first");
}

TEST_CASE("retrieval misses report suggestions without an extraction call") {
    auto script = script_of(
        {{"", "Retrieval key: Kansas University\nSource: stub\nReason: r"}});
    backend::MockBackend mock(script);
    auto stub = backend::StubCorpusSource(kFixtureDir + "/stub_corpus.tsv");
    agents::Pipeline pipeline(mock, {&stub}, test_config());
    auto knowledge = pipeline.retrieve("some requirement");
    CHECK_FALSE(knowledge.hit);
    CHECK(knowledge.source_id == "stub");
    CHECK(!knowledge.suggestions.empty());
    CHECK(mock.consumed() == 1);
}

TEST_CASE("unreachable sources fail over to the next configured source") {
    auto script = script_of(
        {{"", "Retrieval key: University of Kansas\nSource: stub\nReason: r"},
         {"", "Extracted info: found it"}});
    backend::MockBackend mock(script);
    FailingSource failing;
    auto stub = backend::StubCorpusSource(kFixtureDir + "/stub_corpus.tsv");
    agents::Pipeline pipeline(mock, {&failing, &stub}, test_config());
    auto knowledge = pipeline.retrieve("requirement");
    CHECK(knowledge.hit);
    CHECK(knowledge.extracted == "found it");
}

TEST_CASE("pipeline failures surface in the transcript, not as throws") {
    auto script = script_of({{"never matches the prompt text q7q8q9", "x"}});
    backend::MockBackend mock(script);
    agents::Pipeline pipeline(mock, {}, test_config());
    auto transcript = pipeline.run("q?");
    REQUIRE(transcript.error.has_value());
    CHECK(transcript.error->find("analyze") != std::string::npos);
}

TEST_CASE("consolidate runs once and never returns an empty answer") {
    auto script = script_of(
        {{"", kGoodAnalysis},
         {"", "Judgement: approve\nReasons: fine"},
         {"", "Thought: done\nRetrieval needed: no\nFINAL ANSWER READY"},
         {"", "Aligned with analysis: yes\nConsistent with trajectory: yes\n"
              "Factually correct: yes\nReasons: ok"},
         {"", "the plain answer on the last line"}});
    backend::MockBackend mock(script);
    agents::Pipeline pipeline(mock, {}, test_config());
    auto transcript = pipeline.run("q?");
    REQUIRE_FALSE(transcript.error.has_value());
    // no marked line: fall back to the last non-empty line
    CHECK(transcript.memory.final_answer == "the plain answer on the last line");
}
