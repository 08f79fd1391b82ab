#include <doctest.h>

#include "sara/agents/pipeline.hpp"
#include "sara/agents/section_parser.hpp"

using namespace sara::agents;

TEST_CASE("headings match despite numbering, case and colons") {
    SectionSchema schema{{
        {"Identify Key Components", true, {}},
        {"Sub-Question Decomposition", true, {"Sub-Questions"}},
    }};
    std::string text =
        "Some preamble about grammar.\n"
        "1. identify key components\n- a\n- b\n"
        "(2) SUB-QUESTIONS:\n- q1\n";
    auto parsed = parse_structured(text, schema);
    CHECK(parsed.preamble == "Some preamble about grammar.");
    REQUIRE(parsed.find("Identify Key Components") != nullptr);
    CHECK(*parsed.find("Identify Key Components") == "- a\n- b");
    REQUIRE(parsed.find("Sub-Question Decomposition") != nullptr);
    CHECK(*parsed.find("Sub-Question Decomposition") == "- q1");
}

TEST_CASE("missing required heading names itself in the error") {
    SectionSchema schema{{{"Reasons", true, {}}}};
    try {
        parse_structured("no sections here", schema);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.missing_heading == "Reasons");
    }
}

TEST_CASE("inline content after the heading colon is captured") {
    SectionSchema schema{{{"Thought", true, {}}}};
    auto parsed = parse_structured("Thought: reason about x\n", schema);
    CHECK(*parsed.find("Thought") == "reason about x");
}

TEST_CASE("split_items strips bullets and numbering") {
    auto items = split_items("- alpha\n* beta\n3. gamma\n\n4) delta");
    CHECK(items == std::vector<std::string>{"alpha", "beta", "gamma", "delta"});
    auto inline_items = split_items("alpha, beta, gamma");
    CHECK(inline_items ==
          std::vector<std::string>{"alpha", "beta", "gamma"});
}

TEST_CASE("analysis parser needs all four sections") {
    std::string good =
        "Grammar notes here.\n"
        "1. Identify Key Components:\n- fight song\n- university\n"
        "2. Relationship between Components:\nlinked by identity\n"
        "3. Sub-Question Decomposition:\n1. which university?\n"
        "4. Implications for Solving the Problem:\n1. narrows the search\n";
    auto analysis = parse_analysis(good);
    CHECK(analysis.grammar_notes == "Grammar notes here.");
    CHECK(analysis.key_components ==
          std::vector<std::string>{"fight song", "university"});
    CHECK(analysis.sub_questions ==
          std::vector<std::string>{"which university?"});
    CHECK_FALSE(analysis.refined);

    CHECK_THROWS_AS(parse_analysis("1. Identify Key Components:\n- x\n"),
                    ParseError);
    // components section present but empty
    std::string empty_components =
        "1. Identify Key Components:\n"
        "2. Relationship between Components:\nr\n"
        "3. Sub-Question Decomposition:\n- q\n"
        "4. Implications for Solving the Problem:\n- i\n";
    CHECK_THROWS_AS(parse_analysis(empty_components), ParseError);
}

TEST_CASE("reasoning parser handles retrieval and the terminal marker") {
    auto step = parse_reasoning(
        "Thought: look up the university\nRetrieval needed: yes\n"
        "Retrieval query: university in Lawrence\n",
        "FINAL ANSWER READY");
    CHECK(step.thought == "look up the university");
    CHECK(step.needs_retrieval);
    CHECK(step.retrieval_query == "university in Lawrence");
    CHECK_FALSE(step.terminal);

    auto done = parse_reasoning(
        "Thought: the answer is known\nRetrieval needed: no\n"
        "FINAL ANSWER READY\n",
        "FINAL ANSWER READY");
    CHECK(done.terminal);
    CHECK_FALSE(done.needs_retrieval);

    CHECK_THROWS_AS(parse_reasoning("no structured output", "FINAL"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_reasoning("Thought: t\nRetrieval needed: yes\n", "FINAL"),
        ParseError);
}

TEST_CASE("refinement parser reads flags, reasons and revisions") {
    auto result = parse_refinement(
        "Aligned with analysis: yes\nConsistent with trajectory: no\n"
        "Factually correct: yes\nReasons: the step skips sub-question 1\n"
        "Revised step: identify the university first\n");
    CHECK(result.aligned_with_analysis);
    CHECK_FALSE(result.consistent_with_trajectory);
    CHECK(result.factually_correct);
    CHECK(result.reasons == "the step skips sub-question 1");
    CHECK(result.revised_text == "identify the university first");

    CHECK_THROWS_AS(parse_refinement("Reasons: missing the flags"),
                    ParseError);
}
