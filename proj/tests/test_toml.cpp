#include <string>

#include "doctest.h"
#include "pmcf/toml.hpp"

using namespace pmcf;
using toml::Document;

namespace {

const char* kSample = R"(# scenario sample
title = "demo run"        # inline comment
enabled = true

[flow]
cfl = 0.25
steps = 1200
tags = [1.0, 2.5, -3.0,]  # trailing comma allowed

[grid.sub]
kind = "sinh"
)";

} // namespace

TEST_CASE("scalars, tables and arrays parse with dotted lookup keys") {
    const Document doc = Document::parse_string(kSample, "sample.toml");
    CHECK(doc.get_string("title", "") == "demo run");
    CHECK(doc.get_bool("enabled", false));
    CHECK(doc.get_float("flow.cfl", 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(doc.get_int("flow.steps", 0) == 1200);
    CHECK(doc.get_string("grid.sub.kind", "") == "sinh");
    const std::vector<double> tags = doc.get_float_array("flow.tags");
    REQUIRE(tags.size() == 3);
    CHECK(tags[0] == 1.0);
    CHECK(tags[2] == -3.0);
    // Integers satisfy float lookups.
    CHECK(doc.get_float("flow.steps", 0.0) == 1200.0);
    CHECK(doc.line_of("flow.cfl") == 6);
    CHECK(doc.origin() == "sample.toml");
}

TEST_CASE("fallbacks apply only to absent keys") {
    const Document doc = Document::parse_string("x = 3\n");
    CHECK(doc.get_int("x", 7) == 3);
    CHECK(doc.get_int("y", 7) == 7);
    CHECK(doc.get_string("z", "dflt") == "dflt");
    CHECK(!doc.has("y"));
    CHECK(doc.has("x"));
}

TEST_CASE("unconsumed keys are reported for unknown-key rejection") {
    const Document doc = Document::parse_string("a = 1\nb = 2\n");
    CHECK(doc.get_int("a", 0) == 1);
    const auto leftovers = doc.unconsumed();
    REQUIRE(leftovers.size() == 1);
    CHECK(leftovers[0] == "b");
}

TEST_CASE("type mismatches throw ValidationError naming the key") {
    const Document doc = Document::parse_string("flag = true\nnum = 4\n");
    CHECK_THROWS_AS(doc.get_float("flag", 0.0), ValidationError);
    CHECK_THROWS_AS(doc.get_string("num", ""), ValidationError);
    CHECK_THROWS_AS(doc.get_bool("num", false), ValidationError);
    try {
        doc.get_float("flag", 0.0);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("flag") != std::string::npos);
    }
}

TEST_CASE("malformed constructs fail with ParseError and a line number") {
    CHECK_THROWS_AS(Document::parse_string("[flow\ncfl = 1\n"), ParseError);
    CHECK_THROWS_AS(Document::parse_string("a = 1\na = 2\n"), ParseError);       // duplicate
    CHECK_THROWS_AS(Document::parse_string("flow.cfl = 1\n"), ParseError);       // dotted key
    CHECK_THROWS_AS(Document::parse_string("a = \n"), ParseError);               // missing value
    CHECK_THROWS_AS(Document::parse_string("a = [1, \"x\"\n"), ParseError);      // unclosed array
    try {
        Document::parse_string("ok = 1\n[flow\n", "bad.toml");
        CHECK(false);
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.toml") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);  // failing line number
    }
    try {
        Document::parse_string("flow.cfl = 1\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("use a [table] header") != std::string::npos);
    }
}

TEST_CASE("strings keep hashes and escapes inside quotes") {
    const Document doc = Document::parse_string("s = \"a # not comment\"\n");
    CHECK(doc.get_string("s", "") == "a # not comment");
}
