#include <gtest/gtest.h>

#include <set>

#include "sketchlab/session.hpp"
#include "test_util.hpp"

using namespace sketchlab;

namespace {

Json call(Session& s, const std::string& kind, Json payload = Json::object()) {
    static int next = 0;
    return handleRequest(s, {{"id", ++next}, {"kind", kind}, {"payload", std::move(payload)}});
}

Json ok(Session& s, const std::string& kind, Json payload = Json::object()) {
    Json r = call(s, kind, std::move(payload));
    EXPECT_TRUE(r["ok"].get<bool>()) << kind << ": " << r.dump();
    return r;
}

std::string code(Session& s) { return ok(s, "getCode")["payload"]["code"]; }

void drawOverview(Session& s) {
    ok(s, "draw", {{"tool", "rect"}, {"points", {{31, 100}, {216, 269}}}, {"seed", 33}});
    ok(s, "draw", {{"tool", "line"}, {"points", {{81, 76}, {190, 241}}}, {"seed", 395}});
    ok(s, "draw", {{"tool", "line"}, {"points", {{56, 258}, {101, 199}}}, {"seed", 52}});
}

}  // namespace

TEST(Session, OverviewThroughProtocol) {
    Session s;
    drawOverview(s);
    EXPECT_EQ(code(s), testutil::readFile("golden/overview_drawn.little"));
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"rect1/topLeft", "line2/start"}, {"rect1/botLeft", "line3/start"}, {"rect1/botRight", "line2/end"},
        {"rect1/center", "line3/end"},    {"line2/width", "line3/width"},   {"line2/color", "line3/color"}};
    for (const auto& [a, b] : pairs) {
        ok(s, "select", {{"feature", a}});
        ok(s, "select", {{"feature", b}});
        Json r = ok(s, "makeEqual");
        EXPECT_TRUE(r["payload"]["selection"].empty());
    }
    EXPECT_EQ(code(s), testutil::readFile("golden/overview_related.little"));
    ok(s, "group", {{"blobs", {0, 1, 2}}});
    Json r = ok(s, "abstract", {{"blob", 0}});
    EXPECT_EQ(testutil::canonical(r["payload"]["code"]), testutil::canonical(testutil::readFile("golden/overview_grouped.little")));
    EXPECT_EQ(r["payload"]["lambdas"], Json::array({"newGroup4"}));
}

TEST(Session, UndoRestoresExactText) {
    Session s;
    drawOverview(s);
    std::string before = code(s);
    ok(s, "makeEqual", {{"features", {"rect1/topLeft", "line2/start"}}});
    EXPECT_NE(code(s), before);
    ok(s, "undo");
    EXPECT_EQ(code(s), before);
}

TEST(Session, UndoStackIsBounded) {
    Session s;
    for (int i = 0; i < 105; ++i) ok(s, "draw", {{"tool", "line"}, {"points", {{0, 0}, {10, i}}}, {"seed", i}});
    EXPECT_EQ(s.undo.size(), kUndoLimit);
    for (size_t i = 0; i < kUndoLimit; ++i) ok(s, "undo");
    Json r = call(s, "undo");
    EXPECT_FALSE(r["ok"].get<bool>());
    EXPECT_EQ(r["error"], "NothingToUndo");
}

TEST(Session, FailedRequestLeavesSessionUntouched) {
    Session s;
    drawOverview(s);
    ok(s, "select", {{"feature", "rect1/left"}});
    std::string before = code(s);
    size_t depth = s.undo.size();

    Json r = call(s, "makeEqual");
    EXPECT_EQ(r["error"], "NeedTwoFeatures");
    r = call(s, "load", {{"source", "(def x"}});
    EXPECT_EQ(r["error"], "ParseError");
    r = call(s, "load", {{"source", "(blobs [ nope ])"}});
    EXPECT_EQ(r["error"], "EvalError");
    r = call(s, "group", {{"blobs", {0}}});
    EXPECT_EQ(r["error"], "EmptySelection");
    r = call(s, "select", {{"feature", "rect1/nothing"}});
    EXPECT_EQ(r["error"], "UnknownFeature");
    r = call(s, "draw", {{"tool", "rect"}});
    EXPECT_EQ(r["error"], "BadRequest");
    r = call(s, "frobnicate");
    EXPECT_EQ(r["error"], "UnknownKind");

    EXPECT_EQ(code(s), before);
    EXPECT_EQ(s.undo.size(), depth);
    EXPECT_EQ(s.selection, std::vector<std::string>{"rect1/left"});
}

TEST(Session, LiveDragRecordsOneUndoStep) {
    Session s;
    drawOverview(s);
    std::string before = code(s);
    size_t depth = s.undo.size();
    for (int d = 1; d <= 5; ++d)
        ok(s, "drag", {{"nodePath", {0}}, {"zone", "interior"}, {"dx", d}, {"dy", 0}, {"live", true}});
    Json r = ok(s, "drag", {{"nodePath", {0}}, {"zone", "interior"}, {"dx", 10}, {"dy", 10}});
    EXPECT_EQ(r["payload"]["applied"], 4);
    EXPECT_NE(std::string(r["payload"]["code"]).find("[41 110 226 279]"), std::string::npos);
    EXPECT_EQ(s.undo.size(), depth + 1);
    ok(s, "undo");
    EXPECT_EQ(code(s), before);
}

TEST(Session, EveryKindIsReachable) {
    Session s;
    std::set<std::string> seen;
    auto run = [&](const std::string& kind, Json payload = Json::object()) {
        seen.insert(kind);
        return ok(s, kind, std::move(payload));
    };
    run("load", {{"source", testutil::readFile("golden/overview_drawn.little")}});
    run("getCode");
    Json svg = run("getSvg");
    EXPECT_EQ(std::string(svg["payload"]["svg"]).rfind("<svg", 0), 0u);
    run("listFeatures");
    run("listLambdas");
    run("draw", {{"tool", "oval"}, {"points", {{0, 0}, {20, 30}}}});
    run("select", {{"features", {"rect1/left", "line2/x1"}}});
    run("deselect", {{"feature", "line2/x1"}});
    run("clearSelection");
    run("digHole", {{"features", {"rect1/left", "line2/x1"}}});
    run("cleanUp");
    run("makeEqual", {{"features", {"rect1/top", "line2/y1"}}});
    run("setAttr", {{"nodePath", {1}}, {"attr", "x2"}, {"value", 200}});
    run("drag", {{"nodePath", {0}}, {"zone", "edge:left"}, {"dx", 3}, {"dy", 0}});
    run("duplicate", {{"blob", 3}});
    run("merge", {{"blobs", {3, 4}}});
    run("group", {{"blobs", {0, 1}}});
    Json a = run("abstract", {{"blob", 0}});
    EXPECT_FALSE(a["payload"]["lambdas"].empty());
    run("toggleGhosts");
    run("draw", {{"tool", "lambda"}, {"fn", a["payload"]["function"]}, {"bounds", {0, 0, 50, 50}}});
    run("undo");
    for (const auto& k : requestKinds()) EXPECT_TRUE(seen.count(k)) << k;
}

TEST(Session, FeaturesPayload) {
    Session s;
    ok(s, "load", {{"source", testutil::readFile("golden/overview_drawn.little")}});
    Json r = ok(s, "select", {{"feature", "rect1/center"}});
    EXPECT_EQ(r["payload"]["selection"], Json::array({"rect1/boxCX", "rect1/boxCY"}));
    size_t crosshairs = 0;
    for (const auto& w : r["payload"]["widgets"])
        if (w["shape"] == "rect1" && w["kind"] == "crosshair") ++crosshairs;
    EXPECT_EQ(crosshairs, 9u);
    bool selectedFlag = false;
    for (const auto& f : r["payload"]["features"])
        if (f["id"] == "rect1/boxCX") selectedFlag = f["selected"];
    EXPECT_TRUE(selectedFlag);
}

TEST(SessionStore, SeparateSessionsAndMalformedJson) {
    SessionStore store;
    store.handle({{"id", 1}, {"session", "a"}, {"kind", "draw"},
                  {"payload", {{"tool", "rect"}, {"points", {{0, 0}, {5, 5}}}}}});
    Json b = store.handle({{"id", 2}, {"session", "b"}, {"kind", "getCode"}});
    EXPECT_EQ(b["payload"]["code"], "(blobs [])\n");
    Json a = store.handle({{"id", 3}, {"session", "a"}, {"kind", "getCode"}});
    EXPECT_NE(std::string(a["payload"]["code"]).find("rect1"), std::string::npos);
    Json bad = Json::parse(store.handleText("{not json"));
    EXPECT_FALSE(bad["ok"].get<bool>());
    EXPECT_EQ(bad["error"], "BadRequest");
}
