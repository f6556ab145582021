#include <gtest/gtest.h>

#include <cmath>

#include "sketchlab/draw.hpp"
#include "sketchlab/eval.hpp"
#include "sketchlab/features.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/relate.hpp"
#include "test_util.hpp"

using namespace sketchlab;

namespace {

std::string svg(const Program& p) { return renderSvg(evaluate(p)); }

double value(const Program& p, const std::string& id) {
    Canvas c = evaluate(p);
    auto fs = featuresOf(p, c);
    const Feature* f = findFeature(fs, id);
    return f ? f->value : NAN;
}

Program overviewScript() {
    Program p = testutil::load("golden/overview_drawn.little");
    p = makeEqual(p, {"rect1/topLeft", "line2/start"});
    p = makeEqual(p, {"rect1/botLeft", "line3/start"});
    p = makeEqual(p, {"rect1/botRight", "line2/end"});
    p = makeEqual(p, {"rect1/center", "line3/end"});
    p = makeEqual(p, {"line2/width", "line3/width"});
    p = makeEqual(p, {"line2/color", "line3/color"});
    return p;
}

}  // namespace

TEST(DigHole, LiftsCornerAndEndpoint) {
    Program p = testutil::load("golden/overview_drawn.little");
    DigResult r = digHole(p, {"rect1/left", "rect1/top", "line2/x1", "line2/y1"});
    std::string code = unparse(r.program);
    EXPECT_NE(code.find("(def [rect1_left rect1_top line2_x1 line2_y1] [31 100 81 76])"), std::string::npos) << code;
    EXPECT_NE(code.find("(def [rect1_left' rect1_top' line2_x1' line2_y1']\n  [rect1_left rect1_top line2_x1 line2_y1])"),
              std::string::npos)
        << code;
    EXPECT_EQ(r.hole.primedNames.size(), 4u);
    EXPECT_EQ(svg(r.program), svg(p));
}

TEST(DigHole, DerivedFeatureDefs) {
    Program p = testutil::load("golden/overview_drawn.little");
    DigResult r = digHole(p, {"rect1/center", "line3/end"});
    std::string code = unparse(r.program);
    EXPECT_NE(code.find("(def rect1_boxCX (* 0.5! (+ rect1_left rect1_right)))"), std::string::npos) << code;
    EXPECT_NE(code.find("(def rect1_boxCY"), std::string::npos);
    EXPECT_EQ(svg(r.program), svg(p));
}

TEST(DigHole, Errors) {
    Program p = testutil::load("golden/overview_drawn.little");
    try {
        digHole(p, {"rect1/left"});
        FAIL();
    } catch (const ToolError& e) {
        EXPECT_EQ(e.code(), "NeedTwoFeatures");
    }
    try {
        digHole(p, {"rect1/left", "nope/x"});
        FAIL();
    } catch (const ToolError& e) {
        EXPECT_EQ(e.code(), "UnknownFeature");
    }
    Program frozen = parse("(def a [ (line 1! 2! 0! 0! 5! 5!) ])\n(blobs [ a ])");
    try {
        digHole(frozen, {"a/x1", "a/x2"});
        FAIL();
    } catch (const ToolError& e) {
        EXPECT_EQ(e.code(), "NothingToLift");
    }
}

TEST(MakeEqual, OverviewReachesSecondListing) {
    Program p = overviewScript();
    EXPECT_EQ(unparse(p), testutil::readFile("golden/overview_related.little"));
}

TEST(MakeEqual, SelectedValuesEqual) {
    Program p = testutil::load("golden/overview_drawn.little");
    Program q = makeEqual(p, {"rect1/botRight", "line2/end"});
    EXPECT_NEAR(value(q, "rect1/right"), value(q, "line2/x2"), 1e-6);
    EXPECT_NEAR(value(q, "rect1/bot"), value(q, "line2/y2"), 1e-6);
    EXPECT_EQ(value(q, "rect1/right"), 216);
}

TEST(MakeEqual, PolygonPercentageBecomesFrozenOne) {
    Program p = drawShape(parse("(blobs [])"),
                          {"polygon", {{94, 263}, {212.37, 246.8}, {227, 123.68}, {133.9, 101}, {107.3, 151.22}}, 1});
    Program q = makeEqual(p, {"polygon1/point:0:y", "polygon1/point:1:y"});
    std::string code = unparse(q);
    EXPECT_NE(code.find("(def k1 1!)"), std::string::npos) << code;
    EXPECT_NE(code.find("[0.89? k1]"), std::string::npos) << code;
    EXPECT_NEAR(value(q, "polygon1/point:0:y"), value(q, "polygon1/point:1:y"), 1e-6);
}

TEST(MakeEqual, AlreadySharedIsUnchanged) {
    Program p = overviewScript();
    EXPECT_EQ(unparse(makeEqual(p, {"line2/width", "line3/width"})), unparse(p));
}

TEST(MakeEqual, FrozenOnlyFails) {
    Program p = parse("(def a [ (line 1 2 0! 0! 5! 5!) ])\n(def b [ (line 1 2 3! 3! 7! 7!) ])\n(blobs [ a b ])");
    try {
        makeEqual(p, {"a/x1", "b/x1"});
        FAIL();
    } catch (const ToolError& e) {
        EXPECT_EQ(e.code(), "SolverFailed");
    }
}

TEST(CleanUp, IdempotentAndPreserving) {
    Program p = testutil::load("golden/overview_drawn.little");
    DigResult r = digHole(p, {"rect1/topLeft", "line2/start"});
    Program once = cleanUp(r.program);
    EXPECT_EQ(unparse(cleanUp(once)), unparse(once));
    EXPECT_EQ(svg(once), svg(p));
    EXPECT_EQ(unparse(cleanUp(p)), unparse(p));
    Program related = testutil::load("golden/overview_related.little");
    EXPECT_EQ(unparse(cleanUp(related)), unparse(related));
}

TEST(CleanUp, RemovesUnusedDerivedDef) {
    Program p = parse("(def a 3)\n(def a_w (* 2! a))\n(def s [ (line 1 a 0 0 5 5) ])\n(blobs [ s ])");
    std::string code = unparse(cleanUp(p));
    EXPECT_EQ(code.find("a_w"), std::string::npos) << code;
}

TEST(ExprOfTrace, FrozenLeaves) {
    Trace t = opNode("*", {opaque(0.5), opNode("+", {locLeaf(0), locLeaf(1)})});
    Expr e = exprOfTrace(t, [](LocId l) { return l == 0 ? std::string("a") : std::string("b"); });
    EXPECT_EQ(unparseExpr(e), "(* 0.5! (+ a b))");
}

TEST(MakeEqual, FallsBackWhenLeftOnlyConstantsAreNonlinear) {
    Program p = parse(
        "(def [a b] [21 118])\n"
        "(def r1 [ (rectangle 54 'black' '0' 0 [(+ a (* (/ 0! (- b a)) (- b a))) 18 220 223]) ])\n"
        "(def l2 [ (line 1 2 25 124 218 222) ])\n"
        "(blobs [ r1 l2 ])");
    Program q = makeEqual(p, {"l2/x1", "r1/left"});
    EXPECT_NEAR(value(q, "l2/x1"), value(q, "r1/left"), 1e-6) << unparse(q);
}
