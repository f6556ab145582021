#include <gtest/gtest.h>

#include "sketchlab/draw.hpp"
#include "sketchlab/eval.hpp"
#include "sketchlab/group.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/live_sync.hpp"
#include "test_util.hpp"

using namespace sketchlab;

namespace {

std::string flat(const Program& p) {
    RenderOptions o;
    o.flattenGroups = true;
    return renderSvg(evaluate(p), o);
}

std::string svg(const Program& p) { return renderSvg(evaluate(p)); }

template <typename F>
std::string errorCode(F&& f) {
    try {
        f();
    } catch (const ToolError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST(Group, OverviewThirdListing) {
    Program related = testutil::load("golden/overview_related.little");
    Program g = group(related, {0, 1, 2});
    EXPECT_EQ(flat(g), flat(related));
    std::string code = unparse(g);
    EXPECT_NE(code.find("(def [left top right bot] [31 100 216 269])"), std::string::npos) << code;
    EXPECT_NE(code.find("(blobs [ newGroup4 ])"), std::string::npos) << code;

    AbstractResult a = abstractBlob(g, 0);
    EXPECT_TRUE(a.hasBounds);
    EXPECT_EQ(a.function, "newGroup4");
    std::string abs = unparse(a.program);
    EXPECT_NE(abs.find("(λ (line2_width line2_color color [left top right bot])"), std::string::npos) << abs;
    EXPECT_NE(abs.find("((newGroup4 5 202 60) [31 100 216 269])"), std::string::npos) << abs;
    EXPECT_EQ(testutil::canonical(abs), testutil::canonical(testutil::readFile("golden/overview_grouped.little")));
    EXPECT_EQ(flat(a.program), flat(related));
    auto tools = listLambdaTools(a.program);
    EXPECT_NE(std::find(tools.begin(), tools.end(), "newGroup4"), tools.end());
}

TEST(Group, PercentagesForInteriorChildren) {
    Program p = parse(
        "(def a [ (rectangle 1 'black' '0' 0 [0 0 100 50]) ])\n"
        "(def b [ (rectangle 2 'black' '0' 0 [34 10 50 40]) ])\n"
        "(blobs [ a b ])");
    Program g = group(p, {0, 1});
    std::string code = unparse(g);
    EXPECT_NE(code.find("(scaleBetween left right 0.34?)"), std::string::npos) << code;
    EXPECT_NE(code.find("(scaleBetween top bot 0.2?)"), std::string::npos) << code;
    EXPECT_EQ(flat(g), flat(p));
}

TEST(Group, ScalingGroupStretchesChildren) {
    Program p = parse(
        "(def a [ (rectangle 1 'black' '0' 0 [0 0 100 100]) ])\n"
        "(def b [ (line 2 3 50 50 100 100) ])\n"
        "(blobs [ a b ])");
    Program g = group(p, {0, 1});
    // Move the group's right edge: the line's start follows proportionally.
    std::string code = unparse(g);
    auto pos = code.find("[0 0 100 100]");
    ASSERT_NE(pos, std::string::npos) << code;
    code.replace(pos, 13, "[0 0 200 100]");
    Canvas c = evaluate(parse(code));
    const SvgNode* line = &c.root[0].children[1];
    EXPECT_EQ(line->num("x1")->value, 100);
    EXPECT_EQ(line->num("x2")->value, 200);
}

TEST(Group, Errors) {
    Program related = testutil::load("golden/overview_related.little");
    EXPECT_EQ(errorCode([&] { group(related, {1, 1}); }), "EmptySelection");
    EXPECT_EQ(errorCode([&] { group(related, {}); }), "EmptySelection");
    EXPECT_EQ(errorCode([&] { group(related, {0, 9}); }), "BadBlob");
    EXPECT_EQ(errorCode([&] { group(parse("[ (line 1 2 0 0 5 5) ]"), {0, 1}); }), "NotSimple");
}

TEST(Abstract, NoBoundsPattern) {
    Program p = parse("(def a (let [color width] [5 3] [ (line color width 0 0 9 9) ]))\n(blobs [ a ])");
    AbstractResult r = abstractBlob(p, 0);
    EXPECT_FALSE(r.hasBounds);
    EXPECT_NE(unparse(r.program).find("(a 5 3)"), std::string::npos) << unparse(r.program);
    EXPECT_EQ(svg(r.program), svg(p));
    EXPECT_TRUE(listLambdaTools(r.program).empty());
}

TEST(Abstract, BoundsOnly) {
    Program p = parse("(def a (let [left top right bot] [1 2 30 40] [ (rectangle 7! 'black' '0' 0! [left top right bot]) ]))\n"
                      "(blobs [ a ])");
    AbstractResult r = abstractBlob(p, 0);
    std::string code = unparse(r.program);
    EXPECT_NE(code.find("(λ ([left top right bot])"), std::string::npos) << code;
    EXPECT_NE(code.find("((a) [1 2 30 40])"), std::string::npos) << code;
    EXPECT_EQ(svg(r.program), svg(p));
    Program stamped = drawLambda(r.program, "a", {5, 5, 50, 60});
    EXPECT_EQ(evaluate(stamped).root.size(), 2u);
}

TEST(Abstract, DuplicateNamesAreFreshened) {
    Program p = parse(
        "(def a (let color 5 (let s (let color 7 [ (line color 1 0 0 2 2) ]) (concat [ s [ (line color 2 0 0 3 3) ] ]))))\n"
        "(blobs [ a ])");
    AbstractResult r = abstractBlob(p, 0);
    EXPECT_EQ(svg(r.program), svg(p)) << unparse(r.program);
}

TEST(Duplicate, IndependentCopy) {
    Program drawn = testutil::load("golden/overview_drawn.little");
    Program d = duplicate(drawn, 0);
    std::string code = unparse(d);
    EXPECT_NE(code.find("(def rect4"), std::string::npos) << code;
    EXPECT_NE(code.find("(blobs [ rect1 line2 line3 rect4 ])"), std::string::npos) << code;
    Canvas c = evaluate(d);
    ASSERT_EQ(c.root.size(), 4u);
    EXPECT_EQ(renderSvg({{c.root[0]}, {}, {}}), renderSvg({{c.root[3]}, {}, {}}));

    DragResult moved = applyDrag(d, c, {3}, 10, 0, "edge:left");
    Canvas c2 = evaluate(moved.program);
    EXPECT_EQ(c2.root[3].num("left")->value, 41);
    EXPECT_EQ(c2.root[0].num("left")->value, 31);
}

TEST(Duplicate, LambdaCall) {
    Program p = parse("(def f (λ (c [left top right bot]) [ (rectangle c 'black' '0' 0 [left top right bot]) ]))\n"
                      "(blobs [ ((f 3) [0 0 10 10]) ])");
    Program d = duplicate(p, 0);
    EXPECT_NE(unparse(d).find("(blobs [ ((f 3) [0 0 10 10]) ((f 3) [0 0 10 10]) ])"), std::string::npos);
}

TEST(Merge, OneParameterForDifferingOffset) {
    Program p = parse(
        "(def steam1 (let x 10 [ (line 1 2 x 0 x 20) ]))\n"
        "(def steam2 (let x 30 [ (line 1 2 x 0 x 20) ]))\n"
        "(def steam3 (let x 50 [ (line 1 2 x 0 x 20) ]))\n"
        "(blobs [ steam1 steam2 steam3 ])");
    Program m = merge(p, {0, 1, 2});
    std::string code = unparse(m);
    EXPECT_NE(code.find("(λ (x)"), std::string::npos) << code;
    EXPECT_NE(code.find("(merged4 10)"), std::string::npos) << code;
    EXPECT_NE(code.find("(merged4 50)"), std::string::npos) << code;
    EXPECT_EQ(svg(m), svg(p));
}

TEST(Merge, VerbatimDuplicatesHaveNoParameters) {
    Program drawn = testutil::load("golden/overview_drawn.little");
    Program d = duplicate(drawn, 1);
    Program m = merge(d, {1, 3});
    std::string code = unparse(m);
    EXPECT_NE(code.find("(λ ()"), std::string::npos) << code;
    EXPECT_EQ(svg(m), svg(d));
    EXPECT_EQ(unparse(parse(code)), code);
}

TEST(Merge, StructuralMismatch) {
    Program p = parse("(def a [ (line 1 2 0 0 5 5) ])\n(def b [ (line 1 2 0 0 5 5) (line 1 2 0 0 5 5) ])\n(blobs [ a b ])");
    EXPECT_EQ(errorCode([&] { merge(p, {0, 1}); }), "NotStructurallyEquivalent");
}
