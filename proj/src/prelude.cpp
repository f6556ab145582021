#include "sketchlab/prelude.hpp"

#include <array>
#include <set>
#include <string>

#include "sketchlab/little.hpp"

namespace sketchlab {
namespace {

constexpr std::string_view kPrelude = R"(; standard library

(def scaleBetween (λ (a b pct) (+ a (* pct (- b a)))))

; percentages of exactly 0 or 1 land on the bound itself
(def stretchCoord
  (λ (a b pct) (if (= pct 0) a (if (= pct 1) b (scaleBetween a b pct)))))

(def stretchyPolygon
  (λ (bounds color stroke width pcts)
    (let [left top right bot] bounds
    (let toPoint (λ ([px py]) [(stretchCoord left right px) (stretchCoord top bot py)])
      (polygonShape bounds color stroke width (map toPoint pcts))))))

(def stretchyPath
  (λ (bounds color stroke width cmds)
    (let [left top right bot] bounds
    (let toPoint (λ ([px py]) [(stretchCoord left right px) (stretchCoord top bot py)])
    (let toCmd (λ (cmd) (cons (first cmd) (map toPoint (rest cmd))))
      (pathShape bounds color stroke width (map toCmd cmds)))))))

; each offset is [[xCorner dx] [yCorner dy]]
(def stickyPolygon
  (λ (bounds color stroke width offsets)
    (let toPoint (λ ([[x dx] [y dy]]) [(+ x dx) (+ y dy)])
      (polygonShape bounds color stroke width (map toPoint offsets)))))

(def addShapeToCanvas (λ (canvas shapes) (append canvas shapes)))

[]
)";

// Implemented in the evaluator.
constexpr std::array kNatives = {
    "rectangle", "line",  "oval",  "polygonShape", "pathShape", "group", "ghost", "concat",
    "append",    "blobs", "map",   "first",        "rest",      "cons",  "len",   "nth",
};

}  // namespace

std::string_view preludeSource() { return kPrelude; }

const Expr& preludeExpr() {
    static const Expr expr = [] {
        Program p = parse(kPrelude);
        // Library constants never take part in solving.
        forEachNode(p.root, [](Expr& e) {
            if (e.kind == ExprKind::Num) {
                e.annot = Annotation::Frozen;
                e.loc = kNoLoc;
            }
        });
        return p.root;
    }();
    return expr;
}

bool isPreludeName(std::string_view name) {
    static const std::set<std::string, std::less<>> names = [] {
        std::set<std::string, std::less<>> s(kNatives.begin(), kNatives.end());
        TopLevel t = TopLevel::split(preludeExpr());
        for (const auto& d : t.defs) {
            std::vector<std::string> ns;
            d.pat.boundNames(ns);
            s.insert(ns.begin(), ns.end());
        }
        return s;
    }();
    return names.count(name) > 0;
}

}  // namespace sketchlab
