#include "sketchlab/draw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <cctype>
#include <optional>
#include <set>

#include "sketchlab/little.hpp"
#include "sketchlab/prelude.hpp"

namespace sketchlab {
namespace {

std::string n0(double v) { return formatNumber(std::round(v), 0); }

// Integer bounds spanning the points, at least 1x1.
std::array<double, 4> boundsOf(const std::vector<std::pair<double, double>>& pts) {
    double l = pts[0].first, r = l, t = pts[0].second, b = t;
    for (const auto& [x, y] : pts) {
        l = std::min(l, x), r = std::max(r, x);
        t = std::min(t, y), b = std::max(b, y);
    }
    l = std::round(l), t = std::round(t), r = std::round(r), b = std::round(b);
    if (r - l < 1) r = l + 1;
    if (b - t < 1) b = t + 1;
    return {l, t, r, b};
}

std::string boundsText(const std::array<double, 4>& b) {
    return "[" + n0(b[0]) + " " + n0(b[1]) + " " + n0(b[2]) + " " + n0(b[3]) + "]";
}

// Percentage literal: 0 and 1 plain, anything between thawed with 2 decimals.
std::string pctText(double v, double lo, double hi) {
    double p = std::round((v - lo) / (hi - lo) * 100.0) / 100.0;
    p = std::clamp(p, 0.0, 1.0);
    if (p == 0.0) return "0";
    if (p == 1.0) return "1";
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f?", p);
    return buf;
}

std::string pctPair(const std::pair<double, double>& pt, const std::array<double, 4>& b) {
    return "[" + pctText(pt.first, b[0], b[2]) + " " + pctText(pt.second, b[1], b[3]) + "]";
}

std::string stencil(const DrawRequest& req) {
    const auto& pts = req.points;
    std::string color = std::to_string(colorFromSeed(req.colorSeed));
    if (req.tool == "line") {
        if (pts.size() != 2) throw ToolError("BadGeometry", "line needs 2 points");
        return "(let [x1 y1 x2 y2] [" + n0(pts[0].first) + " " + n0(pts[0].second) + " " + n0(pts[1].first) + " " +
               n0(pts[1].second) + "]\n(let [color width] [" + color +
               " 5]\n[ (line color width x1 y1 x2 y2) ]))";
    }
    if (req.tool == "rect" || req.tool == "oval") {
        if (pts.size() != 2) throw ToolError("BadGeometry", req.tool + " needs 2 points");
        std::string shape = req.tool == "rect" ? "(rectangle color 'black' '0' 0 bounds)"
                                               : "(oval color 'black' '0' bounds)";
        return "(let [left top right bot] " + boundsText(boundsOf(pts)) +
               "\n(let bounds [left top right bot]\n(let color " + color + "\n[ " + shape + " ])))";
    }
    if (req.tool == "polygon" || req.tool == "path") {
        if (pts.size() < 3) throw ToolError("BadGeometry", req.tool + " needs at least 3 points");
        auto b = boundsOf(pts);
        std::string body;
        if (req.tool == "polygon") {
            body = "(let pcts [";
            for (size_t i = 0; i < pts.size(); ++i) body += (i ? " " : "") + pctPair(pts[i], b);
            body += "]\n[ (stretchyPolygon bounds color stroke width pcts) ])";
        } else {
            body = "(let cmds [";
            for (size_t i = 0; i < pts.size(); ++i)
                body += std::string(i ? " " : "") + (i ? "['L' " : "['M' ") + pctPair(pts[i], b) + "]";
            body += " ['Z']]\n[ (stretchyPath bounds color stroke width cmds) ])";
        }
        return "(let [left top right bot] " + boundsText(b) +
               "\n(let bounds [left top right bot]\n(let [color stroke width] [" + color + " 'black' 2]\n" + body +
               ")))";
    }
    throw ToolError("UnknownTool", "unknown drawing tool '" + req.tool + "'");
}

const Expr* topLevelBound(const Program& p, const std::string& name) {
    const Expr* cur = &p.root;
    const Expr* found = nullptr;
    while (cur->kind == ExprKind::Let && cur->isDef) {
        if (!cur->pat.isList && cur->pat.name == name) found = &cur->kids[0];
        cur = &cur->kids[1];
    }
    return found;
}

}  // namespace

int colorFromSeed(int seed) {
    long long v = (static_cast<long long>(seed) * 17) % 501;
    return static_cast<int>(v < 0 ? v + 501 : v);
}

std::string nextShapeName(const Program& p, const std::string& stem) {
    TopLevel t = TopLevel::split(p.root);
    long long maxSuffix = 0;
    for (const auto& d : t.defs) {
        std::vector<std::string> names;
        d.pat.boundNames(names);
        for (const auto& n : names) {
            size_t i = n.size();
            while (i > 0 && std::isdigit(static_cast<unsigned char>(n[i - 1]))) --i;
            if (i < n.size() && n.size() - i < 12) maxSuffix = std::max(maxSuffix, std::stoll(n.substr(i)));
        }
    }
    std::set<std::string> taken = identifiersOf(p.root);
    for (long long k = maxSuffix + 1;; ++k) {
        std::string cand = stem + std::to_string(k);
        if (!taken.count(cand) && !isPreludeName(cand)) return cand;
    }
}

Program addToCanvas(const Program& p, const std::string& name, Expr shape) {
    Program out = p;
    TopLevel t = TopLevel::split(p.root);
    if (isSimple(p)) {
        t.defs.push_back(Expr::let(Pattern::var(name), std::move(shape), Expr::list({}), true));
        t.main.kids[1].kids.push_back(Expr::var(name));
    } else {
        Expr call = Expr::app(Expr::var("addShapeToCanvas"), {t.main, Expr::var(name)});
        t.main = Expr::let(Pattern::var(name), std::move(shape), std::move(call));
    }
    out.root = t.join();
    assignLocs(out);
    return out;
}

Program drawShape(const Program& p, const DrawRequest& req) {
    Expr shape = parseExpr(stencil(req));
    return addToCanvas(p, nextShapeName(p, req.tool), std::move(shape));
}

std::vector<std::string> listLambdaTools(const Program& p) {
    std::vector<std::string> out;
    TopLevel t = TopLevel::split(p.root);
    for (const auto& d : t.defs) {
        if (d.pat.isList || d.kids[0].kind != ExprKind::Lambda) continue;
        const auto& ps = d.kids[0].params;
        if (ps.empty() || !ps.back().isList || ps.back().elems.size() != 4) continue;
        bool allVars = std::all_of(ps.back().elems.begin(), ps.back().elems.end(),
                                   [](const Pattern& e) { return !e.isList; });
        if (allVars) out.push_back(d.pat.name);
    }
    return out;
}

Program drawLambda(const Program& p, const std::string& fn, std::array<double, 4> b) {
    auto tools = listLambdaTools(p);
    if (std::find(tools.begin(), tools.end(), fn) == tools.end())
        throw ToolError("UnknownLambda", "'" + fn + "' is not a drawable function");

    std::optional<std::vector<Expr>> args;
    // Latest call `((fn a1 ... ak) bounds)` anywhere in the program.
    forEachNode(p.root, [&](const Expr& e) {
        if (e.kind == ExprKind::App && e.kids.size() == 2 && e.kids[0].kind == ExprKind::App &&
            e.kids[0].kids[0].kind == ExprKind::Var && e.kids[0].kids[0].text == fn)
            args = std::vector<Expr>(e.kids[0].kids.begin() + 1, e.kids[0].kids.end());
    });
    if (!args) {
        auto it = p.lambdaDefaults.find(fn);
        if (it != p.lambdaDefaults.end()) {
            args = it->second;
        } else {
            const Expr* lam = topLevelBound(p, fn);
            size_t k = lam ? lam->params.size() - 1 : 0;
            if (k > 0) throw ToolError("NoDefaults", "no arguments known for '" + fn + "'");
            args = std::vector<Expr>{};
        }
    }

    double l = std::round(std::min(b[0], b[2])), r = std::round(std::max(b[0], b[2]));
    double t = std::round(std::min(b[1], b[3])), bt = std::round(std::max(b[1], b[3]));
    if (r - l < 1) r = l + 1;
    if (bt - t < 1) bt = t + 1;
    std::vector<Expr> bounds;
    for (double v : {l, t, r, bt}) bounds.push_back(Expr::number(v));

    Expr call = Expr::app(Expr::app(Expr::var(fn), *args), {Expr::list(std::move(bounds))});
    Program out = p;
    TopLevel tl = TopLevel::split(p.root);
    if (isSimple(p)) {
        tl.main.kids[1].kids.push_back(std::move(call));
    } else {
        std::string y = nextShapeName(p, "shape");
        tl.main = Expr::let(Pattern::var(y), std::move(call),
                            Expr::app(Expr::var("addShapeToCanvas"), {tl.main, Expr::var(y)}));
    }
    out.root = tl.join();
    assignLocs(out);
    return out;
}

}  // namespace sketchlab
