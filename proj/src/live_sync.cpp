#include "sketchlab/live_sync.hpp"

#include <cmath>

#include "sketchlab/solver.hpp"

namespace sketchlab {
namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

bool thawedIn(const Trace& t, const std::map<LocId, Annotation>& annots) {
    std::vector<LocId> locs;
    collectLocs(t, locs);
    for (LocId l : locs) {
        auto it = annots.find(l);
        if (it != annots.end() && it->second == Annotation::Thawed) return true;
    }
    return false;
}

}  // namespace

std::optional<Program> applyOutputEdit(const Program& p, const Canvas& c, const AttrEdit& edit, bool thawedOnly) {
    const SvgNode* node = nodeAt(c, edit.nodePath);
    if (!node) return std::nullopt;
    const NumVal* attr = numericAttr(*node, edit.attrName);
    if (!attr || !attr->trace) return std::nullopt;

    Equation eq{attr->trace, opaque(edit.newValue), literalValues(p.root), literalAnnots(p.root)};
    std::set<LocId> thawed;
    const std::set<LocId>* allowed = nullptr;
    if (thawedOnly && thawedIn(attr->trace, eq.annots)) {
        for (const auto& [l, a] : eq.annots)
            if (a == Annotation::Thawed) thawed.insert(l);
        allowed = &thawed;
    }

    for (LocId loc : candidateLocs(eq, allowed)) {
        auto sol = solveForLoc(eq, loc);
        if (!sol) continue;
        double v;
        try {
            v = round4(foldTrace(*sol, eq.values));
        } catch (const std::exception&) {
            continue;
        }
        Program out = p;
        Expr* lit = findLoc(out.root, loc);
        if (!lit) continue;
        if (lit->num != v) {
            lit->num = v;
            lit->text = formatNumber(v, 4);
        }
        try {
            Canvas after = evaluate(out);
            const SvgNode* n2 = nodeAt(after, edit.nodePath);
            const NumVal* a2 = n2 ? numericAttr(*n2, edit.attrName) : nullptr;
            if (a2 && std::fabs(a2->value - edit.newValue) <= kSyncTol) return out;
        } catch (const EvalError&) {
        }
    }
    return std::nullopt;
}

std::vector<AttrEdit> dragEdits(const Canvas& c, const std::vector<size_t>& path, double dx, double dy,
                                const std::string& zone) {
    std::vector<AttrEdit> out;
    const SvgNode* n = nodeAt(c, path);
    if (!n) return out;
    auto add = [&](const std::string& name, double d) {
        if (d == 0.0) return;
        if (const NumVal* v = numericAttr(*n, name)) out.push_back({path, name, v->value + d});
    };
    bool isLine = n->tag == "line";
    if (zone == "interior") {
        if (isLine) {
            add("x1", dx), add("y1", dy), add("x2", dx), add("y2", dy);
        } else {
            add("left", dx), add("top", dy), add("right", dx), add("bot", dy);
        }
    } else if (zone.rfind("edge:", 0) == 0) {
        std::string e = zone.substr(5);
        if (e == "left" || e == "right") add(e, dx);
        else if (e == "top" || e == "bot") add(e, dy);
    } else if (zone.rfind("corner:", 0) == 0) {
        std::string k = zone.substr(7);
        if (k.size() != 2) return out;
        add(k[1] == 'l' ? "left" : "right", dx);
        add(k[0] == 't' ? "top" : "bot", dy);
    } else if (zone.rfind("point:", 0) == 0) {
        std::string i = zone.substr(6);
        if (isLine) {
            if (i == "0" || i == "1") {
                std::string s = i == "0" ? "1" : "2";
                add("x" + s, dx), add("y" + s, dy);
            }
        } else {
            add("point:" + i + ":x", dx), add("point:" + i + ":y", dy);
        }
    }
    return out;
}

DragResult applyDrag(const Program& p, const Canvas& c, const std::vector<size_t>& path, double dx, double dy,
                     const std::string& zone) {
    DragResult r{p, 0, 0};
    const SvgNode* n = nodeAt(c, path);
    bool vertexDrag = zone.rfind("point:", 0) == 0 && n && n->tag != "line";
    Canvas cur = c;
    for (const auto& e : dragEdits(c, path, dx, dy, zone)) {
        auto next = applyOutputEdit(r.program, cur, e, vertexDrag);
        if (!next) {
            ++r.failed;
            continue;
        }
        r.program = std::move(*next);
        cur = evaluate(r.program);
        ++r.applied;
    }
    return r;
}

}  // namespace sketchlab
