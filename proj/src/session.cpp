#include "sketchlab/session.hpp"

#include <functional>

#include "sketchlab/draw.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/features.hpp"
#include "sketchlab/group.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/live_sync.hpp"
#include "sketchlab/relate.hpp"

namespace sketchlab {
namespace {

// What a request wants to change; applied only if the handler succeeds.
struct Outcome {
    std::optional<Program> program;
    bool recordUndo = true;
    bool popUndo = false;
    std::optional<std::vector<std::string>> selection;
    std::optional<bool> ghosts;
    std::optional<std::optional<Program>> dragBase;
    Json extra = Json::object();
};

using Handler = std::function<Outcome(Session&, const Json&)>;

[[noreturn]] void badRequest(const std::string& msg) { throw ToolError("BadRequest", msg); }

const Json& need(const Json& payload, const char* key) {
    if (!payload.is_object() || !payload.contains(key)) badRequest(std::string("missing '") + key + "'");
    return payload.at(key);
}

template <typename T>
T get(const Json& payload, const char* key) {
    try {
        return need(payload, key).get<T>();
    } catch (const Json::exception&) {
        badRequest(std::string("bad '") + key + "'");
    }
}

const char* axisName(Axis a) { return a == Axis::X ? "x" : a == Axis::Y ? "y" : "scalar"; }

const char* widgetKind(Widget::Kind k) {
    return k == Widget::Kind::Crosshair ? "crosshair" : k == Widget::Kind::Segment ? "segment" : "slider";
}

// Feature ids named by a request; point names expand to both coordinates.
std::vector<std::string> expandIds(const Session& s, const std::vector<std::string>& ids) {
    auto fs = featuresOf(s.program, s.canvas);
    auto pts = pointsOf(s.program, s.canvas);
    std::vector<std::string> out;
    for (const auto& id : ids) {
        if (findFeature(fs, id)) {
            out.push_back(id);
            continue;
        }
        bool found = false;
        for (const auto& p : pts) {
            if (p.shapeName + "/" + p.name != id) continue;
            out.push_back(p.xFeature);
            out.push_back(p.yFeature);
            found = true;
            break;
        }
        if (!found) throw ToolError("UnknownFeature", "no feature named " + id);
    }
    return out;
}

std::vector<std::string> idsOf(const Json& payload) {
    if (payload.is_object() && payload.contains("feature")) return {get<std::string>(payload, "feature")};
    return get<std::vector<std::string>>(payload, "features");
}

std::vector<std::string> selectedOrGiven(const Session& s, const Json& payload) {
    if (payload.is_object() && (payload.contains("features") || payload.contains("feature")))
        return expandIds(s, idsOf(payload));
    return s.selection;
}

Outcome mutation(Program p) {
    Outcome o;
    o.program = std::move(p);
    return o;
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"load",
         [](Session&, const Json& pl) {
             Outcome o = mutation(parse(get<std::string>(pl, "source")));
             o.selection = std::vector<std::string>{};
             return o;
         }},
        {"getCode", [](Session&, const Json&) { return Outcome{}; }},
        {"getSvg", [](Session&, const Json&) { return Outcome{}; }},
        {"listLambdas", [](Session&, const Json&) { return Outcome{}; }},
        {"listFeatures", [](Session&, const Json&) { return Outcome{}; }},
        {"draw",
         [](Session& s, const Json& pl) {
             std::string tool = get<std::string>(pl, "tool");
             if (tool == "lambda") {
                 auto b = get<std::array<double, 4>>(pl, "bounds");
                 return mutation(drawLambda(s.program, get<std::string>(pl, "fn"), b));
             }
             DrawRequest r;
             r.tool = tool;
             r.points = get<std::vector<std::pair<double, double>>>(pl, "points");
             r.colorSeed = pl.contains("seed") ? get<int>(pl, "seed") : static_cast<int>(s.rng() % 1000);
             return mutation(drawShape(s.program, r));
         }},
        {"select",
         [](Session& s, const Json& pl) {
             Outcome o;
             auto sel = s.selection;
             for (const auto& id : expandIds(s, idsOf(pl)))
                 if (std::find(sel.begin(), sel.end(), id) == sel.end()) sel.push_back(id);
             o.selection = sel;
             return o;
         }},
        {"deselect",
         [](Session& s, const Json& pl) {
             Outcome o;
             auto sel = s.selection;
             for (const auto& id : expandIds(s, idsOf(pl))) sel.erase(std::remove(sel.begin(), sel.end(), id), sel.end());
             o.selection = sel;
             return o;
         }},
        {"clearSelection",
         [](Session&, const Json&) {
             Outcome o;
             o.selection = std::vector<std::string>{};
             return o;
         }},
        {"digHole",
         [](Session& s, const Json& pl) {
             DigResult r = digHole(s.program, selectedOrGiven(s, pl));
             Outcome o = mutation(std::move(r.program));
             o.selection = std::vector<std::string>{};
             o.extra["hole"] = {{"lifted", r.hole.liftedNames},
                                {"primed", r.hole.primedNames},
                                {"derived", r.hole.derivedDefs}};
             return o;
         }},
        {"makeEqual",
         [](Session& s, const Json& pl) {
             Outcome o = mutation(makeEqual(s.program, selectedOrGiven(s, pl)));
             o.selection = std::vector<std::string>{};
             return o;
         }},
        {"cleanUp", [](Session& s, const Json&) { return mutation(cleanUp(s.program)); }},
        {"group",
         [](Session& s, const Json& pl) { return mutation(group(s.program, get<std::vector<size_t>>(pl, "blobs"))); }},
        {"abstract",
         [](Session& s, const Json& pl) {
             AbstractResult r = abstractBlob(s.program, get<size_t>(pl, "blob"));
             Outcome o = mutation(std::move(r.program));
             o.extra["function"] = r.function;
             if (!r.hasBounds) o.extra["warning"] = "NoBoundsPattern";
             return o;
         }},
        {"duplicate",
         [](Session& s, const Json& pl) { return mutation(duplicate(s.program, get<size_t>(pl, "blob"))); }},
        {"merge",
         [](Session& s, const Json& pl) { return mutation(merge(s.program, get<std::vector<size_t>>(pl, "blobs"))); }},
        {"drag",
         [](Session& s, const Json& pl) {
             // Live drags replay from the program at drag start.
             bool live = pl.value("live", false);
             const Program& base = s.dragBase ? *s.dragBase : s.program;
             Canvas c = s.dragBase ? evaluate(base) : s.canvas;
             DragResult r = applyDrag(base, c, get<std::vector<size_t>>(pl, "nodePath"), get<double>(pl, "dx"),
                                      get<double>(pl, "dy"), get<std::string>(pl, "zone"));
             Outcome o = mutation(std::move(r.program));
             o.recordUndo = !s.dragBase.has_value();
             if (live && !s.dragBase)
                 o.dragBase = std::optional<Program>(s.program);
             else if (!live)
                 o.dragBase = std::optional<Program>();
             o.extra["applied"] = r.applied;
             o.extra["failed"] = r.failed;
             return o;
         }},
        {"setAttr",
         [](Session& s, const Json& pl) {
             AttrEdit e{get<std::vector<size_t>>(pl, "nodePath"), get<std::string>(pl, "attr"),
                        get<double>(pl, "value")};
             auto p = applyOutputEdit(s.program, s.canvas, e);
             if (!p) throw ToolError("NotSolvable", "no unfrozen constant determines " + e.attrName);
             return mutation(std::move(*p));
         }},
        {"toggleGhosts",
         [](Session& s, const Json&) {
             Outcome o;
             o.ghosts = !s.showGhosts;
             return o;
         }},
        {"undo",
         [](Session& s, const Json&) {
             if (s.undo.empty()) throw ToolError("NothingToUndo", "the undo stack is empty");
             Outcome o = mutation(s.undo.back());
             o.recordUndo = false;
             o.popUndo = true;
             o.selection = std::vector<std::string>{};
             o.dragBase = std::optional<Program>();
             return o;
         }},
    };
    return table;
}

Json featureList(const Session& s) {
    Json out = Json::array();
    for (const auto& f : featuresOf(s.program, s.canvas)) {
        bool sel = std::find(s.selection.begin(), s.selection.end(), f.id()) != s.selection.end();
        out.push_back({{"id", f.id()},
                       {"shape", f.shapeName},
                       {"name", f.featureName},
                       {"kind", f.kind == FeatureKind::Primitive ? "primitive" : "derived"},
                       {"axis", axisName(f.axis)},
                       {"value", f.value},
                       {"nodePath", f.nodePath},
                       {"selected", sel}});
    }
    return out;
}

Json widgetList(const Session& s) {
    Json out = Json::array();
    for (const auto& w : widgetsOf(s.program, s.canvas))
        out.push_back({{"kind", widgetKind(w.kind)},
                       {"shape", w.shapeName},
                       {"name", w.name},
                       {"features", w.featureIds},
                       {"x1", w.x1},
                       {"y1", w.y1},
                       {"x2", w.x2},
                       {"y2", w.y2}});
    return out;
}

Json snapshot(const Session& s) {
    RenderOptions ro;
    ro.showGhosts = s.showGhosts;
    return {{"code", unparse(s.program)},
            {"svg", renderSvg(s.canvas, ro)},
            {"features", featureList(s)},
            {"widgets", widgetList(s)},
            {"lambdas", listLambdaTools(s.program)},
            {"selection", s.selection},
            {"ghosts", s.showGhosts},
            {"canUndo", !s.undo.empty()}};
}

Json errorReply(const Json& id, const std::string& code, const std::string& msg) {
    return {{"id", id}, {"ok", false}, {"error", code}, {"message", msg}};
}

}  // namespace

Session::Session(unsigned seed) : program(parse("(blobs [])")), rng(seed) { canvas = evaluate(program); }

const std::vector<std::string>& requestKinds() {
    static const std::vector<std::string> kinds = [] {
        std::vector<std::string> ks;
        for (const auto& [k, h] : handlers()) ks.push_back(k);
        return ks;
    }();
    return kinds;
}

Json handleRequest(Session& s, const Json& req) {
    Json id = req.is_object() && req.contains("id") ? req["id"] : Json();
    if (!req.is_object() || !req.contains("kind") || !req["kind"].is_string())
        return errorReply(id, "BadRequest", "request needs a string 'kind'");
    std::string kind = req["kind"];
    auto it = handlers().find(kind);
    if (it == handlers().end()) return errorReply(id, "UnknownKind", "unknown request kind '" + kind + "'");
    Json payload = req.contains("payload") ? req["payload"] : Json::object();

    Outcome o;
    std::optional<Canvas> canvas;
    try {
        o = it->second(s, payload);
        if (o.program) canvas = evaluate(*o.program);
    } catch (const ToolError& e) {
        return errorReply(id, e.code(), e.what());
    } catch (const ParseError& e) {
        return errorReply(id, "ParseError", e.what());
    } catch (const EvalError& e) {
        return errorReply(id, "EvalError", e.what());
    } catch (const std::exception& e) {
        return errorReply(id, "InternalError", e.what());
    }

    // Commit.
    if (o.program) {
        if (o.popUndo) s.undo.pop_back();
        if (o.recordUndo) {
            s.undo.push_back(s.program);
            if (s.undo.size() > kUndoLimit) s.undo.pop_front();
        }
        s.program = std::move(*o.program);
        s.canvas = std::move(*canvas);
    }
    if (o.selection) s.selection = std::move(*o.selection);
    if (o.ghosts) s.showGhosts = *o.ghosts;
    if (o.dragBase) s.dragBase = std::move(*o.dragBase);

    Json payloadOut = snapshot(s);
    for (auto& [k, v] : o.extra.items()) payloadOut[k] = v;
    return {{"id", id}, {"ok", true}, {"payload", payloadOut}};
}

Json SessionStore::handle(const Json& request) {
    std::string key = request.is_object() && request.contains("session") && request["session"].is_string()
                          ? request["session"].get<std::string>()
                          : "default";
    std::shared_ptr<Slot> slot;
    {
        std::lock_guard<std::mutex> g(mu_);
        auto& sp = slots_[key];
        if (!sp) sp = std::make_shared<Slot>();
        slot = sp;
    }
    std::lock_guard<std::mutex> g(slot->mu);
    if (!slot->session) slot->session = std::make_unique<Session>(seed_);
    return handleRequest(*slot->session, request);
}

std::string SessionStore::handleText(const std::string& text) {
    Json req;
    try {
        req = Json::parse(text);
    } catch (const Json::parse_error& e) {
        return errorReply(Json(), "BadRequest", std::string("malformed JSON: ") + e.what()).dump();
    }
    return handle(req).dump();
}

}  // namespace sketchlab
