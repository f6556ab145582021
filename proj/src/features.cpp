#include "sketchlab/features.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace sketchlab {
namespace {

bool isBoxLike(const std::string& tag) {
    return tag == "BOX" || tag == "polygon" || tag == "path" || tag == "g";
}

bool isSliderAttr(const SvgNode& n, const std::string& name) {
    if (name == "color" || name == "strokeWidth") return true;
    return n.tag == "line" && name == "width";
}

bool isDistance(const std::string& name) {
    return name == "width" || name == "height" || name == "rx" || name == "ry";
}

Axis axisOf(const std::string& name) {
    static const std::map<std::string, Axis, std::less<>> axes = {
        {"left", Axis::X}, {"right", Axis::X}, {"x1", Axis::X},    {"x2", Axis::X},    {"boxCX", Axis::X},
        {"midX", Axis::X}, {"cx", Axis::X},    {"top", Axis::Y},   {"bot", Axis::Y},   {"y1", Axis::Y},
        {"y2", Axis::Y},   {"boxCY", Axis::Y}, {"midY", Axis::Y},  {"cy", Axis::Y},
    };
    auto it = axes.find(name);
    if (it != axes.end()) return it->second;
    if (name.rfind("point:", 0) == 0) return name.back() == 'x' ? Axis::X : Axis::Y;
    return Axis::Scalar;
}

Trace half(const Trace& a, const Trace& b) { return opNode("*", {opaque(0.5), opNode("+", {a, b})}); }
Trace diff(const Trace& a, const Trace& b) { return opNode("-", {a, b}); }

struct Walker {
    const Canvas& canvas;
    std::vector<Feature> features;
    std::vector<PointFeature> points;

    void add(const std::string& shape, const std::string& name, FeatureKind kind, Trace eq,
             const std::vector<size_t>& path) {
        Feature f;
        f.shapeName = shape;
        f.featureName = name;
        f.kind = kind;
        f.axis = isDistance(name) ? Axis::Scalar : axisOf(name);
        f.value = foldTrace(eq, canvas.traceStore);
        f.equation = std::move(eq);
        f.nodePath = path;
        features.push_back(std::move(f));
    }

    void point(const std::string& shape, const std::string& name, const std::string& x, const std::string& y) {
        points.push_back({shape, name, shape + "/" + x, shape + "/" + y});
    }

    void node(const SvgNode& n, const std::string& shape, const std::vector<size_t>& path) {
        for (const auto& name : numericAttrNames(n)) {
            const NumVal* v = numericAttr(n, name);
            add(shape, name, FeatureKind::Primitive, v->trace, path);
        }
        auto tr = [&](const char* name) { return n.num(name)->trace; };
        if (isBoxLike(n.tag) || n.tag == "ellipse") {
            Trace l = tr("left"), t = tr("top"), r = tr("right"), b = tr("bot");
            bool ell = n.tag == "ellipse";
            const char* cx = ell ? "cx" : "boxCX";
            const char* cy = ell ? "cy" : "boxCY";
            if (ell) {
                add(shape, "cx", FeatureKind::Derived, half(l, r), path);
                add(shape, "cy", FeatureKind::Derived, half(t, b), path);
                add(shape, "rx", FeatureKind::Derived, opNode("*", {opaque(0.5), diff(r, l)}), path);
                add(shape, "ry", FeatureKind::Derived, opNode("*", {opaque(0.5), diff(b, t)}), path);
            } else {
                add(shape, "width", FeatureKind::Derived, diff(r, l), path);
                add(shape, "height", FeatureKind::Derived, diff(b, t), path);
                add(shape, "boxCX", FeatureKind::Derived, half(l, r), path);
                add(shape, "boxCY", FeatureKind::Derived, half(t, b), path);
                point(shape, "topLeft", "left", "top");
                point(shape, "topRight", "right", "top");
                point(shape, "botLeft", "left", "bot");
                point(shape, "botRight", "right", "bot");
            }
            point(shape, "topMid", cx, "top");
            point(shape, "botMid", cx, "bot");
            point(shape, "leftMid", "left", cy);
            point(shape, "rightMid", "right", cy);
            point(shape, "center", cx, cy);
            size_t nv = vertices(n).size();
            for (size_t i = 0; i < nv; ++i) {
                std::string k = "point:" + std::to_string(i);
                point(shape, k, k + ":x", k + ":y");
            }
        } else if (n.tag == "line") {
            add(shape, "midX", FeatureKind::Derived, half(tr("x1"), tr("x2")), path);
            add(shape, "midY", FeatureKind::Derived, half(tr("y1"), tr("y2")), path);
            point(shape, "start", "x1", "y1");
            point(shape, "end", "x2", "y2");
            point(shape, "mid", "midX", "midY");
        }
        for (size_t k = 0; k < n.children.size(); ++k) {
            auto p = path;
            p.push_back(k);
            node(n.children[k], shape + "." + std::to_string(k), p);
        }
    }
};

Walker walk(const Program& p, const Canvas& c) {
    Walker w{c, {}, {}};
    auto names = shapeNames(p, c);
    for (size_t i = 0; i < c.root.size(); ++i) w.node(c.root[i], names[i], {i});
    return w;
}

struct Box {
    double l, t, r, b;
};

Box shapeBox(const std::vector<Feature>& all, const std::string& shape) {
    auto val = [&](const char* n) -> std::optional<double> {
        if (auto* f = findFeature(all, shape + "/" + n)) return f->value;
        return std::nullopt;
    };
    if (auto l = val("left")) return {*l, *val("top"), *val("right"), *val("bot")};
    if (auto x1 = val("x1")) {
        double x2 = *val("x2"), y1 = *val("y1"), y2 = *val("y2");
        return {std::min(*x1, x2), std::min(y1, y2), std::max(*x1, x2), std::max(y1, y2)};
    }
    return {0, 0, 0, 0};
}

}  // namespace

std::vector<std::string> shapeNames(const Program& p, const Canvas& c) {
    std::vector<std::string> out;
    if (isSimple(p)) {
        TopLevel t = TopLevel::split(p.root);
        const auto& blobs = t.main.kids[1].kids;
        if (c.blobSpans.size() == blobs.size()) {
            for (size_t i = 0; i < blobs.size(); ++i) {
                std::string base = blobs[i].kind == ExprKind::Var ? blobs[i].text : "blob" + std::to_string(i + 1);
                size_t span = c.blobSpans[i];
                for (size_t k = 0; k < span; ++k) out.push_back(span == 1 ? base : base + "." + std::to_string(k));
            }
        }
    }
    if (out.size() != c.root.size()) {
        out.clear();
        for (size_t i = 0; i < c.root.size(); ++i) out.push_back("shape" + std::to_string(i + 1));
    }
    return out;
}

std::vector<Feature> featuresOf(const Program& p, const Canvas& c) { return walk(p, c).features; }

std::vector<PointFeature> pointsOf(const Program& p, const Canvas& c) { return walk(p, c).points; }

const Feature* findFeature(const std::vector<Feature>& fs, const std::string& id) {
    for (const auto& f : fs)
        if (f.id() == id) return &f;
    return nullptr;
}

Widget featureGeometry(const Feature& f, const std::vector<Feature>& all) {
    Widget w;
    w.shapeName = f.shapeName;
    w.name = f.featureName;
    w.featureIds = {f.id()};
    Box b = shapeBox(all, f.shapeName);
    double cx = (b.l + b.r) / 2, cy = (b.t + b.b) / 2;
    const std::string& n = f.featureName;
    bool derived = f.kind == FeatureKind::Derived;
    if (derived && (n == "width" || n == "rx")) {
        w.kind = Widget::Kind::Segment;
        w.x1 = n == "rx" ? cx : b.l, w.x2 = b.r, w.y1 = w.y2 = cy;
    } else if (derived && (n == "height" || n == "ry")) {
        w.kind = Widget::Kind::Segment;
        w.y1 = n == "ry" ? cy : b.t, w.y2 = b.b, w.x1 = w.x2 = cx;
    } else if (f.axis == Axis::Scalar) {
        // Slider zones stack upwards above the shape's bounding box.
        static const std::array<const char*, 3> order = {"color", "strokeWidth", "width"};
        size_t slot = 0;
        for (size_t i = 0; i < order.size(); ++i)
            if (n == order[i]) slot = i;
        w.kind = Widget::Kind::Slider;
        w.x1 = b.l, w.x2 = b.l + 100;
        w.y2 = b.t - 10 - 15 * static_cast<double>(slot);
        w.y1 = w.y2 - 10;
    } else if (f.axis == Axis::X) {
        w.x1 = f.value, w.y1 = cy;
    } else {
        w.x1 = cx, w.y1 = f.value;
    }
    return w;
}

std::vector<Widget> widgetsOf(const Program& p, const Canvas& c) {
    Walker w = walk(p, c);
    std::map<std::string, const Feature*> byId;
    std::map<std::string, std::vector<Feature>> byShape;
    for (const auto& f : w.features) {
        byId[f.id()] = &f;
        byShape[f.shapeName].push_back(f);
    }
    std::vector<Widget> out;
    for (const auto& pt : w.points) {
        auto fx = byId.find(pt.xFeature), fy = byId.find(pt.yFeature);
        if (fx == byId.end() || fy == byId.end()) continue;
        Widget x;
        x.kind = Widget::Kind::Crosshair;
        x.shapeName = pt.shapeName;
        x.name = pt.name;
        x.featureIds = {pt.xFeature, pt.yFeature};
        x.x1 = fx->second->value, x.y1 = fy->second->value;
        out.push_back(std::move(x));
    }
    for (const auto& f : w.features) {
        const SvgNode* n = nodeAt(c, f.nodePath);
        bool segment = f.kind == FeatureKind::Derived && isDistance(f.featureName);
        bool slider = f.kind == FeatureKind::Primitive && n && isSliderAttr(*n, f.featureName);
        if (segment || slider) out.push_back(featureGeometry(f, byShape[f.shapeName]));
    }
    return out;
}

}  // namespace sketchlab
