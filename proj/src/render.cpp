#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sketchlab/eval.hpp"

namespace sketchlab {
namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string num(double v) { return formatNumber(v, 6); }

double numOr(const SvgNode& n, const char* name, double dflt = 0.0) {
    const NumVal* v = n.num(name);
    return v ? v->value : dflt;
}

// Numbers on the color scale become rgb strings; text is passed through.
std::string paint(const SvgNode& n, const char* name, const char* dflt) {
    const AttrValue* a = n.attr(name);
    if (!a) return dflt;
    if (auto* v = std::get_if<NumVal>(a)) return colorString(v->value);
    if (auto* s = std::get_if<std::string>(a)) return escape(*s);
    return dflt;
}

std::string width(const SvgNode& n, const char* name) {
    const AttrValue* a = n.attr(name);
    if (!a) return "0";
    if (auto* v = std::get_if<NumVal>(a)) return num(v->value);
    if (auto* s = std::get_if<std::string>(a)) return escape(*s);
    return "0";
}

struct Renderer {
    const RenderOptions& opts;
    std::string out;

    void line(int depth, const std::string& s) {
        out.append(static_cast<size_t>(depth) * 2, ' ');
        out += s;
        out += '\n';
    }

    std::string hidden(bool ghost) const { return ghost && !opts.showGhosts ? " display=\"none\"" : ""; }

    void boundsGhost(const SvgNode& n, int depth, bool ghost) {
        double l = numOr(n, "left"), t = numOr(n, "top"), r = numOr(n, "right"), b = numOr(n, "bot");
        std::string style = opts.showGhosts ? "" : " style=\"display:none\"";
        line(depth, "<rect class=\"ghost\" x=\"" + num(l) + "\" y=\"" + num(t) + "\" width=\"" + num(r - l) +
                        "\" height=\"" + num(b - t) +
                        "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 2\"" + style + hidden(ghost) + "/>");
    }

    void node(const SvgNode& n, int depth, bool ghost) {
        ghost = ghost || n.ghost;
        const std::string& tag = n.tag;
        if (tag == "BOX") {
            double l = numOr(n, "left"), t = numOr(n, "top"), r = numOr(n, "right"), b = numOr(n, "bot");
            std::string s = "<rect x=\"" + num(l) + "\" y=\"" + num(t) + "\" width=\"" + num(r - l) +
                            "\" height=\"" + num(b - t) + "\" fill=\"" + paint(n, "color", "black") +
                            "\" stroke=\"" + paint(n, "stroke", "none") + "\" stroke-width=\"" +
                            width(n, "strokeWidth") + "\"";
            double rot = numOr(n, "rot");
            if (rot != 0.0)
                s += " transform=\"rotate(" + num(rot) + " " + num((l + r) / 2) + " " + num((t + b) / 2) + ")\"";
            line(depth, s + hidden(ghost) + "/>");
        } else if (tag == "line") {
            line(depth, "<line x1=\"" + num(numOr(n, "x1")) + "\" y1=\"" + num(numOr(n, "y1")) + "\" x2=\"" +
                            num(numOr(n, "x2")) + "\" y2=\"" + num(numOr(n, "y2")) + "\" stroke=\"" +
                            paint(n, "color", "black") + "\" stroke-width=\"" + width(n, "width") + "\"" +
                            hidden(ghost) + "/>");
        } else if (tag == "ellipse") {
            double l = numOr(n, "left"), t = numOr(n, "top"), r = numOr(n, "right"), b = numOr(n, "bot");
            line(depth, "<ellipse cx=\"" + num((l + r) / 2) + "\" cy=\"" + num((t + b) / 2) + "\" rx=\"" +
                            num((r - l) / 2) + "\" ry=\"" + num((b - t) / 2) + "\" fill=\"" +
                            paint(n, "color", "black") + "\" stroke=\"" + paint(n, "stroke", "none") +
                            "\" stroke-width=\"" + width(n, "strokeWidth") + "\"" + hidden(ghost) + "/>");
        } else if (tag == "polygon") {
            boundsGhost(n, depth, ghost);
            std::string pts;
            if (auto* a = n.attr("points"))
                if (auto* ps = std::get_if<std::vector<Point>>(a))
                    for (const auto& p : *ps) {
                        if (!pts.empty()) pts += ' ';
                        pts += num(p.x.value) + "," + num(p.y.value);
                    }
            line(depth, "<polygon points=\"" + pts + "\" fill=\"" + paint(n, "color", "black") + "\" stroke=\"" +
                            paint(n, "stroke", "none") + "\" stroke-width=\"" + width(n, "strokeWidth") + "\"" +
                            hidden(ghost) + "/>");
        } else if (tag == "path") {
            boundsGhost(n, depth, ghost);
            std::string d;
            if (auto* a = n.attr("cmds"))
                if (auto* cs = std::get_if<std::vector<PathCmd>>(a))
                    for (const auto& c : *cs) {
                        if (!d.empty()) d += ' ';
                        d += c.verb;
                        for (const auto& p : c.pts) d += " " + num(p.x.value) + " " + num(p.y.value);
                    }
            line(depth, "<path d=\"" + d + "\" fill=\"" + paint(n, "color", "black") + "\" stroke=\"" +
                            paint(n, "stroke", "none") + "\" stroke-width=\"" + width(n, "strokeWidth") + "\"" +
                            hidden(ghost) + "/>");
        } else if (tag == "g") {
            if (opts.flattenGroups) {
                for (const auto& c : n.children) node(c, depth, ghost);
                return;
            }
            if (n.children.empty()) {
                line(depth, "<g" + hidden(ghost) + "/>");
                return;
            }
            line(depth, "<g" + hidden(ghost) + ">");
            for (const auto& c : n.children) node(c, depth + 1, ghost);
            line(depth, "</g>");
        }
    }
};

}  // namespace

std::string colorString(double n) {
    double v = std::fmod(std::round(n), 501.0);
    if (v < 0) v += 501.0;
    double r, g, b;
    if (v <= 360.0) {
        // HSL with s=0.7, l=0.5
        double h = v / 60.0;
        double c = 0.7;
        double x = c * (1 - std::fabs(std::fmod(h, 2.0) - 1));
        double m = 0.5 - c / 2;
        double r1 = 0, g1 = 0, b1 = 0;
        if (h < 1) r1 = c, g1 = x;
        else if (h < 2) r1 = x, g1 = c;
        else if (h < 3) g1 = c, b1 = x;
        else if (h < 4) g1 = x, b1 = c;
        else if (h < 5) r1 = x, b1 = c;
        else r1 = c, b1 = x;
        r = r1 + m, g = g1 + m, b = b1 + m;
    } else {
        r = g = b = (v - 361.0) / 139.0;
    }
    auto byte = [](double f) { return static_cast<int>(std::lround(std::clamp(f, 0.0, 1.0) * 255)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(r), byte(g), byte(b));
    return buf;
}

std::string renderSvg(const Canvas& c, const RenderOptions& opts) {
    const std::string head = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\"";
    if (c.root.empty()) return head + "/>\n";
    Renderer r{opts, head + ">\n"};
    for (const auto& n : c.root) r.node(n, 1, false);
    r.out += "</svg>\n";
    return r.out;
}

}  // namespace sketchlab
