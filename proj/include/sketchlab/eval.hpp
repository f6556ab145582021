#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sketchlab/ast.hpp"
#include "sketchlab/trace.hpp"

namespace sketchlab {

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& msg, SrcPos pos)
        : std::runtime_error(pos.line > 0
                                 ? std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg
                                 : msg),
          pos_(pos) {}
    SrcPos pos() const { return pos_; }

private:
    SrcPos pos_;
};

struct Point {
    NumVal x;
    NumVal y;
};

struct PathCmd {
    char verb = 'M';  // M L Q C Z
    std::vector<Point> pts;
};

using AttrValue = std::variant<NumVal, std::string, std::vector<Point>, std::vector<PathCmd>>;

/// One evaluated SVG element. Tags: BOX rect line ellipse polygon path g.
struct SvgNode {
    std::string tag;
    std::vector<std::pair<std::string, AttrValue>> attrs;
    std::vector<SvgNode> children;
    bool ghost = false;

    const AttrValue* attr(std::string_view name) const;
    AttrValue* attr(std::string_view name);
    const NumVal* num(std::string_view name) const;
    void set(std::string name, AttrValue v);
};

struct Canvas {
    std::vector<SvgNode> root;  // z-order = list order
    LocValues traceStore;
    /// Number of root nodes contributed by each `blobs` entry, when the main
    /// expression is a `blobs` call.
    std::vector<size_t> blobSpans;
    /// Per blob: true when the entry evaluated to a single shape, not a list.
    std::vector<bool> blobIsShape;
};

/// Evaluate a program against the prelude. Throws EvalError.
Canvas evaluate(const Program& p);

/// Literal values of every numeric literal in the program.
LocValues literalValues(const Expr& root);
std::map<LocId, Annotation> literalAnnots(const Expr& root);

/// Numeric attribute by name; vertices are addressed as `point:i:x` and
/// `point:i:y` (path vertices are numbered across all commands).
const NumVal* numericAttr(const SvgNode& n, std::string_view name);

/// Every numeric attribute name of a node, in a stable order.
std::vector<std::string> numericAttrNames(const SvgNode& n);

/// Vertices of a polygon or path, in order.
std::vector<Point> vertices(const SvgNode& n);

struct RenderOptions {
    bool showGhosts = true;
    /// Emit leaf shapes only, dropping `<g>` wrappers.
    bool flattenGroups = false;
};

std::string renderSvg(const Canvas& c, const RenderOptions& opts = {});

/// Color number (0-500 scale) as an SVG color string.
std::string colorString(double n);

/// Resolve a node by index path into the canvas; null if out of range.
const SvgNode* nodeAt(const Canvas& c, const std::vector<size_t>& path);

}  // namespace sketchlab
