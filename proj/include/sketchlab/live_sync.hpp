#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sketchlab/eval.hpp"

namespace sketchlab {

struct AttrEdit {
    std::vector<size_t> nodePath;
    std::string attrName;
    double newValue = 0.0;
};

/// Re-evaluated attribute must land this close to the requested value.
inline constexpr double kSyncTol = 0.5;

/// Change exactly one literal so that the attribute takes `newValue`.
/// nullopt when no unfrozen literal can be solved for. With `thawedOnly`,
/// Thawed literals are the only candidates if the trace contains any.
std::optional<Program> applyOutputEdit(const Program& p, const Canvas& c, const AttrEdit& edit,
                                       bool thawedOnly = false);

struct DragResult {
    Program program;
    int applied = 0;
    int failed = 0;
};

/// Expand a drag gesture into attribute edits and apply them in turn.
/// Zones: interior, edge:left|right|top|bot, corner:tl|tr|bl|br, point:i.
/// Target values are relative to `c`, the canvas at drag start.
DragResult applyDrag(const Program& p, const Canvas& c, const std::vector<size_t>& nodePath, double dx,
                     double dy, const std::string& zone);

/// The attribute edits a drag expands to (empty for an unknown zone).
std::vector<AttrEdit> dragEdits(const Canvas& c, const std::vector<size_t>& nodePath, double dx, double dy,
                                const std::string& zone);

}  // namespace sketchlab
