#pragma once

#include <string>
#include <vector>

#include "sketchlab/ast.hpp"
#include "sketchlab/errors.hpp"

namespace sketchlab {

/// Blob references are indices into the `blobs` list of a simple program.

/// Move the selected blobs into one `newGroupN` definition whose children are
/// positioned relative to the union of their bounds.
/// Throws ToolError: NotSimple, EmptySelection, BadBlob, NameClash.
Program group(const Program& p, const std::vector<size_t>& blobs);

struct AbstractResult {
    Program program;
    std::string function;
    bool hasBounds = false;  // false: no bounding-box pattern was found
};

/// Turn a blob's definition into a function of its named constants, with the
/// bounding box as a final list parameter when one is found.
/// Throws ToolError: NotSimple, BadBlob.
AbstractResult abstractBlob(const Program& p, size_t blob);

/// Append a copy of a blob under a fresh name. Throws NotSimple, BadBlob.
Program duplicate(const Program& p, size_t blob);

/// Replace structurally equal definitions by calls to one function over the
/// literal positions where they differ.
/// Throws ToolError: NotSimple, EmptySelection, BadBlob, NotStructurallyEquivalent.
Program merge(const Program& p, const std::vector<size_t>& blobs);

}  // namespace sketchlab
