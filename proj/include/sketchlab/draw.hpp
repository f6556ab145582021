#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sketchlab/ast.hpp"
#include "sketchlab/errors.hpp"

namespace sketchlab {

struct DrawRequest {
    std::string tool;  // line rect oval polygon path
    std::vector<std::pair<double, double>> points;
    int colorSeed = 0;
};

/// Color number in [0, 500] for a seed.
int colorFromSeed(int seed);

/// Name for a newly drawn or generated top-level definition: the stem plus
/// one more than the largest numeric suffix among top-level names.
std::string nextShapeName(const Program& p, const std::string& stem);

Program drawShape(const Program& p, const DrawRequest& req);

/// Top-level functions whose last parameter is a 4-element list pattern.
std::vector<std::string> listLambdaTools(const Program& p);

/// Append `((fn a1 ... ak) [l t r b])`, reusing the arguments of the latest
/// call to `fn` or its recorded defaults.
Program drawLambda(const Program& p, const std::string& fn, std::array<double, 4> bounds);

/// Append a new shape expression to the program's output.
Program addToCanvas(const Program& p, const std::string& name, Expr shape);

}  // namespace sketchlab
