#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sketchlab/eval.hpp"

namespace sketchlab {

enum class FeatureKind { Primitive, Derived };
enum class Axis { X, Y, Scalar };

/// A selectable output quantity and its equation over literal locations.
struct Feature {
    std::string shapeName;
    std::string featureName;
    FeatureKind kind = FeatureKind::Primitive;
    Axis axis = Axis::Scalar;
    Trace equation;
    double value = 0.0;
    std::vector<size_t> nodePath;

    std::string id() const { return shapeName + "/" + featureName; }
};

/// A point on a shape made of two features (a crosshair in the UI).
struct PointFeature {
    std::string shapeName;
    std::string name;
    std::string xFeature;
    std::string yFeature;
};

struct Widget {
    enum class Kind { Crosshair, Segment, Slider };
    Kind kind = Kind::Crosshair;
    std::string shapeName;
    std::string name;
    std::vector<std::string> featureIds;
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // crosshair: (x1,y1); segment/slider: box or ends
};

std::vector<Feature> featuresOf(const Program& p, const Canvas& c);

/// Named points (corners, midpoints, centers, vertices) per shape.
std::vector<PointFeature> pointsOf(const Program& p, const Canvas& c);

const Feature* findFeature(const std::vector<Feature>& fs, const std::string& id);

/// UI geometry for one feature: distance features span their extent,
/// scalar attributes get a slider zone, coordinates a crosshair.
Widget featureGeometry(const Feature& f, const std::vector<Feature>& all);

/// Overlay widgets: one crosshair per named point, one segment per distance
/// feature and one slider per slider attribute.
std::vector<Widget> widgetsOf(const Program& p, const Canvas& c);

/// Shape name for each root canvas node.
std::vector<std::string> shapeNames(const Program& p, const Canvas& c);

}  // namespace sketchlab
