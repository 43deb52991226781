#pragma once

#include <string>
#include <vector>

#include "nnv/geometry/polygon.hpp"

namespace nnv::geom {

// Identifies one edge of one polygon of the workspace. Polygon 0 is the
// boundary; polygons 1..o are the obstacles. Edge i runs from vertex i to
// vertex i+1 of the owning polygon.
struct EdgeId {
    int polygon = -1;
    int edge = -1;

    friend bool operator==(EdgeId a, EdgeId b) {
        return a.polygon == b.polygon && a.edge == b.edge;
    }
    friend bool operator!=(EdgeId a, EdgeId b) { return !(a == b); }
    friend bool operator<(EdgeId a, EdgeId b) {
        return a.polygon < b.polygon ||
               (a.polygon == b.polygon && a.edge < b.edge);
    }
};

// Convex workspace boundary plus convex obstacles. Validated on construction:
// obstacles inside the boundary, obstacle interiors pairwise disjoint.
class WorkspaceSpec {
  public:
    WorkspaceSpec(ConvexPolygon boundary, std::vector<ConvexPolygon> obstacles);

    const ConvexPolygon& boundary() const { return boundary_; }
    const std::vector<ConvexPolygon>& obstacles() const { return obstacles_; }

    int polygon_count() const { return 1 + static_cast<int>(obstacles_.size()); }
    const ConvexPolygon& polygon(int id) const {
        return id == 0 ? boundary_ : obstacles_[id - 1];
    }

    // All edges of the boundary and obstacles, in EdgeId order.
    const std::vector<std::pair<EdgeId, Segment>>& edges() const {
        return edges_;
    }
    Segment edge(EdgeId id) const { return polygon(id.polygon).edge(id.edge); }

    // All polygon vertices (boundary first), deduplicated.
    std::vector<Point2> all_vertices(bool include_boundary = true) const;

    // True when p is inside the boundary and outside every obstacle interior.
    bool in_free_space(Point2 p, double tol = kCoordTol) const;

  private:
    ConvexPolygon boundary_;
    std::vector<ConvexPolygon> obstacles_;
    std::vector<std::pair<EdgeId, Segment>> edges_;
};

// Fixed-heading LiDAR scanner: N lasers evenly spread over the full circle,
// laser i at heading + (i-1) * 2*pi/N. primary_indices are 1-based.
struct LidarSpec {
    int laser_count = 0;
    double heading = 0.0;
    std::vector<int> primary_indices;

    LidarSpec() = default;
    LidarSpec(int count, double heading_angle, std::vector<int> primary);

    double angle(int i) const;          // 1-based laser index
    std::vector<double> angles() const; // all N angles
    std::vector<double> primary_angles() const;
};

// Workspace JSON: {"boundary": [[x,y],...], "obstacles": [[[x,y],...],...]},
// all rings counterclockwise, coordinates in meters.
WorkspaceSpec load_workspace(const std::string& path);
void save_workspace(const WorkspaceSpec& w, const std::string& path);
WorkspaceSpec workspace_from_json_text(const std::string& text);

}  // namespace nnv::geom
