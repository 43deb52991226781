#include "nnv/geometry/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nnv/errors.hpp"

namespace nnv::geom {

namespace {

// Separation of two convex polygons along their edge normals (SAT). Returns
// the largest signed separation; > 0 means disjoint, ~0 touching.
double convex_separation(const ConvexPolygon& a, const ConvexPolygon& b) {
    double best = -std::numeric_limits<double>::infinity();
    auto axis_pass = [&](const ConvexPolygon& host, const ConvexPolygon& other) {
        int n = host.size();
        for (int i = 0; i < n; ++i) {
            Point2 p = host.vertex(i);
            Point2 q = host.vertex((i + 1) % n);
            Point2 e = q - p;
            double len = norm(e);
            double sep = std::numeric_limits<double>::infinity();
            for (Point2 v : other.vertices()) {
                sep = std::min(sep, -cross(e, v - p) / len);
            }
            best = std::max(best, sep);
        }
    };
    axis_pass(a, b);
    axis_pass(b, a);
    return best;
}

ConvexPolygon ring_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() < 3) {
        throw ParseError(std::string(what) + ": expected an array of >=3 [x,y] pairs");
    }
    std::vector<Point2> verts;
    for (const auto& v : j) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
            !v[1].is_number()) {
            throw ParseError(std::string(what) + ": vertex must be [x,y]");
        }
        verts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    try {
        return ConvexPolygon(std::move(verts));
    } catch (const DegenerateInput& e) {
        throw InvalidWorkspace(std::string(what) + ": " + e.what());
    }
}

}  // namespace

WorkspaceSpec::WorkspaceSpec(ConvexPolygon boundary,
                             std::vector<ConvexPolygon> obstacles)
    : boundary_(std::move(boundary)), obstacles_(std::move(obstacles)) {
    for (size_t i = 0; i < obstacles_.size(); ++i) {
        for (Point2 v : obstacles_[i].vertices()) {
            if (!boundary_.contains(v)) {
                throw InvalidWorkspace("obstacle " + std::to_string(i + 1) +
                                       " is not contained in the boundary");
            }
        }
        for (size_t j = i + 1; j < obstacles_.size(); ++j) {
            if (convex_separation(obstacles_[i], obstacles_[j]) < -kCoordTol) {
                throw InvalidWorkspace("obstacles " + std::to_string(i + 1) +
                                       " and " + std::to_string(j + 1) +
                                       " have overlapping interiors");
            }
        }
    }
    for (int pid = 0; pid < polygon_count(); ++pid) {
        const ConvexPolygon& poly = polygon(pid);
        for (int e = 0; e < poly.size(); ++e) {
            edges_.push_back({EdgeId{pid, e}, poly.edge(e)});
        }
    }
}

std::vector<Point2> WorkspaceSpec::all_vertices(bool include_boundary) const {
    std::vector<Point2> out;
    if (include_boundary) {
        out.insert(out.end(), boundary_.vertices().begin(),
                   boundary_.vertices().end());
    }
    for (const auto& o : obstacles_) {
        out.insert(out.end(), o.vertices().begin(), o.vertices().end());
    }
    // Dedup exact duplicates (shared corners).
    std::vector<Point2> uniq;
    for (Point2 p : out) {
        bool seen = false;
        for (Point2 q : uniq) {
            if (p == q) {
                seen = true;
                break;
            }
        }
        if (!seen) uniq.push_back(p);
    }
    return uniq;
}

bool WorkspaceSpec::in_free_space(Point2 p, double tol) const {
    if (!boundary_.contains(p, tol)) return false;
    for (const auto& o : obstacles_) {
        if (o.strictly_contains(p, tol)) return false;
    }
    return true;
}

LidarSpec::LidarSpec(int count, double heading_angle, std::vector<int> primary)
    : laser_count(count), heading(heading_angle),
      primary_indices(std::move(primary)) {
    if (laser_count < 1) throw InputError("lidar needs at least one laser");
    if (primary_indices.empty()) {
        throw InputError("lidar primary laser set must be nonempty");
    }
    std::sort(primary_indices.begin(), primary_indices.end());
    primary_indices.erase(
        std::unique(primary_indices.begin(), primary_indices.end()),
        primary_indices.end());
    for (int i : primary_indices) {
        if (i < 1 || i > laser_count) {
            throw InputError("primary laser index " + std::to_string(i) +
                             " out of range 1.." + std::to_string(laser_count));
        }
    }
}

double LidarSpec::angle(int i) const {
    return heading + (i - 1) * 2.0 * std::numbers::pi / laser_count;
}

std::vector<double> LidarSpec::angles() const {
    std::vector<double> out(laser_count);
    for (int i = 1; i <= laser_count; ++i) out[i - 1] = angle(i);
    return out;
}

std::vector<double> LidarSpec::primary_angles() const {
    std::vector<double> out;
    out.reserve(primary_indices.size());
    for (int i : primary_indices) out.push_back(angle(i));
    return out;
}

WorkspaceSpec workspace_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("workspace JSON: ") + e.what());
    }
    if (!j.contains("boundary")) {
        throw ParseError("workspace JSON: missing \"boundary\"");
    }
    ConvexPolygon boundary = ring_from_json(j["boundary"], "boundary");
    std::vector<ConvexPolygon> obstacles;
    if (j.contains("obstacles")) {
        int k = 0;
        for (const auto& ring : j["obstacles"]) {
            obstacles.push_back(ring_from_json(
                ring, ("obstacle " + std::to_string(++k)).c_str()));
        }
    }
    return WorkspaceSpec(std::move(boundary), std::move(obstacles));
}

WorkspaceSpec load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open workspace file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return workspace_from_json_text(ss.str());
}

void save_workspace(const WorkspaceSpec& w, const std::string& path) {
    nlohmann::json j;
    auto ring_to_json = [](const ConvexPolygon& p) {
        nlohmann::json r = nlohmann::json::array();
        for (Point2 v : p.vertices()) r.push_back({v.x, v.y});
        return r;
    };
    j["boundary"] = ring_to_json(w.boundary());
    j["obstacles"] = nlohmann::json::array();
    for (const auto& o : w.obstacles()) j["obstacles"].push_back(ring_to_json(o));
    std::ofstream out(path);
    if (!out) throw InputError("cannot write workspace file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace nnv::geom
