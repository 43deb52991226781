#include "nnv/geometry/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "nnv/errors.hpp"
#include "nnv/geometry/polygon.hpp"

namespace nnv::geom {

namespace {

// Merges points within kCoordTol onto a shared node via a hash grid keyed at
// the tolerance scale. Earlier insertions win, so exact segment endpoints
// (inserted first) become the node representatives.
class NodeStore {
  public:
    int insert(Point2 p) {
        long long gx = static_cast<long long>(std::floor(p.x / kCell));
        long long gy = static_cast<long long>(std::floor(p.y / kCell));
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find(key(gx + dx, gy + dy));
                if (it == grid_.end()) continue;
                for (int id : it->second) {
                    if (approx_equal(nodes_[id], p)) return id;
                }
            }
        }
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back(p);
        grid_[key(gx, gy)].push_back(id);
        return id;
    }

    std::vector<Point2> take() { return std::move(nodes_); }

  private:
    static constexpr double kCell = 4.0 * kCoordTol;
    static long long key(long long gx, long long gy) {
        return gx * 1000003LL + gy;
    }
    std::vector<Point2> nodes_;
    std::unordered_map<long long, std::vector<int>> grid_;
};

}  // namespace

PlanarSubdivision build_planar_subdivision(
    const std::vector<Segment>& segments) {
    NodeStore store;
    int n = static_cast<int>(segments.size());

    std::vector<std::pair<int, int>> endpoint_nodes(n);
    for (int i = 0; i < n; ++i) {
        endpoint_nodes[i] = {store.insert(segments[i].p),
                             store.insert(segments[i].q)};
    }

    std::vector<std::vector<int>> on_segment_nodes(n);
    for (const auto& ip : plane_sweep_intersections(segments)) {
        int node = store.insert(ip.point);
        for (int sid : ip.segments) on_segment_nodes[sid].push_back(node);
    }

    PlanarSubdivision sub;
    sub.nodes = store.take();

    std::set<std::pair<int, int>> edge_set;
    for (int i = 0; i < n; ++i) {
        auto& nodes = on_segment_nodes[i];
        nodes.push_back(endpoint_nodes[i].first);
        nodes.push_back(endpoint_nodes[i].second);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

        Point2 origin = segments[i].p;
        Point2 dir = segments[i].q - segments[i].p;
        std::sort(nodes.begin(), nodes.end(), [&](int a, int b) {
            return dot(sub.nodes[a] - origin, dir) <
                   dot(sub.nodes[b] - origin, dir);
        });
        for (size_t k = 0; k + 1 < nodes.size(); ++k) {
            int a = nodes[k], b = nodes[k + 1];
            if (a == b) continue;
            edge_set.insert({std::min(a, b), std::max(a, b)});
        }
    }
    sub.edges.assign(edge_set.begin(), edge_set.end());
    return sub;
}

std::vector<std::vector<int>> extract_faces(const PlanarSubdivision& sub) {
    int n = static_cast<int>(sub.nodes.size());

    // Sorted rotation of neighbors around each node.
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : sub.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::unordered_map<int, int>> rank(n);
    for (int v = 0; v < n; ++v) {
        std::sort(adj[v].begin(), adj[v].end(), [&](int a, int b) {
            Point2 pa = sub.nodes[a] - sub.nodes[v];
            Point2 pb = sub.nodes[b] - sub.nodes[v];
            double aa = std::atan2(pa.y, pa.x);
            double ab = std::atan2(pb.y, pb.x);
            if (aa != ab) return aa < ab;
            return a < b;
        });
        for (int i = 0; i < static_cast<int>(adj[v].size()); ++i) {
            rank[v][adj[v][i]] = i;
        }
    }

    // Directed-edge traversal: from (u -> v), continue with the neighbor that
    // precedes u in v's counterclockwise rotation. Bounded faces come out as
    // counterclockwise cycles; outer faces come out clockwise and are dropped.
    std::set<std::pair<int, int>> visited;
    std::vector<std::vector<int>> faces;
    for (auto [ea, eb] : sub.edges) {
        for (auto [su, sv] : {std::pair{ea, eb}, std::pair{eb, ea}}) {
            if (visited.count({su, sv})) continue;
            std::vector<int> cycle;
            int u = su, v = sv;
            while (true) {
                visited.insert({u, v});
                cycle.push_back(u);
                const auto& ring = adj[v];
                int r = rank[v].at(u);
                int w = ring[(r + static_cast<int>(ring.size()) - 1) %
                             ring.size()];
                u = v;
                v = w;
                if (u == su && v == sv) break;
            }
            std::vector<Point2> pts;
            pts.reserve(cycle.size());
            for (int id : cycle) pts.push_back(sub.nodes[id]);
            if (signed_area(pts) > 1e-12) {
                faces.push_back(std::move(cycle));
            }
        }
    }
    return faces;
}

}  // namespace nnv::geom
