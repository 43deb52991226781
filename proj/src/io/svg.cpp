#include "nnv/io/svg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nnv::io {

std::string partition_to_svg(const geom::WorkspaceSpec& workspace,
                             const geom::PartitionResult& partition,
                             const std::vector<int>& highlight) {
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    for (geom::Point2 v : workspace.boundary().vertices()) {
        min_x = std::min(min_x, v.x);
        min_y = std::min(min_y, v.y);
        max_x = std::max(max_x, v.x);
        max_y = std::max(max_y, v.y);
    }
    double w = max_x - min_x, h = max_y - min_y;
    double pad = 0.02 * std::max(w, h);
    double scale = 800.0 / std::max(w, h);

    std::set<int> green(highlight.begin(), highlight.end());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << (w + 2 * pad) * scale << "\" height=\"" << (h + 2 * pad) * scale
        << "\" viewBox=\"0 0 " << (w + 2 * pad) * scale << " "
        << (h + 2 * pad) * scale << "\">\n";

    auto emit = [&](const geom::ConvexPolygon& poly, const char* fill,
                    const char* stroke, double width) {
        svg << "<polygon points=\"";
        for (geom::Point2 v : poly.vertices()) {
            double px = (v.x - min_x + pad) * scale;
            double py = (max_y - v.y + pad) * scale;  // flip y for screen space
            svg << px << "," << py << " ";
        }
        svg << "\" fill=\"" << fill << "\" stroke=\"" << stroke
            << "\" stroke-width=\"" << width << "\"/>\n";
    };

    emit(workspace.boundary(), "#ffffff", "#000000", 2.0);
    for (size_t i = 0; i < partition.fine_regions.size(); ++i) {
        const char* fill = "none";
        if (partition.region_kind[i] == geom::RegionKind::obstacle_interior) {
            fill = "#444444";
        } else if (green.count(static_cast<int>(i))) {
            fill = "#7cc87c";
        }
        emit(partition.fine_regions[i], fill, "#2060a0", 0.6);
    }
    for (const auto& o : workspace.obstacles()) {
        emit(o, "#444444", "#000000", 1.0);
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nnv::io
