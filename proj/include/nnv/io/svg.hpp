#pragma once

#include <string>
#include <vector>

#include "nnv/geometry/partition.hpp"

namespace nnv::io {

// Static SVG rendering of the partition: obstacles dark, free regions
// outlined; regions listed in `highlight` are filled green (used for the
// safe-set projection).
std::string partition_to_svg(const geom::WorkspaceSpec& workspace,
                             const geom::PartitionResult& partition,
                             const std::vector<int>& highlight = {});

}  // namespace nnv::io
