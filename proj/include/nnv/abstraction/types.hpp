#pragma once

#include <vector>

#include "nnv/geometry/polygon.hpp"
#include "nnv/network/network.hpp"

namespace nnv::abstraction {

// Discrete-time linear dynamics x' = A x + B u. State coordinates 1-2 are the
// workspace position; coordinates 3..n are auxiliary.
struct Dynamics {
    nn::Matrix A;
    nn::Matrix B;

    int state_dim() const { return A.rows; }
    int input_dim() const { return B.cols; }
};

// Discretization of the auxiliary dimensions 3..n into epsilon-cells.
struct StateBounds {
    std::vector<double> lower;  // one entry per auxiliary dimension
    std::vector<double> upper;
    double epsilon = 1.0;

    int aux_dims() const { return static_cast<int>(lower.size()); }
    // Cells along auxiliary dimension i; (upper-lower)/epsilon must be a
    // positive integer (throws NonDivisibleBounds otherwise).
    int cells(int i) const;
    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Abstract state: region index plus 1-based hypercube indices.
struct AbstractState {
    int region = -1;
    std::vector<int> box;
};

// Concrete cell of one abstract state: a region polygon crossed with a closed
// box over the auxiliary dimensions.
struct StateCell {
    geom::ConvexPolygon region;
    std::vector<Interval> box;
};

}  // namespace nnv::abstraction
