#include "nnv/abstraction/abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "nnv/errors.hpp"
#include "nnv/geometry/ray.hpp"

namespace nnv::abstraction {

using geom::ConvexPolygon;
using geom::Point2;

int StateBounds::cells(int i) const {
    double span = upper[i] - lower[i];
    double ratio = span / epsilon;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9) {
        throw NonDivisibleBounds(
            "bounds span of auxiliary dimension " + std::to_string(i + 3) +
            " is not a positive multiple of epsilon");
    }
    return static_cast<int>(rounded);
}

void StateBounds::validate() const {
    if (lower.size() != upper.size()) {
        throw NonDivisibleBounds("bounds lower/upper size mismatch");
    }
    if (epsilon <= 0.0) throw NonDivisibleBounds("epsilon must be positive");
    for (int i = 0; i < aux_dims(); ++i) {
        if (lower[i] >= upper[i]) {
            throw NonDivisibleBounds("bounds must satisfy lower < upper");
        }
        cells(i);
    }
}

StateCell StateSpace::cell(const geom::PartitionResult& partition,
                           const StateBounds& bounds, int state_id) const {
    const AbstractState& s = states[state_id];
    StateCell out;
    out.region = partition.fine_regions[s.region];
    out.box.reserve(s.box.size());
    for (size_t i = 0; i < s.box.size(); ++i) {
        double lo = bounds.lower[i] + bounds.epsilon * (s.box[i] - 1);
        out.box.push_back({lo, lo + bounds.epsilon});
    }
    return out;
}

int StateSpace::index_of(int region, const std::vector<int>& box) const {
    // States are laid out region-major with lexicographic box indices, so the
    // index is computable without a search.
    if (states.empty()) return -1;
    int aux = static_cast<int>(states[0].box.size());
    if (static_cast<int>(box.size()) != aux) return -1;
    int per_region = 1;
    std::vector<int> dim_cells(aux);
    if (aux > 0) {
        // Recover grid shape from the last state.
        const AbstractState& last = states.back();
        for (int i = 0; i < aux; ++i) {
            dim_cells[i] = last.box[i];
            per_region *= last.box[i];
        }
    }
    int idx = 0;
    for (int i = 0; i < aux; ++i) {
        if (box[i] < 1 || box[i] > dim_cells[i]) return -1;
        idx = idx * dim_cells[i] + (box[i] - 1);
    }
    int id = region * per_region + idx;
    if (id < 0 || id >= state_count()) return -1;
    return id;
}

StateSpace build_states(const geom::PartitionResult& partition,
                        const StateBounds& bounds) {
    bounds.validate();
    StateSpace space;
    int aux = bounds.aux_dims();
    std::vector<int> dim_cells(aux);
    long long per_region = 1;
    for (int i = 0; i < aux; ++i) {
        dim_cells[i] = bounds.cells(i);
        per_region *= dim_cells[i];
    }

    int r = static_cast<int>(partition.fine_regions.size());
    space.states.reserve(static_cast<size_t>(r) * per_region);
    for (int region = 0; region < r; ++region) {
        std::vector<int> box(aux, 1);
        while (true) {
            space.states.push_back({region, box});
            int i = aux - 1;
            for (; i >= 0; --i) {
                if (box[i] < dim_cells[i]) {
                    ++box[i];
                    std::fill(box.begin() + i + 1, box.end(), 1);
                    break;
                }
            }
            if (i < 0) break;
        }
    }

    int aggregates = static_cast<int>(partition.aggregate_regions.size());
    space.aggregate_members.assign(aggregates, {});
    space.state_aggregate.resize(space.states.size());
    for (int id = 0; id < space.state_count(); ++id) {
        int agg = partition.fine_to_aggregate[space.states[id].region];
        space.state_aggregate[id] = agg;
        space.aggregate_members[agg].push_back(id);
    }
    return space;
}

namespace {

// Distance from a segment to the closed boundary ring of a polygon.
double segment_to_ring_distance(const geom::Segment& seg,
                                const ConvexPolygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    int n = poly.size();
    for (int i = 0; i < n; ++i) {
        geom::Segment e = poly.edge(i);
        // Minimum over endpoint-to-segment distances; segments that cross
        // would have distance 0 via containment checks elsewhere.
        best = std::min({best, geom::point_segment_distance(seg.p, e),
                         geom::point_segment_distance(seg.q, e),
                         geom::point_segment_distance(e.p, seg),
                         geom::point_segment_distance(e.q, seg)});
    }
    return best;
}

double region_to_ring_distance(const ConvexPolygon& region,
                               const ConvexPolygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < region.size(); ++i) {
        best = std::min(best, segment_to_ring_distance(region.edge(i), poly));
    }
    return best;
}

bool region_edge_on_boundary(const ConvexPolygon& region,
                             const ConvexPolygon& boundary) {
    int nb = boundary.size();
    for (int i = 0; i < region.size(); ++i) {
        geom::Segment e = region.edge(i);
        Point2 mid = 0.5 * (e.p + e.q);
        double dp = std::numeric_limits<double>::infinity();
        double dq = dp, dm = dp;
        for (int b = 0; b < nb; ++b) {
            geom::Segment be = boundary.edge(b);
            dp = std::min(dp, geom::point_segment_distance(e.p, be));
            dq = std::min(dq, geom::point_segment_distance(e.q, be));
            dm = std::min(dm, geom::point_segment_distance(mid, be));
        }
        if (dp <= geom::kCoordTol && dq <= geom::kCoordTol &&
            dm <= geom::kCoordTol) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<int> initial_unsafe(const geom::PartitionResult& partition,
                                const geom::WorkspaceSpec& workspace,
                                const StateSpace& space, bool strict_closed) {
    int r = static_cast<int>(partition.fine_regions.size());
    std::vector<bool> region_unsafe(r, false);
    for (int i = 0; i < r; ++i) {
        if (partition.region_kind[i] == geom::RegionKind::obstacle_interior) {
            region_unsafe[i] = true;
            continue;
        }
        const ConvexPolygon& region = partition.fine_regions[i];
        if (region_edge_on_boundary(region, workspace.boundary())) {
            region_unsafe[i] = true;
            continue;
        }
        if (strict_closed) {
            if (region_to_ring_distance(region, workspace.boundary()) <=
                geom::kCoordTol) {
                region_unsafe[i] = true;
                continue;
            }
            for (const auto& o : workspace.obstacles()) {
                if (region_to_ring_distance(region, o) <= geom::kCoordTol) {
                    region_unsafe[i] = true;
                    break;
                }
            }
        }
    }

    std::vector<int> out;
    for (int id = 0; id < space.state_count(); ++id) {
        if (region_unsafe[space.states[id].region]) out.push_back(id);
    }
    return out;
}

bool TransitionSystem::has_transition(int from, int to) const {
    const auto& row = transitions[from];
    return std::binary_search(row.begin(), row.end(), to);
}

namespace {

struct SinkQueries {
    // One constraint per query over (x'_1, x'_2) or an auxiliary coordinate.
    struct Query {
        int var_offset;   // offset within the successor block
        smc::Relation rel;
        double rhs;
        std::vector<std::pair<int, double>> coeffs;  // (offset, coeff)
    };
    std::vector<Query> queries;
};

SinkQueries build_sink_queries(const geom::WorkspaceSpec& workspace,
                               const StateBounds& bounds) {
    SinkQueries out;
    const ConvexPolygon& b = workspace.boundary();
    for (int i = 0; i < b.size(); ++i) {
        Point2 p = b.vertex(i);
        Point2 q = b.vertex((i + 1) % b.size());
        double dx = q.x - p.x;
        double dy = q.y - p.y;
        SinkQueries::Query query;
        query.coeffs = {{0, -dy}, {1, dx}};
        query.rel = smc::Relation::le;
        query.rhs = p.y * dx - p.x * dy;
        out.queries.push_back(std::move(query));
    }
    for (int i = 0; i < bounds.aux_dims(); ++i) {
        out.queries.push_back({0, smc::Relation::le, bounds.lower[i],
                               {{2 + i, 1.0}}});
        out.queries.push_back({0, smc::Relation::ge, bounds.upper[i],
                               {{2 + i, 1.0}}});
    }
    return out;
}

}  // namespace

TransitionSystem compute_transitions(
    const StateSpace& space, const geom::PartitionResult& partition,
    const StateBounds& bounds, const Dynamics& dyn,
    const nn::NeuralNetwork& net, const geom::WorkspaceSpec& workspace,
    const std::vector<std::optional<imaging::AffineImagingMap>>& maps,
    const std::vector<std::vector<smc::Conflict>>& conflicts_per_region,
    const std::vector<int>& unsafe0, const TransitionOptions& opts) {
    if (dyn.state_dim() - 2 != bounds.aux_dims()) {
        throw DimensionMismatch(
            "auxiliary bounds do not match the state dimension");
    }

    TransitionSystem ts;
    ts.states = space.states;
    ts.state_aggregate = space.state_aggregate;
    ts.aggregate_members = space.aggregate_members;
    ts.unsafe0 = unsafe0;

    int n_states = space.state_count();
    int sink_id = n_states;
    ts.transitions.assign(n_states, {});

    std::vector<Interval> hull_box;
    for (int i = 0; i < bounds.aux_dims(); ++i) {
        hull_box.push_back({bounds.lower[i], bounds.upper[i]});
    }
    SinkQueries sink_queries = build_sink_queries(workspace, bounds);

    std::atomic<long long> limited{0};
    std::atomic<int> next_state{0};

    auto worker = [&]() {
        while (true) {
            int s = next_state.fetch_add(1);
            if (s >= n_states) break;

            int region_s = space.states[s].region;
            std::vector<int>& row = ts.transitions[s];

            if (partition.region_kind[region_s] != geom::RegionKind::free) {
                // No imaging model inside obstacles; keep the complete,
                // conservative successor set.
                row.resize(n_states + 1);
                for (int t = 0; t <= n_states; ++t) row[t] = t;
                continue;
            }

            const imaging::AffineImagingMap& region_maps = *maps[region_s];
            StateCell cell_s = space.cell(partition, bounds, s);
            std::vector<std::vector<int>> learned;
            for (const auto& c : conflicts_per_region[region_s]) {
                learned.push_back(c.blocking_clause());
            }

            std::vector<char> allowed(n_states, 1);
            int own_aggregate = space.state_aggregate[s];

            for (size_t agg = 0; agg < space.aggregate_members.size(); ++agg) {
                const auto& members = space.aggregate_members[agg];
                if (members.empty()) continue;
                bool intra = (static_cast<int>(agg) == own_aggregate);
                if (intra && !opts.refine_intra) continue;

                bool need_members = true;
                if (!intra) {
                    StateCell hull{partition.aggregate_regions[agg], hull_box};
                    smc::MonotoneSmcProblem problem = smc::encode_transition(
                        dyn, cell_s, hull, region_maps, net);
                    problem.learned_clauses = learned;
                    smc::SmcOutcome outcome = smc::smc_solve(problem, opts.smc);
                    if (outcome.status == smc::SmcStatus::unsat) {
                        for (int t : members) allowed[t] = 0;
                        need_members = false;
                    } else if (outcome.status == smc::SmcStatus::resource_limit) {
                        ++limited;
                        need_members = false;  // keep every member transition
                    }
                }
                if (!need_members) continue;

                for (int t : members) {
                    StateCell cell_t = space.cell(partition, bounds, t);
                    smc::MonotoneSmcProblem problem = smc::encode_transition(
                        dyn, cell_s, cell_t, region_maps, net);
                    problem.learned_clauses = learned;
                    smc::SmcOutcome outcome = smc::smc_solve(problem, opts.smc);
                    if (outcome.status == smc::SmcStatus::unsat) {
                        allowed[t] = 0;
                    } else if (outcome.status == smc::SmcStatus::resource_limit) {
                        ++limited;
                    }
                }
            }

            // Exit checks: can the successor leave the workspace or bounds?
            bool sink_possible = false;
            for (const auto& query : sink_queries.queries) {
                smc::MonotoneSmcProblem problem = smc::encode_transition_open(
                    dyn, cell_s, region_maps, net);
                std::vector<smc::Term> terms;
                for (auto [off, coeff] : query.coeffs) {
                    terms.push_back(
                        {problem.layout.x_next_off + off, coeff});
                }
                problem.base.add(std::move(terms), query.rel, query.rhs);
                problem.learned_clauses = learned;
                smc::SmcOutcome outcome = smc::smc_solve(problem, opts.smc);
                if (outcome.status == smc::SmcStatus::sat) {
                    sink_possible = true;
                    break;
                }
                if (outcome.status == smc::SmcStatus::resource_limit) {
                    ++limited;
                    sink_possible = true;  // conservative
                    break;
                }
            }

            for (int t = 0; t < n_states; ++t) {
                if (allowed[t]) row.push_back(t);
            }
            if (sink_possible) row.push_back(sink_id);
        }
    };

    int workers = std::max(1, opts.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ts.resource_limited_pairs = limited.load();
    return ts;
}

FixedPointResult unsafe_fixed_point(const TransitionSystem& ts) {
    int n = static_cast<int>(ts.states.size());
    int sink = ts.sink();
    std::vector<bool> unsafe(n + 1, false);
    unsafe[sink] = true;
    for (int s : ts.unsafe0) unsafe[s] = true;

    FixedPointResult out;
    bool changed = true;
    while (changed) {
        changed = false;
        ++out.iterations;
        for (int s = 0; s < n; ++s) {
            if (unsafe[s]) continue;
            for (int t : ts.transitions[s]) {
                if (unsafe[t]) {
                    unsafe[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }

    for (int s = 0; s < n; ++s) {
        (unsafe[s] ? out.unsafe : out.safe).push_back(s);
    }
    if (unsafe[sink]) out.unsafe.push_back(sink);
    return out;
}

std::vector<StateCell> safe_set(const FixedPointResult& fp,
                                const StateSpace& space,
                                const geom::PartitionResult& partition,
                                const StateBounds& bounds) {
    std::vector<StateCell> out;
    out.reserve(fp.safe.size());
    for (int s : fp.safe) {
        out.push_back(space.cell(partition, bounds, s));
    }
    return out;
}

SimulationResult simulate(const Dynamics& dyn, const nn::NeuralNetwork& net,
                          const geom::WorkspaceSpec& workspace,
                          const geom::LidarSpec& lidar,
                          const StateBounds& bounds,
                          const std::vector<double>& x0, int steps) {
    if (static_cast<int>(x0.size()) != dyn.state_dim()) {
        throw DimensionMismatch("initial state size does not match dynamics");
    }
    SimulationResult out;
    std::vector<double> x = x0;
    out.trajectory.push_back(x);

    auto position_safe = [&](Point2 p) {
        if (workspace.boundary().signed_distance(p) <= geom::kCoordTol) {
            return false;  // on or outside the boundary
        }
        for (const auto& o : workspace.obstacles()) {
            if (o.signed_distance(p) >= -geom::kCoordTol) return false;
        }
        return true;
    };
    auto aux_ok = [&](const std::vector<double>& state) {
        for (int i = 0; i < bounds.aux_dims(); ++i) {
            if (state[2 + i] < bounds.lower[i] - geom::kCoordTol ||
                state[2 + i] > bounds.upper[i] + geom::kCoordTol) {
                return false;
            }
        }
        return true;
    };

    for (int t = 0; t <= steps; ++t) {
        Point2 p{x[0], x[1]};
        if (!position_safe(p)) {
            out.safe = false;
            out.violation_step = t;
            return out;
        }
        if (!aux_ok(x)) {
            out.safe = false;
            out.out_of_bounds = true;
            out.violation_step = t;
            return out;
        }
        if (t == steps) break;

        std::vector<double> d = imaging::lidar_image_bruteforce(p, workspace, lidar);
        std::vector<double> u = nn::forward(net, d).output;
        std::vector<double> xn = dyn.A.apply(x);
        std::vector<double> bu = dyn.B.apply(u);
        for (size_t i = 0; i < xn.size(); ++i) xn[i] += bu[i];
        x = std::move(xn);
        out.trajectory.push_back(x);
    }
    return out;
}

std::vector<int> locate_regions(const geom::PartitionResult& partition,
                                Point2 p, double tol) {
    std::vector<int> out;
    for (size_t i = 0; i < partition.fine_regions.size(); ++i) {
        if (partition.fine_regions[i].contains(p, tol)) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

std::vector<int> related_states(const StateSpace& space,
                                const geom::PartitionResult& partition,
                                const StateBounds& bounds,
                                const std::vector<double>& x) {
    std::vector<int> regions =
        locate_regions(partition, {x[0], x[1]});
    int aux = bounds.aux_dims();

    // Candidate 1-based cell indices per auxiliary dimension (two on grid
    // lines, since cells are closed).
    std::vector<std::vector<int>> index_choices(aux);
    for (int i = 0; i < aux; ++i) {
        double rel = (x[2 + i] - bounds.lower[i]) / bounds.epsilon;
        int cells = bounds.cells(i);
        for (int k : {static_cast<int>(std::floor(rel)) ,
                      static_cast<int>(std::floor(rel)) + 1}) {
            // Cell k+1 covers [k*eps, (k+1)*eps].
            if (k < 0 || k >= cells) continue;
            if (rel >= k - 1e-9 && rel <= k + 1.0 + 1e-9) {
                index_choices[i].push_back(k + 1);
            }
        }
        if (index_choices[i].empty()) return {};  // out of bounds
        std::sort(index_choices[i].begin(), index_choices[i].end());
        index_choices[i].erase(
            std::unique(index_choices[i].begin(), index_choices[i].end()),
            index_choices[i].end());
    }

    std::vector<int> out;
    std::vector<int> box(aux);
    std::function<void(int, int)> expand = [&](int region, int dim) {
        if (dim == aux) {
            int id = space.index_of(region, box);
            if (id >= 0) out.push_back(id);
            return;
        }
        for (int k : index_choices[dim]) {
            box[dim] = k;
            expand(region, dim + 1);
        }
    };
    for (int region : regions) expand(region, 0);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nnv::abstraction
