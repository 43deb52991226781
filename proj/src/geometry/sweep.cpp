// Bentley-Ottmann sweep over the segment set, with two deviations from the
// textbook version that buy robustness on the nearly-degenerate inputs this
// project produces (axis-parallel bundles, shared endpoints, T-junctions):
// events within kCoordTol are merged into one event, and the segments
// incident to an event are found by scanning the whole status rather than by
// bracketing around a search position.

#include "nnv/geometry/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <variant>

#include "nnv/errors.hpp"
#include "nnv/geometry/predicates.hpp"

namespace nnv::geom {

namespace {

struct EventOrder {
    bool operator()(Point2 a, Point2 b) const {
        if (a.y != b.y) return a.y > b.y;
        return a.x < b.x;
    }
};

struct Event {
    std::vector<int> starters;
};

using EventQueue = std::map<Point2, Event, EventOrder>;

struct SweepSegment {
    Point2 upper;
    Point2 lower;
    bool horizontal = false;
    double below_key = 0.0;  // x drift per unit of downward sweep
};

// Intersection of two segments under exact orientation tests.
struct SegSegResult {
    enum class Kind { none, point, overlap } kind = Kind::none;
    Point2 a, b;  // point, or the two overlap endpoints
};

SegSegResult seg_seg_intersection(const Segment& s1, const Segment& s2) {
    int d1 = orientation(s2.p, s2.q, s1.p);
    int d2 = orientation(s2.p, s2.q, s1.q);
    int d3 = orientation(s1.p, s1.q, s2.p);
    int d4 = orientation(s1.p, s1.q, s2.q);

    if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
        // Collinear: project s2 onto s1.
        Point2 d = s1.q - s1.p;
        double len2 = dot(d, d);
        double t0 = dot(s2.p - s1.p, d) / len2;
        double t1 = dot(s2.q - s1.p, d) / len2;
        Point2 e0 = s2.p, e1 = s2.q;
        if (t0 > t1) {
            std::swap(t0, t1);
            std::swap(e0, e1);
        }
        double lo = std::max(t0, 0.0);
        double hi = std::min(t1, 1.0);
        if (lo > hi) return {};
        Point2 plo = (lo == t0) ? e0 : s1.p;
        Point2 phi = (hi == t1) ? e1 : s1.q;
        if (approx_equal(plo, phi, 0.0)) {
            return {SegSegResult::Kind::point, plo, plo};
        }
        return {SegSegResult::Kind::overlap, plo, phi};
    }

    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 &&
        d2 != 0 && d3 != 0 && d4 != 0) {
        Point2 r = s1.q - s1.p;
        Point2 s = s2.q - s2.p;
        double t = cross(s2.p - s1.p, s) / cross(r, s);
        return {SegSegResult::Kind::point, s1.p + t * r, {}};
    }

    // Endpoint touching an endpoint or an interior.
    if (d1 == 0 && on_segment(s2.p, s2.q, s1.p))
        return {SegSegResult::Kind::point, s1.p, {}};
    if (d2 == 0 && on_segment(s2.p, s2.q, s1.q))
        return {SegSegResult::Kind::point, s1.q, {}};
    if (d3 == 0 && on_segment(s1.p, s1.q, s2.p))
        return {SegSegResult::Kind::point, s2.p, {}};
    if (d4 == 0 && on_segment(s1.p, s1.q, s2.q))
        return {SegSegResult::Kind::point, s2.q, {}};
    return {};
}

class Sweep {
  public:
    explicit Sweep(const std::vector<Segment>& segments) : input_(segments) {
        segs_.reserve(segments.size());
        for (const auto& s : segments) {
            if (length(s) <= 0.0) {
                throw DegenerateInput("plane sweep: zero-length segment");
            }
            SweepSegment ss;
            bool p_upper = (s.p.y > s.q.y) || (s.p.y == s.q.y && s.p.x < s.q.x);
            ss.upper = p_upper ? s.p : s.q;
            ss.lower = p_upper ? s.q : s.p;
            ss.horizontal = (ss.upper.y == ss.lower.y);
            ss.below_key = ss.horizontal
                               ? std::numeric_limits<double>::infinity()
                               : (ss.lower.x - ss.upper.x) /
                                     (ss.upper.y - ss.lower.y);
            segs_.push_back(ss);
        }
    }

    std::vector<IntersectionPoint> run() {
        for (int i = 0; i < static_cast<int>(segs_.size()); ++i) {
            enqueue(segs_[i].upper, i);
            enqueue(segs_[i].lower, -1);
        }
        while (!queue_.empty()) {
            auto it = queue_.begin();
            Point2 p = it->first;
            Event ev = std::move(it->second);
            queue_.erase(it);
            process(p, ev);
        }
        return std::move(reports_);
    }

  private:
    // Inserts (or merges) an event at q; starter >= 0 registers a segment
    // whose upper endpoint is q.
    void enqueue(Point2 q, int starter) {
        // Scan the y-band around q for an event within tolerance.
        auto it = queue_.lower_bound(
            {-std::numeric_limits<double>::infinity(), q.y + kCoordTol});
        Event* found = nullptr;
        for (; it != queue_.end(); ++it) {
            if (it->first.y < q.y - kCoordTol) break;
            if (std::abs(it->first.x - q.x) <= kCoordTol &&
                std::abs(it->first.y - q.y) <= kCoordTol) {
                found = &it->second;
                break;
            }
        }
        if (!found) found = &queue_[q];
        if (starter >= 0) found->starters.push_back(starter);
    }

    double x_at(int id, double y) const {
        const SweepSegment& s = segs_[id];
        if (s.horizontal) return s.upper.x;
        double yy = std::clamp(y, s.lower.y, s.upper.y);
        return s.upper.x + (s.upper.y - yy) * s.below_key;
    }

    void process(Point2 p, const Event& ev) {
        // Classify active segments against p.
        std::vector<int> passers, enders;
        std::vector<int> keep;
        keep.reserve(status_.size());
        int removal_pos = -1;
        for (int idx = 0; idx < static_cast<int>(status_.size()); ++idx) {
            int id = status_[idx];
            const SweepSegment& s = segs_[id];
            Segment seg{s.upper, s.lower};
            if (point_segment_distance(p, seg) <= kCoordTol) {
                if (approx_equal(p, s.lower)) {
                    enders.push_back(id);
                } else {
                    passers.push_back(id);
                }
                if (removal_pos < 0) removal_pos = static_cast<int>(keep.size());
            } else {
                keep.push_back(id);
            }
        }

        std::vector<int> incident = ev.starters;
        incident.insert(incident.end(), passers.begin(), passers.end());
        incident.insert(incident.end(), enders.begin(), enders.end());
        std::sort(incident.begin(), incident.end());
        incident.erase(std::unique(incident.begin(), incident.end()),
                       incident.end());
        if (incident.size() >= 2) {
            reports_.push_back({p, incident});
        }

        // Rebuild the status: passers and starters re-enter ordered by their
        // drift below p; ties by id keep the order deterministic.
        std::vector<int> block = ev.starters;
        block.insert(block.end(), passers.begin(), passers.end());
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        // Drop starters that end at p itself (degenerate; filtered earlier).
        std::sort(block.begin(), block.end(), [&](int a, int b) {
            if (segs_[a].below_key != segs_[b].below_key) {
                return segs_[a].below_key < segs_[b].below_key;
            }
            return a < b;
        });

        int pos;
        if (!block.empty()) {
            pos = 0;
            while (pos < static_cast<int>(keep.size()) &&
                   x_at(keep[pos], p.y) <= p.x) {
                ++pos;
            }
            keep.insert(keep.begin() + pos, block.begin(), block.end());
        } else {
            pos = (removal_pos >= 0) ? removal_pos : -1;
        }
        status_ = std::move(keep);

        if (!block.empty()) {
            test_neighbors(pos - 1, pos, p);
            int right = pos + static_cast<int>(block.size());
            test_neighbors(right - 1, right, p);
        } else if (pos >= 0) {
            test_neighbors(pos - 1, pos, p);
        }
    }

    void test_neighbors(int left, int right, Point2 p) {
        if (left < 0 || right >= static_cast<int>(status_.size()) ||
            left >= right) {
            return;
        }
        int a = status_[left], b = status_[right];
        SegSegResult r = seg_seg_intersection(input_[a], input_[b]);
        if (r.kind == SegSegResult::Kind::none) return;
        maybe_enqueue_future(r.a, p);
        if (r.kind == SegSegResult::Kind::overlap) maybe_enqueue_future(r.b, p);
    }

    void maybe_enqueue_future(Point2 q, Point2 p) {
        bool future = (q.y < p.y - kCoordTol) ||
                      (std::abs(q.y - p.y) <= kCoordTol && q.x > p.x + kCoordTol);
        if (future) enqueue(q, -1);
    }

    const std::vector<Segment>& input_;
    std::vector<SweepSegment> segs_;
    EventQueue queue_;
    std::vector<int> status_;
    std::vector<IntersectionPoint> reports_;
};

}  // namespace

std::vector<IntersectionPoint> plane_sweep_intersections(
    const std::vector<Segment>& segments) {
    if (segments.empty()) return {};
    return Sweep(segments).run();
}

}  // namespace nnv::geom
