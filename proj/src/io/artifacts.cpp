#include "nnv/io/artifacts.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nnv/errors.hpp"

namespace nnv::io {

using nlohmann::json;

namespace {

json point_to_json(geom::Point2 p) { return json::array({p.x, p.y}); }

json polygon_to_json(const geom::ConvexPolygon& poly) {
    json j = json::array();
    for (geom::Point2 v : poly.vertices()) j.push_back(point_to_json(v));
    return j;
}

const char* kind_name(geom::RegionKind k) {
    return k == geom::RegionKind::free ? "free" : "obstacle";
}

}  // namespace

std::string partition_to_json(
    const geom::PartitionResult& partition,
    const std::vector<std::optional<imaging::AffineImagingMap>>& maps) {
    json j;
    j["format_version"] = 1;
    j["regions"] = json::array();
    for (size_t i = 0; i < partition.fine_regions.size(); ++i) {
        json r;
        r["vertices"] = polygon_to_json(partition.fine_regions[i]);
        r["kind"] = kind_name(partition.region_kind[i]);
        r["aggregate"] = partition.fine_to_aggregate[i];
        if (i < maps.size() && maps[i].has_value()) {
            json lasers = json::array();
            for (const auto& m : maps[i]->lasers) {
                json lj;
                lj["P"] = json::array({json::array({m.P[0][0], m.P[0][1]}),
                                       json::array({m.P[1][0], m.P[1][1]})});
                lj["Q"] = json::array({m.Q[0], m.Q[1]});
                lj["edge"] = {{"a", point_to_json(m.edge.a)},
                              {"b", point_to_json(m.edge.b)},
                              {"polygon", m.edge.source.polygon},
                              {"edge_index", m.edge.source.edge}};
                lasers.push_back(std::move(lj));
            }
            r["lasers"] = std::move(lasers);
        }
        j["regions"].push_back(std::move(r));
    }
    j["aggregates"] = json::array();
    for (size_t i = 0; i < partition.aggregate_regions.size(); ++i) {
        json a;
        a["vertices"] = polygon_to_json(partition.aggregate_regions[i]);
        a["kind"] = kind_name(partition.aggregate_kind[i]);
        j["aggregates"].push_back(std::move(a));
    }
    return j.dump(2);
}

std::string conflicts_to_json(const std::vector<smc::Conflict>& conflicts) {
    json j = json::array();
    for (const auto& c : conflicts) j.push_back(c.literals);
    return j.dump();
}

std::vector<smc::Conflict> conflicts_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("conflict cache JSON: ") + e.what());
    }
    if (!j.is_array()) throw ParseError("conflict cache: expected an array");
    std::vector<smc::Conflict> out;
    for (const auto& cj : j) {
        smc::Conflict c;
        for (const auto& lit : cj) c.literals.push_back(lit.get<int>());
        out.push_back(std::move(c));
    }
    return out;
}

std::string abstraction_to_json(const abstraction::TransitionSystem& ts,
                                const abstraction::FixedPointResult& fp) {
    json j;
    j["format_version"] = 1;
    j["states"] = json::array();
    for (const auto& s : ts.states) {
        j["states"].push_back({{"region", s.region}, {"box", s.box}});
    }
    j["sink"] = ts.sink();
    j["aggregates"] = ts.aggregate_members;
    json trans = json::array();
    for (size_t s = 0; s < ts.transitions.size(); ++s) {
        for (int t : ts.transitions[s]) {
            trans.push_back(json::array({static_cast<int>(s), t}));
        }
    }
    j["transitions"] = std::move(trans);
    j["unsafe0"] = ts.unsafe0;
    j["unsafe"] = fp.unsafe;
    j["safe"] = fp.safe;
    j["resource_limited_pairs"] = ts.resource_limited_pairs;
    return j.dump(2);
}

std::string safe_set_to_json(const std::vector<abstraction::StateCell>& cells) {
    json j;
    j["format_version"] = 1;
    j["cells"] = json::array();
    for (const auto& c : cells) {
        json cj;
        cj["region"] = polygon_to_json(c.region);
        json box = json::array();
        for (const auto& iv : c.box) box.push_back(json::array({iv.lo, iv.hi}));
        cj["box"] = std::move(box);
        j["cells"].push_back(std::move(cj));
    }
    return j.dump(2);
}

std::string report_to_json(const ReportData& r) {
    json j;
    j["format_version"] = 1;
    j["fine_regions"] = r.fine_regions;
    j["free_regions"] = r.free_regions;
    j["aggregate_regions"] = r.aggregate_regions;
    j["states"] = r.states;
    j["transitions"] = r.transitions;
    j["resource_limited_pairs"] = r.resource_limited_pairs;
    j["conflicts_per_region"] = r.conflicts_per_region;
    j["feasible_phases_per_region"] = r.feasible_phases_per_region;
    j["unsafe0"] = r.unsafe0;
    j["safe_states"] = r.safe_states;
    j["unsafe_states"] = r.unsafe_states;
    j["times"] = {{"partition_s", r.times.partition_s},
                  {"preprocess_s", r.times.preprocess_s},
                  {"transitions_s", r.times.transitions_s},
                  {"fixed_point_s", r.times.fixed_point_s}};
    return j.dump(2);
}

std::string report_to_text(const ReportData& r) {
    std::ostringstream out;
    out << "regions:            " << r.fine_regions << " (" << r.free_regions
        << " free)\n";
    out << "aggregate regions:  " << r.aggregate_regions << "\n";
    out << "abstract states:    " << r.states << "\n";
    out << "transitions:        " << r.transitions << "\n";
    out << "unsafe at step 0:   " << r.unsafe0 << "\n";
    out << "safe states:        " << r.safe_states << "\n";
    out << "unsafe states:      " << r.unsafe_states << "\n";
    out << "budget-limited:     " << r.resource_limited_pairs << "\n";
    long long conflicts = 0;
    for (int c : r.conflicts_per_region) conflicts += c;
    out << "conflicts learned:  " << conflicts << "\n";
    out << "phase times [s]:    partition " << r.times.partition_s
        << ", preprocess " << r.times.preprocess_s << ", transitions "
        << r.times.transitions_s << ", fixed point " << r.times.fixed_point_s
        << "\n";
    return out.str();
}

DynamicsSpec dynamics_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("dynamics JSON: ") + e.what());
    }
    if (!j.contains("A") || !j.contains("B")) {
        throw ParseError("dynamics JSON: needs \"A\" and \"B\"");
    }
    auto matrix_from = [](const json& mj, const char* name) {
        if (!mj.is_array() || mj.empty()) {
            throw ParseError(std::string("dynamics JSON: ") + name +
                             " must be a non-empty matrix");
        }
        int rows = static_cast<int>(mj.size());
        int cols = static_cast<int>(mj[0].size());
        nn::Matrix m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            if (static_cast<int>(mj[r].size()) != cols) {
                throw ParseError(std::string("dynamics JSON: ragged ") + name);
            }
            for (int c = 0; c < cols; ++c) m.at(r, c) = mj[r][c].get<double>();
        }
        return m;
    };

    DynamicsSpec out;
    out.dynamics.A = matrix_from(j["A"], "A");
    out.dynamics.B = matrix_from(j["B"], "B");
    if (out.dynamics.A.rows != out.dynamics.A.cols) {
        throw ParseError("dynamics JSON: A must be square");
    }
    if (out.dynamics.B.rows != out.dynamics.A.rows) {
        throw ParseError("dynamics JSON: B rows must match A");
    }
    if (out.dynamics.A.rows < 2) {
        throw ParseError("dynamics JSON: state dimension must be >= 2");
    }

    out.bounds.epsilon = 1.0;
    if (j.contains("bounds")) {
        const json& bj = j["bounds"];
        out.bounds.lower = bj.value("lower", std::vector<double>{});
        out.bounds.upper = bj.value("upper", std::vector<double>{});
        out.bounds.epsilon = bj.value("epsilon", 1.0);
    }
    if (static_cast<int>(out.bounds.lower.size()) !=
        out.dynamics.state_dim() - 2) {
        throw ParseError(
            "dynamics JSON: bounds must cover dimensions 3..n");
    }
    out.bounds.validate();
    return out;
}

DynamicsSpec load_dynamics(const std::string& path) {
    return dynamics_from_json_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace nnv::io
