#pragma once

// JSON serialization for matrices, coordinates, and report structures.

#include "gslice/flows.hpp"

#include <json.hpp>

namespace gslice {

using nlohmann::json;

inline json to_json(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    json re = json::array(), im = json::array();
    for (int i = 0; i < n; ++i) {
        json rrow = json::array(), irow = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    return {{"n", n}, {"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
        throw std::invalid_argument("matrix_from_json: row count mismatch");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n)
            throw std::invalid_argument("matrix_from_json: column count mismatch");
        for (int k = 0; k < n; ++k)
            m(i, k) = Cplx(re[i][k].get<double>(), im[i][k].get<double>());
    }
    return m;
}

/// Coordinate vectors serialize as arrays of [re, im] pairs.
inline json to_json(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
}

inline Vector vector_from_json(const json& j) {
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<int>(i)) = Cplx(j[i][0].get<double>(), j[i][1].get<double>());
    return v;
}

inline json to_json(const FiberReport& r) {
    json cj = json::array();
    for (const auto& v : r.centralizer.vectors) cj.push_back(to_json(v));
    json out = {{"base", to_json(r.base)},
                {"tilde_x", to_json(r.tilde_x)},
                {"centralizer", cj},
                {"centralizer_tol", r.centralizer.tol_used},
                {"fiber_dim", r.fiber_dim},
                {"kind", to_string(r.kind)},
                {"isotropy_residual", r.isotropy}};
    if (r.component_count_theoretical)
        out["component_count_theoretical"] = *r.component_count_theoretical;
    else
        out["component_count_theoretical"] = "unknown";
    return out;
}

inline json to_json(const AisCertificate& c) {
    return {{"phase_dim", c.phase_dim},
            {"expected_dim", c.expected_dim},
            {"dim_ok", c.dim_ok},
            {"samples", c.samples},
            {"regular_failures", c.regular_failures},
            {"pass", c.pass()}};
}

/// Manifest of a built system: enough to rebuild it deterministically.
inline json system_manifest(const IntegrableSystem& sys) {
    json out = {{"kind", to_string(sys.kind)},
                {"count", sys.observables.size()},
                {"declared_rank", sys.declared_rank}};
    if (sys.shift) out["beta"] = to_json(*sys.shift);
    if (!sys.selected_coords.empty()) out["selected_coords"] = sys.selected_coords;
    json names = json::array();
    for (const auto& o : sys.observables) names.push_back(o.name);
    out["observables"] = names;
    return out;
}

inline json to_json(const IndependenceReport& r) {
    return {{"point_count", r.point_count},
            {"function_count", r.function_count},
            {"ranks", r.ranks},
            {"min_singular_values", r.min_sv},
            {"full_rank_points", r.full_rank_points},
            {"full_rank_fraction", r.full_rank_fraction()}};
}

/// One trajectory state per JSON line, plus a drift summary.
inline std::string trajectory_jsonl(const Trajectory& traj) {
    std::string out;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        json line = {{"t", traj.times[i]},
                     {"g", to_json(traj.states[i].g)},
                     {"x_coords", to_json(traj.states[i].x_coords)}};
        out += line.dump() + "\n";
    }
    return out;
}

/// CSV of observable values against time, for external plotting.
inline std::string trajectory_csv(const Trajectory& traj,
                                  const std::vector<Observable>& observables) {
    std::string out = "t";
    for (const auto& o : observables) out += "," + o.name + "_re," + o.name + "_im";
    out += "\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        out += std::to_string(traj.times[i]);
        for (const auto& o : observables) {
            const Cplx v = o.value(traj.states[i]);
            out += "," + std::to_string(v.real()) + "," + std::to_string(v.imag());
        }
        out += "\n";
    }
    return out;
}

}  // namespace gslice
