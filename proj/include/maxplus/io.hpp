#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "maxplus/geodesics.hpp"
#include "maxplus/harmonic.hpp"
#include "maxplus/martin.hpp"
#include "maxplus/measures.hpp"
#include "maxplus/metric.hpp"

namespace maxplus::io {

using nlohmann::json;

// -- scalar encoding ---------------------------------------------------------

inline json weight_to_json(double v) {
    if (v == kNegInf) return json("-inf");
    if (std::isinf(v)) return json("+inf");
    return json(v);
}

inline double weight_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "-inf") return kNegInf;
        if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
        throw ParseError("expected a number, \"-inf\" or \"+inf\", got \"" + s + "\"");
    }
    if (!j.is_number()) throw ParseError("expected a numeric value");
    return j.get<double>();
}

// -- kernel ------------------------------------------------------------------

inline json kernel_to_json(const Kernel& a) {
    json j;
    j["states"] = a.states().labels();
    json entries = json::array();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!a.at(i, k).is_neg_inf())
                entries.push_back(json::array(
                    {a.states().label(i), a.states().label(k), json(a.at(i, k).value())}));
    j["entries"] = std::move(entries);
    return j;
}

inline Kernel kernel_from_json(const json& j) {
    if (!j.contains("states") || !j["states"].is_array())
        throw ParseError("kernel: missing \"states\" array");
    Kernel a(make_states(j["states"].get<std::vector<std::string>>()));
    for (const auto& e : j.value("entries", json::array())) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError("kernel: entry must be [i, j, weight]");
        a.set(e[0].get<std::string>(), e[1].get<std::string>(),
              ExtReal(weight_from_json(e[2])));
    }
    return a;
}

// -- vectors -----------------------------------------------------------------

inline json vector_to_json(const MPVector& u) {
    json j = json::object();
    for (std::size_t i = 0; i < u.size(); ++i)
        j[u.states().label(i)] = weight_to_json(u.at(i).value());
    return j;
}

/// Absent states are -inf.
inline MPVector vector_from_json(const json& j, StatesPtr states) {
    if (!j.is_object()) throw ParseError("vector: expected an object");
    MPVector u(std::move(states));
    for (const auto& [label, value] : j.items())
        u.set(label, ExtReal(weight_from_json(value)));
    return u;
}

// -- measures ----------------------------------------------------------------

inline json measure_to_json(const Measure& m) {
    json density = json::object();
    for (const auto& [name, v] : m.density) density[name] = weight_to_json(v);
    return json{{"domain", to_string(m.domain)}, {"density", std::move(density)}};
}

inline Measure measure_from_json(const json& j) {
    Measure m;
    const json& density = j.contains("density") ? j["density"] : j;
    if (!density.is_object()) throw ParseError("measure: expected a density object");
    for (const auto& [name, v] : density.items()) m.density[name] = weight_from_json(v);
    if (j.contains("domain")) {
        const std::string d = j["domain"].get<std::string>();
        if (d == "finite_martin_space") m.domain = Measure::Domain::FiniteMartinSpace;
        else if (d == "boundary_family") m.domain = Measure::Domain::BoundaryFamily;
        else m.domain = Measure::Domain::Union;
    }
    return m;
}

// -- boundary family ---------------------------------------------------------

inline json family_to_json(const BoundaryFamily& f) {
    json points = json::object();
    json reps = json::object();
    for (const auto& p : f.points) {
        json vals = json::array();
        for (double v : p.values) vals.push_back(weight_to_json(v));
        points[p.name] = std::move(vals);
        if (!p.rep_sequence.empty()) reps[p.name] = p.rep_sequence;
    }
    json acc = json::array();
    for (const auto& a : f.accumulation)
        acc.push_back(json{{"sequence", a.sequence}, {"limit", a.limit}});
    return json{{"window", f.window},
                {"points", std::move(points)},
                {"rep_sequences", std::move(reps)},
                {"accumulation", std::move(acc)}};
}

inline BoundaryFamily family_from_json(const json& j) {
    BoundaryFamily f;
    if (!j.contains("window")) throw ParseError("family: missing \"window\"");
    f.window = j["window"].get<std::vector<std::string>>();
    const json points = j.value("points", json::object());
    for (const auto& [name, vals] : points.items()) {
        BoundaryFamily::Point p;
        p.name = name;
        for (const auto& v : vals) p.values.push_back(weight_from_json(v));
        f.points.push_back(std::move(p));
    }
    const json reps = j.value("rep_sequences", json::object());
    for (const auto& [name, seq] : reps.items()) {
        bool found = false;
        for (auto& p : f.points)
            if (p.name == name) {
                p.rep_sequence = seq.get<std::vector<std::string>>();
                found = true;
            }
        if (!found) throw ParseError("family: rep sequence for unknown point " + name);
    }
    for (const auto& a : j.value("accumulation", json::array())) {
        BoundaryFamily::Accumulation acc;
        acc.sequence = a.at("sequence").get<std::vector<std::string>>();
        acc.limit = a.at("limit").get<std::string>();
        f.accumulation.push_back(std::move(acc));
    }
    return f;
}

// -- graphs and nu maps ------------------------------------------------------

inline json graph_to_json(const WeightedGraph& g) {
    json edges = json::array();
    for (const auto& [a, b, w] : g.edges) edges.push_back(json::array({a, b, json(w)}));
    return json{{"nodes", g.nodes}, {"edges", std::move(edges)}};
}

inline WeightedGraph graph_from_json(const json& j) {
    WeightedGraph g;
    if (!j.contains("nodes")) throw ParseError("graph: missing \"nodes\"");
    g.nodes = j["nodes"].get<std::vector<std::string>>();
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError("graph: edge must be [a, b, weight]");
        g.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>(),
                             e[2].get<double>());
    }
    return g;
}

inline json nu_to_json(const std::map<std::string, double>& nu) {
    json j = json::object();
    for (const auto& [name, v] : nu) j[name] = weight_to_json(v);
    return j;
}

inline std::map<std::string, double> nu_from_json(const json& j) {
    std::map<std::string, double> nu;
    for (const auto& [name, v] : j.items()) nu[name] = weight_from_json(v);
    return nu;
}

// -- geodesic certificates -----------------------------------------------------

inline json certificate_to_json(const GeodesicCertificate& c) {
    return json{{"path", c.path},
                {"kind", to_string(c.kind)},
                {"beta", weight_to_json(c.beta)},
                {"reference", c.reference},
                {"checks", json{{"prefix_ok", c.prefix_ok},
                                {"target_point", c.target_point},
                                {"gap", weight_to_json(c.gap)},
                                {"complete", c.complete}}}};
}

// -- busemann families ---------------------------------------------------------

inline json busemann_family_to_json(const BusemannFamily& f, const StateList& states) {
    json points = json::object();
    json rays = json::object();
    for (const auto& p : f.points) {
        json h = json::object();
        for (std::size_t i = 0; i < p.h.size(); ++i)
            h[states.label(i)] = weight_to_json(p.h[i]);
        points[p.name] = std::move(h);
        if (!p.ray.empty()) rays[p.name] = p.ray;
    }
    json acc = json::array();
    for (const auto& a : f.accumulation)
        acc.push_back(json{{"sequence", a.sequence}, {"limit", a.limit}});
    return json{{"points", std::move(points)},
                {"rays", std::move(rays)},
                {"accumulation", std::move(acc)}};
}

inline BusemannFamily busemann_family_from_json(const json& j, const StateList& states) {
    BusemannFamily f;
    const json points = j.value("points", json::object());
    for (const auto& [name, h] : points.items()) {
        BusemannPoint p;
        p.name = name;
        p.h.assign(states.size(), 0.0);
        if (!h.is_object()) throw ParseError("busemann point " + name + ": expected object");
        for (const auto& [label, v] : h.items())
            p.h[states.index_of(label)] = weight_from_json(v);
        f.points.push_back(std::move(p));
    }
    const json rays = j.value("rays", json::object());
    for (const auto& [name, ray] : rays.items())
        for (auto& p : f.points)
            if (p.name == name) p.ray = ray.get<std::vector<std::string>>();
    for (const auto& a : j.value("accumulation", json::array())) {
        BoundaryFamily::Accumulation acc;
        acc.sequence = a.at("sequence").get<std::vector<std::string>>();
        acc.limit = a.at("limit").get<std::string>();
        f.accumulation.push_back(std::move(acc));
    }
    return f;
}

// -- stable serialization ----------------------------------------------------

namespace detail {

inline void format_double(std::string& out, double v) {
    if (v == kNegInf) {
        out += "\"-inf\"";
        return;
    }
    if (std::isinf(v)) {
        out += "\"+inf\"";
        return;
    }
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

inline void dump_stable_rec(std::string& out, const json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(key).dump() + ": ";
                dump_stable_rec(out, value, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_stable_rec(out, value, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            format_double(out, j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

/// Deterministic serialization: sorted keys (the object type is a sorted
/// map), floats with 12 significant digits, infinities as strings.
inline std::string dump_stable(const json& j, int indent = 2) {
    std::string out;
    detail::dump_stable_rec(out, j, indent, 0);
    out += "\n";
    return out;
}

// -- files -------------------------------------------------------------------

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << dump_stable(j);
}

} // namespace maxplus::io
