// Command-line front end: wires file I/O and configuration to the library
// pipelines and emits deterministic JSON reports or plain tables.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "maxplus/maxplus.hpp"

using namespace maxplus;
using nlohmann::json;

namespace {

struct Common {
    double tol = kDefaultTol;
    double margin = 0.0;
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--tol", c.tol, "comparison tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--window-margin", c.margin, "interior margin for window checks");
    cmd->add_option("--output", c.output, "write the report to this file");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
}

std::string fmt(double v) {
    if (v == kNegInf) return "-inf";
    if (std::isinf(v)) return "+inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << std::string(width[c] - row[c].size() + 2, ' ');
        out << "\n";
    };
    line(header);
    std::vector<std::string> rule;
    for (std::size_t w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& row : rows) line(row);
    return out.str();
}

void emit(const Common& c, const json& report, const std::string& table = "") {
    const std::string text =
        (c.format == "table" && !table.empty()) ? table : io::dump_stable(report);
    if (c.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(c.output);
        if (!out) throw Error("cannot write " + c.output);
        out << text;
    }
}

std::vector<std::string> split_labels_or_empty(const std::string& csv);

MartinInstance load_instance(const std::string& kernel_path, const std::string& basepoint,
                             double tol, const std::string& edge_csv = "") {
    return make_martin_instance(io::kernel_from_json(io::load_json(kernel_path)), basepoint,
                                tol, split_labels_or_empty(edge_csv));
}

std::vector<std::string> split_labels(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

std::vector<std::string> split_labels_or_empty(const std::string& csv) {
    return csv.empty() ? std::vector<std::string>{} : split_labels(csv);
}

// ---------------------------------------------------------------------------

int cmd_star(const Common& c, const std::string& kernel_path) {
    const Kernel a = io::kernel_from_json(io::load_json(kernel_path));
    const Closure cl = closure(a, c.tol);
    json report{{"states", a.states().labels()},
                {"aplus", io::kernel_to_json(cl.aplus)},
                {"astar", io::kernel_to_json(cl.astar)}};
    std::ostringstream table;
    table << "closure of " << kernel_path << ": " << a.size() << " states\n";
    emit(c, report, table.str());
    return 0;
}

int cmd_martin(const Common& c, const std::string& kernel_path, const std::string& basepoint) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol);
    const Kernel k = martin_kernel(inst);
    const auto points = finite_martin_space(inst, c.tol);
    json jpoints = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points) {
        std::vector<std::string> witnesses;
        for (std::size_t w : p.witnesses) witnesses.push_back(inst.states().label(w));
        jpoints.push_back(json{{"name", p.name},
                               {"witnesses", witnesses},
                               {"xi", io::vector_to_json(p.xi)}});
        rows.push_back({p.name, std::to_string(p.witnesses.size())});
    }
    emit(c,
         json{{"basepoint", basepoint},
              {"martin_kernel", io::kernel_to_json(k)},
              {"points", std::move(jpoints)}},
         render_table({"point", "witnesses"}, rows));
    return 0;
}

int cmd_minimal_space(const Common& c, const std::string& kernel_path,
                      const std::string& basepoint, const std::string& family_path) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol);
    BoundaryFamily fam;
    const bool has_family = !family_path.empty();
    if (has_family) fam = io::family_from_json(io::load_json(family_path));
    const PointSet ps = build_point_set(inst, has_family ? &fam : nullptr, c.tol);

    json jpoints = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : ps.points) {
        const ExtReal h = h_flat(inst, p, p, c.tol);
        const bool minimal = h.finite() && std::abs(h.value()) <= c.tol;
        jpoints.push_back(json{{"name", p.name},
                               {"hflat", io::weight_to_json(h.value())},
                               {"minimal", minimal}});
        rows.push_back({p.name, fmt(h.value()), minimal ? "yes" : "no"});
    }
    emit(c, json{{"points", std::move(jpoints)}},
         render_table({"point", "hflat", "minimal"}, rows));
    return 0;
}

json measures_report(const MeasuresResult& r) {
    json per_point = json::object();
    for (std::size_t p = 0; p < r.order.size(); ++p) {
        const auto& pt = r.order.points.points[p];
        std::vector<std::string> doms;
        for (std::size_t d : r.order.dominators[p])
            doms.push_back(r.order.points.points[d].name);
        per_point[pt.name] = json{{"mumax", io::weight_to_json(r.order.mumax[p])},
                                  {"m_u", io::weight_to_json(r.m.at(pt.name).value())},
                                  {"mumin", io::weight_to_json(r.mumin.at(pt.name).value())},
                                  {"maximal", bool(r.order.maximal[p])},
                                  {"dominators", doms}};
    }
    return json{{"points", std::move(per_point)},
                {"superharmonic", r.superharmonic_report.verdict},
                {"harmonic", r.u_harmonic},
                {"represents",
                 json{{"mumax", r.rep_mumax.verdict}, {"mumin", r.rep_mumin.verdict}}}};
}

int cmd_measures(const Common& c, const std::string& kernel_path,
                 const std::string& basepoint, const std::string& u_path,
                 const std::string& family_path, const std::string& edge_csv) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol, edge_csv);
    const MPVector u = io::vector_from_json(io::load_json(u_path), inst.a.states_ptr());
    BoundaryFamily fam;
    const bool has_family = !family_path.empty();
    if (has_family) fam = io::family_from_json(io::load_json(family_path));

    MeasuresResult r;
    try {
        r = mu_min(inst, u, has_family ? &fam : nullptr, c.tol);
    } catch (const NotSuperharmonicError& e) {
        const ResidualReport sh = is_superharmonic(inst, u, c.tol);
        emit(c, json{{"error", "not_superharmonic"},
                     {"worst_state", e.worst_state},
                     {"residuals", io::vector_to_json(sh.residuals)}});
        return 2;
    }

    std::vector<std::vector<std::string>> rows;
    for (std::size_t p = 0; p < r.order.size(); ++p) {
        const auto& pt = r.order.points.points[p];
        rows.push_back({pt.name, fmt(r.order.mumax[p]), fmt(r.m.at(pt.name).value()),
                        fmt(r.mumin.at(pt.name).value()),
                        r.order.maximal[p] ? "yes" : "no"});
    }
    emit(c, measures_report(r),
         render_table({"point", "mumax", "m_u", "mumin", "maximal"}, rows));
    return (r.rep_mumax.verdict && r.rep_mumin.verdict) ? 0 : 1;
}

int cmd_represent(const Common& c, const std::string& kernel_path,
                  const std::string& basepoint, const std::string& u_path,
                  const std::string& measure_path, const std::string& family_path) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol);
    const MPVector u = io::vector_from_json(io::load_json(u_path), inst.a.states_ptr());
    const Measure mu = io::measure_from_json(io::load_json(measure_path));
    BoundaryFamily fam;
    const bool has_family = !family_path.empty();
    if (has_family) fam = io::family_from_json(io::load_json(family_path));
    const PointSet ps = build_point_set(inst, has_family ? &fam : nullptr, c.tol);
    const RepresentsReport rep = represents(ps, mu, u, c.tol);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < rep.residuals.size(); ++i)
        rows.push_back({rep.residuals.states().label(i), fmt(rep.residuals.at(i).value()),
                        rep.argmax[i]});
    emit(c,
         json{{"verdict", rep.verdict},
              {"residuals", io::vector_to_json(rep.residuals)},
              {"worst_state", rep.worst_state}},
         render_table({"state", "residual", "argmax"}, rows));
    return rep.verdict ? 0 : 1;
}

int cmd_geodesic_certify(const Common& c, const std::string& kernel_path,
                         const std::string& basepoint, const std::string& path_csv,
                         const std::string& u_path, const std::string& kind) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol);
    const std::vector<std::string> path = split_labels(path_csv);
    GeodesicCertificate cert;
    cert.path = path;
    cert.reference = kind == "u" ? "u" : basepoint;
    if (kind == "u") {
        if (u_path.empty()) throw Error("--u is required for the u-relative kind");
        const MPVector u = io::vector_from_json(io::load_json(u_path), inst.a.states_ptr());
        cert.kind = GeodesicKind::URelative;
        cert.beta = min_parameter_u(inst.a, u, path).value();
    } else {
        cert.kind = GeodesicKind::Kernel;
        cert.beta = min_parameter_kernel(inst, path).value();
    }
    emit(c, io::certificate_to_json(cert),
         "kind " + to_string(cert.kind) + "  beta " + fmt(cert.beta) + "\n");
    return 0;
}

int cmd_geodesic_rebase(const Common& c, const std::string& kernel_path,
                        const std::string& basepoint, const std::string& path_csv,
                        const std::string& new_base) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol);
    const std::vector<std::string> path = split_labels(path_csv);
    const ExtReal beta = min_parameter_kernel(inst, path);
    const ExtReal transported = rebase(inst, path, beta, new_base);
    const MartinInstance at_new = make_martin_instance(inst.a, new_base, c.tol);
    const ExtReal recomputed = min_parameter_kernel(at_new, path);
    const bool bound_ok = recomputed.value() <= transported.value() + c.tol;
    emit(c, json{{"beta", io::weight_to_json(beta.value())},
                 {"transported", io::weight_to_json(transported.value())},
                 {"min_at_new_base", io::weight_to_json(recomputed.value())},
                 {"bound_ok", bound_ok}});
    return bound_ok ? 0 : 1;
}

int cmd_geodesic_witness(const Common& c, const std::string& kernel_path,
                         const std::string& basepoint, const std::string& u_path,
                         const std::string& start, double delta0, double eps0,
                         std::size_t horizon, const std::string& edge_csv) {
    const MartinInstance inst = load_instance(kernel_path, basepoint, c.tol, edge_csv);
    const MPVector u = io::vector_from_json(io::load_json(u_path), inst.a.states_ptr());
    const GeodesicCertificate cert = witness_geodesic(
        inst, u, start, delta0, eps0 > 0 ? eps0 : delta0, horizon, {}, c.tol);
    emit(c, io::certificate_to_json(cert),
         "beta " + fmt(cert.beta) + "  gap " + fmt(cert.gap) + "  target " +
             cert.target_point + (cert.complete ? "" : "  (horizon exhausted)") + "\n");
    return cert.prefix_ok ? 0 : 1;
}

MetricInstance load_metric(const std::string& graph_path, const std::string& basepoint,
                           const std::string& truncation_csv) {
    const WeightedGraph g = io::graph_from_json(io::load_json(graph_path));
    return graph_metric(g, basepoint,
                        truncation_csv.empty() ? std::vector<std::string>{}
                                               : split_labels(truncation_csv));
}

std::vector<double> load_metric_f(const MetricInstance& m, const std::string& f_path) {
    const MPVector v = io::vector_from_json(io::load_json(f_path), m.states);
    std::vector<double> f(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (v.at(i).is_neg_inf()) throw ParseError("f must be real-valued on the window");
        f[i] = v.at(i).value();
    }
    return f;
}

int cmd_metric_distance_like(const Common& c, const std::string& graph_path,
                             const std::string& basepoint, const std::string& f_path,
                             const std::string& truncation_csv,
                             const std::string& tgrid_csv) {
    const MetricInstance m = load_metric(graph_path, basepoint, truncation_csv);
    const std::vector<double> f = load_metric_f(m, f_path);
    std::vector<double> grid;
    if (!tgrid_csv.empty())
        for (const auto& s : split_labels(tgrid_csv)) grid.push_back(std::stod(s));
    const DistanceLikeReport rep = is_distance_like(m, f, grid, c.tol, c.margin);
    json violations = json::array();
    for (const auto& v : rep.violations)
        violations.push_back(json{{"x", v.x},
                                  {"t", v.t},
                                  {"level_min", io::weight_to_json(v.level_min)},
                                  {"expected", v.expected}});
    std::ostringstream table;
    table << "distance-like: " << (rep.verdict ? "yes" : "NO") << "  checked "
          << rep.pairs_checked << "  skipped " << rep.pairs_skipped << "  empty "
          << rep.empty_level_sets << "\n";
    emit(c,
         json{{"verdict", rep.verdict},
              {"pairs_checked", rep.pairs_checked},
              {"pairs_skipped", rep.pairs_skipped},
              {"empty_level_sets", rep.empty_level_sets},
              {"violations", std::move(violations)}},
         table.str());
    return rep.verdict ? 0 : 1;
}

int cmd_metric_horolimit(const Common& c, const std::string& graph_path,
                         const std::string& basepoint, const std::string& seq_csv,
                         const std::string& truncation_csv) {
    const MetricInstance m = load_metric(graph_path, basepoint, truncation_csv);
    const HorofunctionWindow h = horofunction_limit(m, split_labels(seq_csv), c.tol);
    json values = json::object();
    for (std::size_t pos : h.active)
        values[m.states->label(pos)] = io::weight_to_json(h.h[pos]);
    emit(c, json{{"h", std::move(values)}, {"dropped", h.dropped}});
    return 0;
}

int cmd_metric_rieffel(const Common& c, const std::string& graph_path,
                       const std::string& basepoint, const std::string& gamma_csv,
                       const std::string& times_csv, double eps,
                       const std::string& truncation_csv) {
    const MetricInstance m = load_metric(graph_path, basepoint, truncation_csv);
    std::vector<double> times;
    for (const auto& s : split_labels(times_csv)) times.push_back(std::stod(s));
    const RieffelReport rep = rieffel_check(m, split_labels(gamma_csv), times, eps);
    emit(c, json{{"ok", rep.ok},
                 {"threshold", io::weight_to_json(rep.threshold)},
                 {"pairs_checked", rep.pairs_checked}});
    return rep.ok ? 0 : 1;
}

int cmd_metric_represent(const Common& c, const std::string& graph_path,
                         const std::string& basepoint, const std::string& f_path,
                         const std::string& points_path, const std::string& nu_path,
                         const std::string& truncation_csv) {
    const MetricInstance m = load_metric(graph_path, basepoint, truncation_csv);
    const std::vector<double> f = load_metric_f(m, f_path);
    const BusemannFamily fam =
        io::busemann_family_from_json(io::load_json(points_path), *m.states);
    const std::map<std::string, double> nu = io::nu_from_json(io::load_json(nu_path));
    std::vector<std::pair<std::string, std::vector<double>>> pts;
    for (const auto& p : fam.points) pts.emplace_back(p.name, p.h);
    const InfRepReport rep = inf_representation_check(m, f, pts, nu, c.tol);
    json residuals = json::object();
    for (std::size_t i = 0; i < rep.residuals.size(); ++i)
        residuals[rep.active_labels[i]] = io::weight_to_json(rep.residuals[i]);
    emit(c, json{{"verdict", rep.verdict},
                 {"residuals", std::move(residuals)},
                 {"worst_state", rep.worst_state}});
    return rep.verdict ? 0 : 1;
}

int cmd_metric_greatest_nu(const Common& c, const std::string& graph_path,
                           const std::string& basepoint, const std::string& f_path,
                           const std::string& family_path,
                           const std::string& truncation_csv) {
    const MetricInstance m = load_metric(graph_path, basepoint, truncation_csv);
    const std::vector<double> f = load_metric_f(m, f_path);
    const BusemannFamily fam =
        io::busemann_family_from_json(io::load_json(family_path), *m.states);
    const GreatestNuResult res = greatest_nu(m, f, fam, c.tol, c.margin);

    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, v] : res.nu) rows.push_back({name, fmt(v)});
    emit(c,
         json{{"nu", io::nu_to_json(res.nu)},
              {"representation_ok", res.representation.verdict},
              {"window_distance_like", res.distance_like.verdict}},
         render_table({"point", "nu"}, rows));
    return res.representation.verdict ? 0 : 1;
}

void write_instance_files(const std::string& dir, const MartinInstance& inst,
                          const MPVector& u, const BoundaryFamily& fam) {
    io::save_json(dir + "/kernel.json", io::kernel_to_json(inst.a));
    io::save_json(dir + "/u.json", io::vector_to_json(u));
    io::save_json(dir + "/family.json", io::family_to_json(fam));
    std::vector<std::string> edges;
    for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.is_edge(i)) edges.push_back(inst.states().label(i));
    std::sort(edges.begin(), edges.end());
    io::save_json(dir + "/manifest.json",
                  json{{"basepoint", inst.basepoint_label()}, {"edge_states", edges}});
}

void write_metric_files(const std::string& dir, const corpus::MetricTemplate& tpl) {
    io::save_json(dir + "/graph.json", io::graph_to_json(tpl.graph));
    io::save_json(dir + "/kernel.json", io::kernel_to_json(to_kernel(tpl.metric)));
    io::save_json(dir + "/busemann.json",
                  io::busemann_family_to_json(tpl.busemann, *tpl.metric.states));
    json rays = json::object();
    for (const auto& r : tpl.rays) rays[r.name] = r.states;
    std::vector<std::string> trunc;
    for (std::size_t s : tpl.metric.truncation_states)
        trunc.push_back(tpl.metric.states->label(s));
    std::sort(trunc.begin(), trunc.end());
    io::save_json(dir + "/manifest.json",
                  json{{"basepoint", tpl.metric.basepoint_label()},
                       {"rays", std::move(rays)},
                       {"truncation_states", trunc}});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"max-plus potential theory toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string kernel_path, basepoint, u_path, family_path, measure_path, edge_csv;
    std::string path_csv, new_base, start, kind = "kernel";
    std::string graph_path, f_path, seq_csv, gamma_csv, times_csv, truncation_csv;
    std::string points_path, nu_path;
    double delta0 = 0.5, eps0 = 0.0, eps = 0.1;
    std::size_t horizon = 100;

    int rc = 0;
    auto run = [&rc](auto fn) {
        return [&rc, fn]() { rc = fn(); };
    };

    auto* star = app.add_subcommand("star", "Kleene closures A+ and A* of a kernel");
    star->add_option("--kernel", kernel_path, "kernel JSON file")->required();
    add_common(star, c);
    star->callback(run([&] { return cmd_star(c, kernel_path); }));

    auto* martin = app.add_subcommand("martin", "Martin kernel and finite Martin space");
    martin->add_option("--kernel", kernel_path)->required();
    martin->add_option("--basepoint", basepoint)->required();
    add_common(martin, c);
    martin->callback(run([&] { return cmd_martin(c, kernel_path, basepoint); }));

    auto* mspace = app.add_subcommand("minimal-space", "H-flat diagnostics per point");
    mspace->add_option("--kernel", kernel_path)->required();
    mspace->add_option("--basepoint", basepoint)->required();
    mspace->add_option("--family", family_path, "boundary family JSON file");
    add_common(mspace, c);
    mspace->callback(
        run([&] { return cmd_minimal_space(c, kernel_path, basepoint, family_path); }));

    auto* meas = app.add_subcommand("measures", "mu_max / m_u / mu_min pipeline");
    meas->add_option("--kernel", kernel_path)->required();
    meas->add_option("--basepoint", basepoint)->required();
    meas->add_option("--u", u_path, "vector JSON file")->required();
    meas->add_option("--family", family_path);
    meas->add_option("--edge-states", edge_csv, "window-truncated states to skip");
    add_common(meas, c);
    meas->callback(run([&] {
        return cmd_measures(c, kernel_path, basepoint, u_path, family_path, edge_csv);
    }));

    auto* rep = app.add_subcommand("represent", "check that a measure represents a vector");
    rep->add_option("--kernel", kernel_path)->required();
    rep->add_option("--basepoint", basepoint)->required();
    rep->add_option("--u", u_path)->required();
    rep->add_option("--measure", measure_path)->required();
    rep->add_option("--family", family_path);
    add_common(rep, c);
    rep->callback(run([&] {
        return cmd_represent(c, kernel_path, basepoint, u_path, measure_path, family_path);
    }));

    auto* geo = app.add_subcommand("geodesic", "almost-geodesic certification");
    geo->require_subcommand(1);
    auto* certify = geo->add_subcommand("certify", "minimal parameter of a path");
    certify->add_option("--kernel", kernel_path)->required();
    certify->add_option("--basepoint", basepoint)->required();
    certify->add_option("--path", path_csv, "comma-separated state labels")->required();
    certify->add_option("--kind", kind)->check(CLI::IsMember({"kernel", "u"}));
    certify->add_option("--u", u_path);
    add_common(certify, c);
    certify->callback(run([&] {
        return cmd_geodesic_certify(c, kernel_path, basepoint, path_csv, u_path, kind);
    }));

    auto* reb = geo->add_subcommand("rebase", "transport a parameter to a new basepoint");
    reb->add_option("--kernel", kernel_path)->required();
    reb->add_option("--basepoint", basepoint)->required();
    reb->add_option("--path", path_csv)->required();
    reb->add_option("--new-base", new_base)->required();
    add_common(reb, c);
    reb->callback(run(
        [&] { return cmd_geodesic_rebase(c, kernel_path, basepoint, path_csv, new_base); }));

    auto* wit = geo->add_subcommand("witness", "construct a witness almost-geodesic");
    wit->add_option("--kernel", kernel_path)->required();
    wit->add_option("--basepoint", basepoint)->required();
    wit->add_option("--u", u_path)->required();
    wit->add_option("--start", start)->required();
    wit->add_option("--delta0", delta0)->check(CLI::PositiveNumber);
    wit->add_option("--eps0", eps0);
    wit->add_option("--horizon", horizon);
    wit->add_option("--edge-states", edge_csv, "window-truncated states to skip");
    add_common(wit, c);
    wit->callback(run([&] {
        return cmd_geodesic_witness(c, kernel_path, basepoint, u_path, start, delta0, eps0,
                                    horizon, edge_csv);
    }));

    auto* metric = app.add_subcommand("metric", "metric-boundary checks");
    metric->require_subcommand(1);
    auto* dlike = metric->add_subcommand("distance-like", "window distance-like check");
    dlike->add_option("--graph", graph_path)->required();
    dlike->add_option("--basepoint", basepoint)->required();
    dlike->add_option("--f", f_path, "vector JSON file")->required();
    dlike->add_option("--truncation", truncation_csv, "comma-separated truncation states");
    dlike->add_option("--t-grid", times_csv, "comma-separated grid values");
    add_common(dlike, c);
    dlike->callback(run([&] {
        return cmd_metric_distance_like(c, graph_path, basepoint, f_path, truncation_csv,
                                        times_csv);
    }));

    auto* horo = metric->add_subcommand("horolimit", "stabilized horofunction limit");
    horo->add_option("--graph", graph_path)->required();
    horo->add_option("--basepoint", basepoint)->required();
    horo->add_option("--sequence", seq_csv, "comma-separated state labels")->required();
    horo->add_option("--truncation", truncation_csv);
    add_common(horo, c);
    horo->callback(run([&] {
        return cmd_metric_horolimit(c, graph_path, basepoint, seq_csv, truncation_csv);
    }));

    auto* rie = metric->add_subcommand("rieffel", "almost-geodesic test for a sampled path");
    rie->add_option("--graph", graph_path)->required();
    rie->add_option("--basepoint", basepoint)->required();
    rie->add_option("--gamma", gamma_csv, "comma-separated state labels")->required();
    rie->add_option("--times", times_csv, "comma-separated parameters")->required();
    rie->add_option("--eps", eps)->required();
    rie->add_option("--truncation", truncation_csv);
    add_common(rie, c);
    rie->callback(run([&] {
        return cmd_metric_rieffel(c, graph_path, basepoint, gamma_csv, times_csv, eps,
                                  truncation_csv);
    }));

    auto* mrep = metric->add_subcommand("represent", "inf-representation check");
    mrep->add_option("--graph", graph_path)->required();
    mrep->add_option("--basepoint", basepoint)->required();
    mrep->add_option("--f", f_path)->required();
    mrep->add_option("--points", points_path, "busemann points JSON file")->required();
    mrep->add_option("--nu", nu_path, "nu JSON file")->required();
    mrep->add_option("--truncation", truncation_csv);
    add_common(mrep, c);
    mrep->callback(run([&] {
        return cmd_metric_represent(c, graph_path, basepoint, f_path, points_path, nu_path,
                                    truncation_csv);
    }));

    auto* gnu = metric->add_subcommand("greatest-nu", "greatest representing nu over a family");
    gnu->add_option("--graph", graph_path)->required();
    gnu->add_option("--basepoint", basepoint)->required();
    gnu->add_option("--f", f_path)->required();
    gnu->add_option("--family", family_path, "busemann family JSON file")->required();
    gnu->add_option("--truncation", truncation_csv);
    add_common(gnu, c);
    gnu->callback(run([&] {
        return cmd_metric_greatest_nu(c, graph_path, basepoint, f_path, family_path,
                                      truncation_csv);
    }));

    auto* corpus_cmd = app.add_subcommand("corpus", "bundled example generators");
    corpus_cmd->require_subcommand(1);
    auto* exp = corpus_cmd->add_subcommand("export", "write an example to JSON files");
    std::string name, dir = ".";
    int px = 40, py = 40, pn = 25, pj = 100, size = 100, arms = 3;
    exp->add_option("name", name,
                    "example1 | example2 | half_line | z_line | star_tree | grid")
        ->required();
    exp->add_option("--dir", dir, "output directory");
    exp->add_option("--x", px);
    exp->add_option("--y", py);
    exp->add_option("--n", pn);
    exp->add_option("--j", pj);
    exp->add_option("--size", size);
    exp->add_option("--arms", arms);
    add_common(exp, c);
    exp->callback(run([&] {
        if (name == "example1") {
            const auto ex = corpus::example1(px, py, pn, c.tol);
            write_instance_files(dir, ex.inst, ex.u, ex.family);
        } else if (name == "example2") {
            const auto ex = corpus::example2(pj, c.tol);
            write_instance_files(dir, ex.inst, ex.u, ex.family);
        } else if (name == "star_tree") {
            write_metric_files(dir, corpus::metric_template(name, arms, size));
        } else if (name == "grid") {
            write_metric_files(dir, corpus::metric_template(name, px, py));
        } else {
            write_metric_files(dir, corpus::metric_template(name, size));
        }
        return 0;
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const DivergentStarError& e) {
        std::cerr << io::dump_stable(
            json{{"error", "divergent_star"}, {"witness_cycle", e.cycle}});
        return 2;
    } catch (const std::exception& e) {
        std::cerr << io::dump_stable(json{{"error", e.what()}});
        return 2;
    }
    return rc;
}
