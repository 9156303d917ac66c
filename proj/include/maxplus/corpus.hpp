#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "maxplus/martin.hpp"
#include "maxplus/metric.hpp"

namespace maxplus::corpus {

/// First worked example: the quarter-plane with vertical moves everywhere
/// and horizontal moves on the two bottom rows, all of weight -1. The
/// boundary family holds the columns' limits a^n together with the two row
/// limits b^0 and b^1; the a^n accumulate at b^1.
struct Example1 {
    MartinInstance inst;
    MPVector u;
    BoundaryFamily family;

    Example1(MartinInstance i, MPVector v, BoundaryFamily f)
        : inst(std::move(i)), u(std::move(v)), family(std::move(f)) {}
};

inline std::string grid_label(int x, int y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

inline Example1 example1(int X, int Y, int N, double tol = kDefaultTol) {
    if (N < 0 || X < N + 2 || Y < 3)
        throw Error("example1: need X >= N + 2 and Y >= 3");

    std::vector<std::string> labels;
    labels.reserve((X + 1) * (Y + 1));
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y) labels.push_back(grid_label(x, y));
    StatesPtr states = make_states(labels);
    auto id = [&](int x, int y) { return static_cast<std::size_t>(x * (Y + 1) + y); };

    Kernel a(states);
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y) {
            if (y + 1 <= Y) {
                a.set(id(x, y), id(x, y + 1), ExtReal(-1.0));
                a.set(id(x, y + 1), id(x, y), ExtReal(-1.0));
            }
            if ((y == 0 || y == 1) && x + 1 <= X) {
                a.set(id(x, y), id(x + 1, y), ExtReal(-1.0));
                a.set(id(x + 1, y), id(x, y), ExtReal(-1.0));
            }
        }

    std::vector<std::string> edges;
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y)
            if (x == X || y == Y) edges.push_back(grid_label(x, y));

    MartinInstance inst = make_martin_instance(std::move(a), grid_label(0, 0), tol, edges);

    MPVector u(states);
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y)
            u.set(id(x, y), ExtReal(y <= 1 ? double(x - y) : double(x + y - 4)));

    BoundaryFamily fam;
    fam.window = labels;
    for (int n = 0; n <= N; ++n) {
        BoundaryFamily::Point p;
        p.name = "a^" + std::to_string(n);
        p.values.resize(labels.size());
        for (int x = 0; x <= X; ++x)
            for (int y = 0; y <= Y; ++y) {
                const int dxn = (x == n) ? 1 : 0;
                const int dy0 = (y == 0) ? 1 : 0;
                p.values[id(x, y)] = -std::abs(x - n) + (2 * dxn - 1) * std::abs(y - 1) -
                                     2 * dxn * dy0 + n + 1;
            }
        for (int m = 1; m <= Y; ++m) p.rep_sequence.push_back(grid_label(n, m));
        fam.points.push_back(std::move(p));
    }
    {
        BoundaryFamily::Point b0;
        b0.name = "b^0";
        b0.values.resize(labels.size());
        for (int x = 0; x <= X; ++x)
            for (int y = 0; y <= Y; ++y) b0.values[id(x, y)] = double(x - y);
        for (int m = 1; m <= X; ++m) b0.rep_sequence.push_back(grid_label(m, 0));
        fam.points.push_back(std::move(b0));

        BoundaryFamily::Point b1;
        b1.name = "b^1";
        b1.values.resize(labels.size());
        for (int x = 0; x <= X; ++x)
            for (int y = 0; y <= Y; ++y) b1.values[id(x, y)] = double(x - std::abs(y - 1) + 1);
        for (int m = 1; m <= X; ++m) b1.rep_sequence.push_back(grid_label(m, 1));
        fam.points.push_back(std::move(b1));
    }
    BoundaryFamily::Accumulation acc;
    for (int n = 0; n <= N; ++n) acc.sequence.push_back("a^" + std::to_string(n));
    acc.limit = "b^1";
    fam.accumulation.push_back(std::move(acc));

    return Example1(std::move(inst), std::move(u), std::move(fam));
}

/// Second worked example: states {1, ..., J} plus "inf", downward moves
/// j <= i of weight 1/i - 1/j, the edge 1 -> inf of weight -1, and edges
/// inf -> j of weight -1/j. Basepoint "inf"; u = 0 is harmonic away from
/// the truncated basepoint row.
struct Example2 {
    MartinInstance inst;
    MPVector u;
    BoundaryFamily family;

    Example2(MartinInstance i, MPVector v, BoundaryFamily f)
        : inst(std::move(i)), u(std::move(v)), family(std::move(f)) {}
};

inline Example2 example2(int J, double tol = kDefaultTol) {
    if (J < 3) throw Error("example2: need J >= 3");
    std::vector<std::string> labels;
    for (int i = 1; i <= J; ++i) labels.push_back(std::to_string(i));
    labels.push_back("inf");
    StatesPtr states = make_states(labels);
    const std::size_t inf_idx = static_cast<std::size_t>(J);

    Kernel a(states);
    for (int i = 1; i <= J; ++i)
        for (int j = 1; j <= i; ++j)
            a.set(i - 1, j - 1, ExtReal(1.0 / i - 1.0 / j));
    a.set(0, inf_idx, ExtReal(-1.0)); // 1 -> inf
    for (int j = 1; j <= J; ++j)      // inf -> j: the j <= i branch with 1/inf = 0
        a.set(inf_idx, j - 1, ExtReal(-1.0 / j));

    MartinInstance inst =
        make_martin_instance(std::move(a), "inf", tol, std::vector<std::string>{"inf"});

    MPVector u = MPVector::constant(states, ExtReal(0.0));

    BoundaryFamily fam;
    fam.window = labels;
    auto column = [&](int j) {
        BoundaryFamily::Point p;
        p.values.resize(labels.size());
        for (int i = 1; i <= J; ++i)
            p.values[i - 1] = (j != 0 && j <= i) ? 1.0 / i : 1.0 / i - 2.0;
        p.values[inf_idx] = 0.0;
        return p;
    };
    for (int j = 1; j <= J; ++j) {
        BoundaryFamily::Point p = column(j);
        p.name = "K_" + std::to_string(j);
        p.rep_sequence = {std::to_string(j)};
        fam.points.push_back(std::move(p));
    }
    {
        BoundaryFamily::Point p = column(0); // j = inf: the "otherwise" branch
        p.values[inf_idx] = 0.0;
        p.name = "K_inf";
        p.rep_sequence = {"inf"};
        fam.points.push_back(std::move(p));
    }
    BoundaryFamily::Accumulation acc;
    for (int j = 1; j <= J; ++j) acc.sequence.push_back("K_" + std::to_string(j));
    acc.limit = "K_inf";
    fam.accumulation.push_back(std::move(acc));

    return Example2(std::move(inst), std::move(u), std::move(fam));
}

// ---------------------------------------------------------------------------
// Metric templates: desk-scale proper geodesic spaces with known rays.

struct Ray {
    std::string name;
    std::vector<std::string> states;
};

struct MetricTemplate {
    WeightedGraph graph;
    MetricInstance metric;
    std::vector<Ray> rays;
    BusemannFamily busemann; // closed-form horofunctions, one per ray
};

namespace detail {

inline MetricTemplate half_line(int n) {
    MetricTemplate t;
    for (int i = 0; i <= n; ++i) t.graph.nodes.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i)
        t.graph.edges.emplace_back(std::to_string(i), std::to_string(i + 1), 1.0);
    t.metric = graph_metric(t.graph, "0", {std::to_string(n)});
    Ray r{"plus", {}};
    for (int i = 0; i <= n; ++i) r.states.push_back(std::to_string(i));
    t.rays.push_back(r);
    BusemannPoint h{"h_plus", std::vector<double>(n + 1), r.states};
    for (int i = 0; i <= n; ++i) h.h[i] = -double(i);
    t.busemann.points.push_back(std::move(h));
    return t;
}

inline MetricTemplate z_line(int n) {
    MetricTemplate t;
    for (int i = -n; i <= n; ++i) t.graph.nodes.push_back(std::to_string(i));
    for (int i = -n; i < n; ++i)
        t.graph.edges.emplace_back(std::to_string(i), std::to_string(i + 1), 1.0);
    t.metric = graph_metric(t.graph, "0", {std::to_string(-n), std::to_string(n)});
    auto pos = [&](int i) { return static_cast<std::size_t>(i + n); };
    Ray plus{"plus", {}}, minus{"minus", {}};
    for (int i = 0; i <= n; ++i) plus.states.push_back(std::to_string(i));
    for (int i = 0; i >= -n; --i) minus.states.push_back(std::to_string(i));
    t.rays = {plus, minus};
    BusemannPoint hp{"h_plus", std::vector<double>(2 * n + 1), plus.states};
    BusemannPoint hm{"h_minus", std::vector<double>(2 * n + 1), minus.states};
    for (int i = -n; i <= n; ++i) {
        hp.h[pos(i)] = -double(i);
        hm.h[pos(i)] = double(i);
    }
    t.busemann.points.push_back(std::move(hp));
    t.busemann.points.push_back(std::move(hm));
    return t;
}

inline MetricTemplate star_tree(int arms, int n) {
    if (arms < 2) throw Error("star_tree: need at least 2 arms");
    MetricTemplate t;
    auto node = [](int arm, int depth) {
        return "a" + std::to_string(arm) + "_" + std::to_string(depth);
    };
    t.graph.nodes.push_back("c");
    for (int k = 1; k <= arms; ++k)
        for (int d = 1; d <= n; ++d) t.graph.nodes.push_back(node(k, d));
    for (int k = 1; k <= arms; ++k) {
        t.graph.edges.emplace_back("c", node(k, 1), 1.0);
        for (int d = 1; d < n; ++d)
            t.graph.edges.emplace_back(node(k, d), node(k, d + 1), 1.0);
    }
    std::vector<std::string> tips;
    for (int k = 1; k <= arms; ++k) tips.push_back(node(k, n));
    t.metric = graph_metric(t.graph, "c", tips);

    for (int k = 1; k <= arms; ++k) {
        Ray r{"arm" + std::to_string(k), {"c"}};
        for (int d = 1; d <= n; ++d) r.states.push_back(node(k, d));
        BusemannPoint h{"h_arm" + std::to_string(k),
                        std::vector<double>(t.graph.nodes.size()), r.states};
        for (std::size_t s = 0; s < t.graph.nodes.size(); ++s) {
            const double dc = t.metric.at(s, t.metric.states->index_of("c"));
            const double dk = t.metric.at(s, t.metric.states->index_of(node(k, n)));
            // On arm k: h = -depth; elsewhere: h = +depth; both equal
            // d(., c) adjusted by whether the state lies on the ray.
            h.h[s] = (dk + dc == double(n)) ? -dc : dc;
        }
        t.rays.push_back(std::move(r));
        t.busemann.points.push_back(std::move(h));
    }
    return t;
}

inline MetricTemplate grid(int X, int Y) {
    MetricTemplate t;
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y) t.graph.nodes.push_back(grid_label(x, y));
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y) {
            if (y + 1 <= Y) t.graph.edges.emplace_back(grid_label(x, y), grid_label(x, y + 1), 1.0);
            if ((y == 0 || y == 1) && x + 1 <= X)
                t.graph.edges.emplace_back(grid_label(x, y), grid_label(x + 1, y), 1.0);
        }
    std::vector<std::string> trunc;
    for (int x = 0; x <= X; ++x)
        for (int y = 0; y <= Y; ++y)
            if (x == X || y == Y) trunc.push_back(grid_label(x, y));
    t.metric = graph_metric(t.graph, grid_label(0, 0), trunc);
    for (int c = 0; c <= X; ++c) {
        Ray r{"col" + std::to_string(c), {}};
        for (int y = 0; y <= Y; ++y) r.states.push_back(grid_label(c, y));
        t.rays.push_back(std::move(r));
    }
    return t;
}

} // namespace detail

/// name: half_line(N), z_line(N), star_tree(arms, N), grid(X, Y).
inline MetricTemplate metric_template(const std::string& name, int size1, int size2 = 0) {
    if (name == "half_line") return detail::half_line(size1);
    if (name == "z_line") return detail::z_line(size1);
    if (name == "star_tree") return detail::star_tree(size1, size2);
    if (name == "grid") return detail::grid(size1, size2);
    throw UnknownTemplateError(name);
}

// ---------------------------------------------------------------------------
// Random non-positive kernels for property tests. Entries are dyadic
// (multiples of 2^-20) so that path weights add exactly regardless of
// association; closures on such kernels are exact, not approximate.

struct RandomKernelParams {
    std::size_t n_states = 4;
    std::uint64_t seed = 0;
    double density = 0.6;          // probability of a finite off-diagonal entry
    bool zero_diagonal = false;
    bool strongly_connected = false; // add a ring of finite edges
    double lo = -5.0;
    double hi = 0.0;
};

inline Kernel random_kernel(const RandomKernelParams& p) {
    std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < p.n_states; ++i) labels.push_back("s" + std::to_string(i));
    Kernel a(make_states(labels));

    constexpr double kScale = 1 << 20;
    std::uniform_int_distribution<std::int64_t> weight(
        static_cast<std::int64_t>(p.lo * kScale), static_cast<std::int64_t>(p.hi * kScale));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto dyadic = [&]() { return static_cast<double>(weight(rng)) / kScale; };

    for (std::size_t i = 0; i < p.n_states; ++i)
        for (std::size_t j = 0; j < p.n_states; ++j) {
            if (i == j) {
                if (p.zero_diagonal) a.set(i, i, ExtReal(0.0));
                continue;
            }
            if (coin(rng) < p.density) a.set(i, j, ExtReal(dyadic()));
        }
    if (p.strongly_connected && p.n_states > 1)
        for (std::size_t i = 0; i < p.n_states; ++i) {
            const std::size_t j = (i + 1) % p.n_states;
            if (a.at(i, j).is_neg_inf()) a.set(i, j, ExtReal(dyadic()));
        }
    return a;
}

} // namespace maxplus::corpus
