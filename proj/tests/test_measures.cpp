#include "catch_amalgamated.hpp"

#include "maxplus/corpus.hpp"
#include "maxplus/measures.hpp"

#include "instances.hpp"

using namespace maxplus;

namespace {

constexpr int kX = 12, kY = 8, kN = 6;

} // namespace

TEST_CASE("mu_max on the worked examples") {
    SECTION("example1 boundary values") {
        const auto ex = corpus::example1(kX, kY, kN);
        const PointSet ps = build_point_set(ex.inst, &ex.family);
        for (int n = 0; n <= kN; ++n) {
            const auto& p = ps.points[ps.index_of("a^" + std::to_string(n))];
            CHECK_THAT(mu_max(ex.inst, ex.u, p).value(),
                       Catch::Matchers::WithinAbs(-4.0, 1e-9));
        }
        CHECK_THAT(mu_max(ex.inst, ex.u, ps.points[ps.index_of("b^0")]).value(),
                   Catch::Matchers::WithinAbs(0.0, 1e-9));
        CHECK_THAT(mu_max(ex.inst, ex.u, ps.points[ps.index_of("b^1")]).value(),
                   Catch::Matchers::WithinAbs(-2.0, 1e-9));
    }
    SECTION("example2 reciprocal values") {
        const auto ex = corpus::example2(20);
        const PointSet ps = build_point_set(ex.inst, &ex.family);
        for (int j = 1; j <= 20; ++j)
            CHECK_THAT(mu_max(ex.inst, ex.u, ps.points[ps.index_of("K_" + std::to_string(j))])
                           .value(),
                       Catch::Matchers::WithinAbs(-1.0 / j, 1e-9));
        CHECK_THAT(mu_max(ex.inst, ex.u, ps.points[ps.index_of("K_inf")]).value(),
                   Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
    SECTION("single-state instance") {
        Kernel a(make_states({"b"}));
        a.set("b", "b", ExtReal(0.0));
        const MartinInstance inst = make_martin_instance(std::move(a), "b");
        MPVector u(inst.a.states_ptr(), {2.5});
        const PointSet ps = build_point_set(inst, nullptr);
        REQUIRE(ps.points.size() == 1);
        CHECK(mu_max(inst, u, ps.points[0]) == ExtReal(2.5));
    }
    SECTION("rejects non-superharmonic vectors") {
        const auto ex = corpus::example2(5);
        MPVector bad = ex.u;
        bad.set("3", ExtReal(-10.0)); // a 0-weight self loop now beats u_3
        const PointSet ps = build_point_set(ex.inst, &ex.family);
        CHECK_THROWS_AS(mu_max(ex.inst, bad, ps.points[0]), NotSuperharmonicError);
    }
}

TEST_CASE("kappa evaluator normalization at the basepoint") {
    const auto ex = corpus::example2(10);
    const OrderedPointSet ops = compute_order(ex.inst, ex.u, &ex.family);
    KappaEvaluator eval{ex.inst, ex.u, ops.points, ops.mumax, {}};
    std::size_t bpos = 0;
    for (std::size_t w = 0; w < ops.points.to_instance.size(); ++w)
        if (ops.points.to_instance[w] == ex.inst.basepoint) bpos = w;
    for (std::size_t p = 0; p < ops.size(); ++p)
        CHECK_THAT(eval.kappa_max(bpos, p).value(),
                   Catch::Matchers::WithinAbs(ops.mumax[p], 1e-12));
}

TEST_CASE("the order on the worked examples") {
    SECTION("example1: b^1 below b^0, boundary columns maximal") {
        const auto ex = corpus::example1(kX, kY, kN);
        const OrderedPointSet ops = compute_order(ex.inst, ex.u, &ex.family);
        KappaEvaluator eval{ex.inst, ex.u, ops.points, ops.mumax, {}};

        const std::size_t b1 = ops.points.index_of("b^1");
        const std::size_t b0 = ops.points.index_of("b^0");
        CHECK(order_leq(eval, b1, b1)); // reflexive
        CHECK(order_leq(eval, b1, b0));
        CHECK_FALSE(order_leq(eval, b0, b1));
        CHECK_FALSE(ops.maximal[b1]);
        CHECK(ops.maximal[b0]);
        for (int n = 0; n <= kN; ++n)
            CHECK(ops.maximal[ops.points.index_of("a^" + std::to_string(n))]);
    }
    SECTION("example2: identity relation") {
        const auto ex = corpus::example2(15);
        const OrderedPointSet ops = compute_order(ex.inst, ex.u, &ex.family);
        for (std::size_t z = 0; z < ops.size(); ++z) {
            CHECK(ops.maximal[z]);
            CHECK(ops.dominators[z].empty());
        }
    }
}

TEST_CASE("m_u on the worked examples") {
    SECTION("example1") {
        const auto ex = corpus::example1(kX, kY, kN);
        const OrderedPointSet ops = compute_order(ex.inst, ex.u, &ex.family);
        const Measure m = m_u(ops);
        CHECK(m.at("b^1").is_neg_inf());
        CHECK(m.at("b^0") == ExtReal(0.0));
        for (int n = 0; n <= kN; ++n)
            CHECK_THAT(m.at("a^" + std::to_string(n)).value(),
                       Catch::Matchers::WithinAbs(-4.0, 1e-9));
    }
    SECTION("example2 agrees with mu_max") {
        const auto ex = corpus::example2(15);
        const OrderedPointSet ops = compute_order(ex.inst, ex.u, &ex.family);
        const Measure m = m_u(ops);
        for (std::size_t p = 0; p < ops.size(); ++p)
            CHECK_THAT(m.at(ops.points.points[p].name).value(),
                       Catch::Matchers::WithinAbs(ops.mumax[p], 1e-12));
    }
    SECTION("duplicated columns merge instead of dominating each other") {
        Kernel a(make_states({"b", "y", "z"}));
        a.set("b", "b", ExtReal(0.0));
        a.set("y", "y", ExtReal(0.0));
        a.set("z", "z", ExtReal(0.0));
        a.set("b", "y", ExtReal(-1.0));
        a.set("b", "z", ExtReal(-1.0));
        a.set("y", "b", ExtReal(-2.0));
        a.set("z", "b", ExtReal(-2.0));
        a.set("y", "z", ExtReal(0.0));
        a.set("z", "y", ExtReal(0.0));
        const MartinInstance inst = make_martin_instance(std::move(a), "b");
        const MPVector u = MPVector::constant(inst.a.states_ptr(), ExtReal(0.0));
        const OrderedPointSet ops = compute_order(inst, u, nullptr);
        REQUIRE(ops.size() == 2); // the twin columns are one point
        const Measure m = m_u(ops);
        for (std::size_t p = 0; p < ops.size(); ++p)
            if (ops.points.points[p].witnesses.size() == 2)
                CHECK(m.at(ops.points.points[p].name).value() == ops.mumax[p]);
    }
}

TEST_CASE("usc hull") {
    SECTION("no accumulation: hull is the identity") {
        const auto hi = harness::random_harmonic_instance(5);
        const OrderedPointSet ops = compute_order(hi.inst, hi.u, nullptr);
        const Measure m = m_u(ops);
        const Measure hull = usc_hull(ops.points, m);
        CHECK(hull.density == m.density);
    }
    SECTION("example1: the hull revives b^1") {
        const auto ex = corpus::example1(kX, kY, kN);
        const auto r = mu_min(ex.inst, ex.u, &ex.family);
        CHECK(r.m.at("b^1").is_neg_inf());
        CHECK_THAT(r.mumin.at("b^1").value(), Catch::Matchers::WithinAbs(-4.0, 1e-9));
    }
    SECTION("a hull of nothing stays nothing") {
        const auto ex = corpus::example2(5);
        const PointSet ps = build_point_set(ex.inst, &ex.family);
        Measure bottom;
        for (const auto& p : ps.points) bottom.density[p.name] = kNegInf;
        const Measure hull = usc_hull(ps, bottom);
        for (const auto& [name, v] : hull.density) CHECK(v == kNegInf);
    }
    SECTION("oscillating suffix maxima do not converge") {
        const auto ex = corpus::example2(6);
        PointSet ps = build_point_set(ex.inst, &ex.family);
        ps.accumulation.clear();
        ps.accumulation.emplace_back(
            std::vector<std::size_t>{ps.index_of("K_1"), ps.index_of("K_2"),
                                     ps.index_of("K_3"), ps.index_of("K_4")},
            ps.index_of("K_inf"));
        Measure m;
        for (const auto& p : ps.points) m.density[p.name] = kNegInf;
        m.density["K_1"] = 0.0;
        m.density["K_2"] = -9.0;
        m.density["K_3"] = 0.0;
        m.density["K_4"] = -9.0;
        CHECK_THROWS_AS(usc_hull(ps, m), NonConvergentError);
    }
}

TEST_CASE("the stored order is reflexive and transitive") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto hi = harness::random_harmonic_instance(seed + 33);
        const OrderedPointSet ops = compute_order(hi.inst, hi.u, nullptr);
        KappaEvaluator eval{hi.inst, hi.u, ops.points, ops.mumax, {}};
        for (std::size_t z = 0; z < ops.size(); ++z) {
            CHECK(order_leq(eval, z, z)); // reflexive
            for (std::size_t w : ops.dominators[z])
                for (std::size_t v : ops.dominators[w]) {
                    if (v == z) continue;
                    bool listed = false;
                    for (std::size_t d : ops.dominators[z]) listed |= (d == v);
                    CHECK(listed); // transitive
                }
        }
    }
}

TEST_CASE("mu_min end to end on the worked examples") {
    SECTION("example1 golden table") {
        const auto ex = corpus::example1(kX, kY, kN);
        const auto r = mu_min(ex.inst, ex.u, &ex.family);
        for (int n = 0; n <= kN; ++n)
            CHECK_THAT(r.mumin.at("a^" + std::to_string(n)).value(),
                       Catch::Matchers::WithinAbs(-4.0, 1e-9));
        CHECK_THAT(r.mumin.at("b^0").value(), Catch::Matchers::WithinAbs(0.0, 1e-9));
        CHECK_THAT(r.mumin.at("b^1").value(), Catch::Matchers::WithinAbs(-4.0, 1e-9));
        CHECK(r.rep_mumax.verdict);
        CHECK(r.rep_mumin.verdict);
    }
    SECTION("example2: minimum equals maximum") {
        const auto ex = corpus::example2(15);
        const auto r = mu_min(ex.inst, ex.u, &ex.family);
        for (const auto& [name, v] : r.mumin.density)
            CHECK_THAT(v, Catch::Matchers::WithinAbs(r.mumax.at(name).value(), 1e-12));
        CHECK(r.rep_mumin.verdict);
    }
    SECTION("single state") {
        Kernel a(make_states({"b"}));
        a.set("b", "b", ExtReal(0.0));
        const MartinInstance inst = make_martin_instance(std::move(a), "b");
        MPVector u(inst.a.states_ptr(), {-1.25});
        const auto r = mu_min(inst, u, nullptr);
        REQUIRE(r.order.size() == 1);
        const std::string name = r.order.points.points[0].name;
        CHECK(r.mumin.at(name) == ExtReal(-1.25));
        CHECK(r.mumax.at(name) == ExtReal(-1.25));
    }
}

TEST_CASE("pipeline invariants on random instances") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto hi = harness::random_harmonic_instance(seed);
        const auto r = mu_min(hi.inst, hi.u, nullptr);
        CHECK(r.u_harmonic);

        for (const auto& [name, vmin] : r.mumin.density) {
            const double vm = r.m.at(name).value();
            const double vmax = r.mumax.at(name).value();
            // m_u <= mu_min <= mu_max pointwise.
            CHECK(vm <= vmin + 1e-12);
            CHECK(vmin <= vmax + 1e-12);
            // Finite-case dichotomy.
            CHECK((vmin == kNegInf || vmin == vmax));
        }
        CHECK(r.rep_mumax.verdict);
        CHECK(r.rep_mumin.verdict);

        // Zero diagonal: every point is minimal, so the restriction is the
        // whole measure and must also represent.
        for (std::size_t p = 0; p < r.order.size(); ++p) CHECK(r.minimal[p]);
        REQUIRE(r.rep_restricted.has_value());
        CHECK(r.rep_restricted->verdict);
    }
}

TEST_CASE("measures between mu_min and mu_max also represent") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto hi = harness::random_harmonic_instance(seed + 50);
        const auto r = mu_min(hi.inst, hi.u, nullptr);
        Measure mid;
        std::size_t toggle = 0;
        for (const auto& [name, vmin] : r.mumin.density) {
            const double vmax = r.mumax.at(name).value();
            mid.density[name] = (toggle++ % 2 == 0) ? vmax : vmin;
        }
        const RepresentsReport rep = represents(r.order.points, mid, hi.u);
        CHECK(rep.verdict);
    }
}

TEST_CASE("minimality by perturbation") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto hi = harness::random_harmonic_instance(seed + 80);
        const auto r = mu_min(hi.inst, hi.u, nullptr);
        for (const auto& [name, v] : r.mumin.density) {
            if (v == kNegInf) continue;
            Measure lowered = r.mumin;
            lowered.density[name] = v - 0.1;
            CHECK_FALSE(represents(r.order.points, lowered, hi.u).verdict);
        }
    }
}

TEST_CASE("scaling covariance") {
    const auto hi = harness::random_harmonic_instance(7);
    const double c = 1.5;
    MPVector shifted = hi.u;
    for (std::size_t i = 0; i < shifted.size(); ++i)
        shifted.set(i, hi.u.at(i) + ExtReal(c));

    const auto r0 = mu_min(hi.inst, hi.u, nullptr);
    const auto r1 = mu_min(hi.inst, shifted, nullptr);
    REQUIRE(r0.order.size() == r1.order.size());
    for (std::size_t p = 0; p < r0.order.size(); ++p) {
        CHECK_THAT(r1.order.mumax[p], Catch::Matchers::WithinAbs(r0.order.mumax[p] + c, 1e-9));
        CHECK(r0.order.dominators[p] == r1.order.dominators[p]);
        const std::string& name = r0.order.points.points[p].name;
        const double v0 = r0.mumin.at(name).value();
        const double v1 = r1.mumin.at(name).value();
        if (v0 == kNegInf)
            CHECK(v1 == kNegInf);
        else
            CHECK_THAT(v1, Catch::Matchers::WithinAbs(v0 + c, 1e-9));
    }
}
