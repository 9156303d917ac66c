#include "catch_amalgamated.hpp"

#include "maxplus/corpus.hpp"
#include "maxplus/harmonic.hpp"
#include "maxplus/martin.hpp"

using namespace maxplus;

namespace {

MartinInstance two_state_instance() {
    Kernel a(make_states({"1", "2"}));
    a.set("1", "2", ExtReal(-1.0));
    a.set("2", "1", ExtReal(-2.0));
    return make_martin_instance(std::move(a), "1");
}

} // namespace

TEST_CASE("martin kernel basics") {
    const MartinInstance inst = two_state_instance();
    const Kernel k = martin_kernel(inst);

    // Row b is identically zero.
    CHECK(k.at("1", "1") == ExtReal(0.0));
    CHECK(k.at("1", "2") == ExtReal(0.0));
    // Columns derived from A* by normalizing with the basepoint row.
    CHECK(k.at("2", "1") == ExtReal(-2.0));
    CHECK(k.at("2", "2") == ExtReal(1.0));
}

TEST_CASE("inaccessible states are rejected at construction") {
    Kernel a(make_states({"b", "x"}));
    a.set("b", "b", ExtReal(0.0));
    a.set("x", "b", ExtReal(-1.0)); // b cannot reach x
    CHECK_THROWS_AS(make_martin_instance(std::move(a), "b"), InaccessibleStateError);
}

TEST_CASE("example2 Martin kernel follows the closed form") {
    const int J = 50;
    const auto ex = corpus::example2(J);
    const Kernel k = martin_kernel(ex.inst);
    for (int i = 1; i <= J; ++i)
        for (int j = 1; j <= J; ++j) {
            const double expected = (j <= i) ? 1.0 / i : 1.0 / i - 2.0;
            CHECK_THAT(k.at(std::to_string(i), std::to_string(j)).value(),
                       Catch::Matchers::WithinAbs(expected, 1e-9));
        }
    for (int i = 1; i <= J; ++i) {
        CHECK_THAT(k.at(std::to_string(i), "inf").value(),
                   Catch::Matchers::WithinAbs(1.0 / i - 2.0, 1e-9));
        CHECK(k.at("inf", std::to_string(i)) == ExtReal(0.0));
    }
}

TEST_CASE("finite martin space") {
    SECTION("single state") {
        Kernel a(make_states({"b"}));
        a.set("b", "b", ExtReal(0.0));
        const auto points = finite_martin_space(make_martin_instance(std::move(a), "b"));
        REQUIRE(points.size() == 1);
        CHECK(points[0].xi.at("b") == ExtReal(0.0));
    }
    SECTION("example2 window has one point per state") {
        const auto ex = corpus::example2(10);
        const auto points = finite_martin_space(ex.inst);
        CHECK(points.size() == 11);
    }
    SECTION("duplicated state is merged with two witnesses") {
        Kernel a(make_states({"b", "y", "z"}));
        a.set("b", "y", ExtReal(-1.0));
        a.set("b", "z", ExtReal(-1.0));
        a.set("y", "b", ExtReal(-2.0));
        a.set("z", "b", ExtReal(-2.0));
        a.set("y", "z", ExtReal(0.0));
        a.set("z", "y", ExtReal(0.0));
        const auto points = finite_martin_space(make_martin_instance(std::move(a), "b"));
        REQUIRE(points.size() == 2);
        bool found = false;
        for (const auto& p : points)
            if (p.witnesses.size() == 2) found = true;
        CHECK(found);
    }
}

TEST_CASE("martin space is stable under state reordering") {
    corpus::RandomKernelParams prm;
    prm.n_states = 5;
    prm.seed = 77;
    prm.density = 0.6;
    prm.strongly_connected = true;
    const Kernel a = corpus::random_kernel(prm);

    // Rebuild the same kernel with states listed in reverse.
    std::vector<std::string> rev(a.states().labels().rbegin(), a.states().labels().rend());
    Kernel b(make_states(rev));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            b.set(a.states().label(i), a.states().label(j), a.at(i, j));

    const auto pa = finite_martin_space(make_martin_instance(a, "s0"));
    const auto pb = finite_martin_space(make_martin_instance(b, "s0"));
    REQUIRE(pa.size() == pb.size());
    for (const auto& p : pa) {
        bool matched = false;
        for (const auto& q : pb) {
            bool equal = true;
            for (std::size_t i = 0; i < a.size() && equal; ++i)
                equal = approx_eq(p.xi.at(a.states().label(i)), q.xi.at(a.states().label(i)));
            if (equal) matched = true;
        }
        CHECK(matched);
    }
}

TEST_CASE("martin columns are superharmonic") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        corpus::RandomKernelParams prm;
        prm.n_states = 6;
        prm.seed = seed + 40;
        prm.density = 0.5;
        prm.strongly_connected = true;
        const Kernel a = corpus::random_kernel(prm);
        const MartinInstance inst = make_martin_instance(a, "s0");
        const Kernel k = martin_kernel(inst);
        for (std::size_t j = 0; j < a.size(); ++j) {
            MPVector col(a.states_ptr());
            for (std::size_t i = 0; i < a.size(); ++i) col.set(i, k.at(i, j));
            CHECK(is_superharmonic(a, col).verdict);
            CHECK(col.at(inst.basepoint) == ExtReal(0.0));
        }
    }
}

TEST_CASE("h_flat on finite zero-diagonal instances vanishes on the diagonal") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        corpus::RandomKernelParams prm;
        prm.n_states = 5;
        prm.seed = seed + 300;
        prm.zero_diagonal = true;
        prm.strongly_connected = true;
        const Kernel a = corpus::random_kernel(prm);
        const MartinInstance inst = make_martin_instance(a, "s0");
        const auto points = finite_martin_space(inst);
        for (const auto& p : points) {
            const ExtReal h = h_flat(inst, p, p);
            REQUIRE(h.finite());
            CHECK_THAT(h.value(), Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("h_flat diagonal never exceeds zero without positive cycles") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        corpus::RandomKernelParams prm;
        prm.n_states = 6;
        prm.seed = seed + 800;
        prm.density = 0.7;
        prm.strongly_connected = true;
        const MartinInstance inst = make_martin_instance(corpus::random_kernel(prm), "s0");
        for (const auto& p : finite_martin_space(inst))
            CHECK(approx_leq(h_flat(inst, p, p), ExtReal(0.0)));
    }
}

TEST_CASE("example2 minimal space excludes the basepoint column") {
    const auto ex = corpus::example2(20);
    const PointSet ps = build_point_set(ex.inst, &ex.family);

    const auto& kinf = ps.points[ps.index_of("K_inf")];
    const ExtReal h_inf = h_flat(ex.inst, kinf, kinf);
    REQUIRE(h_inf.finite());
    CHECK(h_inf.value() < -1.0); // strictly negative (a -2 cycle)

    for (int j = 1; j <= 20; ++j) {
        const auto& kj = ps.points[ps.index_of("K_" + std::to_string(j))];
        CHECK_THAT(h_flat(ex.inst, kj, kj).value(), Catch::Matchers::WithinAbs(0.0, 1e-9));
    }

    const auto minimal = minimal_martin_space(ex.inst, &ex.family);
    CHECK(minimal.size() == 20);
    for (const auto& p : minimal) CHECK(p.name != "K_inf");
}

TEST_CASE("example1 family points are all minimal") {
    const auto ex = corpus::example1(10, 8, 6);
    const PointSet ps = build_point_set(ex.inst, &ex.family);
    for (const auto& name : {std::string("a^0"), std::string("a^3"), std::string("a^6"),
                             std::string("b^0"), std::string("b^1")}) {
        const auto& p = ps.points[ps.index_of(name)];
        const ExtReal h = h_flat(ex.inst, p, p);
        REQUIRE(h.finite());
        CHECK_THAT(h.value(), Catch::Matchers::WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("family points merge with the columns realizing them on the window") {
    const auto ex = corpus::example1(10, 8, 6);
    const PointSet ps = build_point_set(ex.inst, &ex.family);
    // a^n coincides on the window with the column of the top of column n.
    const auto& a3 = ps.points[ps.index_of("a^3")];
    REQUIRE_FALSE(a3.witnesses.empty());
    CHECK(ex.inst.states().label(a3.witnesses.front()) == corpus::grid_label(3, 8));
    const auto& b0 = ps.points[ps.index_of("b^0")];
    REQUIRE_FALSE(b0.witnesses.empty());
    CHECK(ex.inst.states().label(b0.witnesses.front()) == corpus::grid_label(10, 0));
}

TEST_CASE("corpus families validate") {
    SECTION("example1") {
        const auto ex = corpus::example1(10, 8, 6);
        const FamilyReport rep = validate_family(ex.inst, ex.family);
        for (const auto& issue : rep.issues) UNSCOPED_INFO(issue);
        CHECK(rep.ok);
        CHECK(rep.accumulation_states_checked > 0);
        CHECK(rep.accumulation_states_skipped > 0); // near the window edge
    }
    SECTION("example2") {
        const auto ex = corpus::example2(12);
        const FamilyReport rep = validate_family(ex.inst, ex.family);
        for (const auto& issue : rep.issues) UNSCOPED_INFO(issue);
        CHECK(rep.ok);
    }
}
