#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fintop;
using namespace testutil;

TEST_CASE("space construction validates the Alexandrov table") {
    CHECK(sierpinski().size() == 2);
    CHECK(line3().size() == 3);

    // reflexivity: 0 missing from its own minimal open set
    CHECK_THROWS_MATCHES(
        FinSpace::make({"a", "b"}, {{"a", {"b"}}, {"b", {"b"}}}), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::NotReflexive; }));

    // transitivity: b in minopen(a) but minopen(b) sticks out
    CHECK_THROWS_MATCHES(
        FinSpace::make({"a", "b", "c"},
                       {{"a", {"a", "b"}}, {"b", {"b", "c"}}, {"c", {"c"}}}),
        TopologyError, Catch::Matchers::Predicate<TopologyError>([](const TopologyError& e) {
            return e.kind() == ErrorKind::NotTransitive;
        }));

    CHECK_THROWS_MATCHES(
        FinSpace::make({"a"}, {{"a", {"a", "zzz"}}}), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::UnknownPoint; }));

    // the empty space is valid
    CHECK(FinSpace().size() == 0);
    CHECK(FinSpace::make({}, {}).size() == 0);
}

TEST_CASE("closure matches the smallest-closed-superset oracle") {
    FinSpace s = sierpinski();
    CHECK(s.closure(s.set_of({"z1"})) == s.full_set());

    FinSpace t = line3();
    CHECK(t.closure(t.set_of({"m"})) == t.set_of({"m"}));
    CHECK(t.closure(t.empty_set()).none());

    for (const auto& space : {sierpinski(), line3(), k5(), p9()}) {
        for (const auto& u : brute_opens(space)) {
            CHECK(space.closure(u | space.empty_set()) == brute_closure(space, u));
        }
        // a few non-open subsets too
        std::mt19937 rng(7);
        for (int t2 = 0; t2 < 20; ++t2) {
            PointSet set(space.size());
            for (std::size_t i = 0; i < space.size(); ++i)
                if (rng() % 3 == 0) set.set(i);
            CHECK(space.closure(set) == brute_closure(space, set));
        }
    }
}

TEST_CASE("closure is extensive, idempotent and monotone") {
    std::mt19937 rng(11);
    for (int t = 0; t < 40; ++t) {
        FinSpace s = random_space(rng, 2 + t % 5);
        PointSet a(s.size()), b(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (rng() % 2) a.set(i);
            if (rng() % 2) b.set(i);
        }
        PointSet cl = s.closure(a);
        CHECK(a.is_subset_of(cl));
        CHECK(s.closure(cl) == cl);
        if (a.is_subset_of(b)) CHECK(cl.is_subset_of(s.closure(b)));
    }
}

TEST_CASE("components split along comparability") {
    FinSpace t = line3();
    auto comps = t.components(t.set_of({"l", "r"}));
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == t.set_of({"l"}));
    CHECK(comps[1] == t.set_of({"r"}));
    CHECK(t.components(t.full_set()).size() == 1);
    CHECK(sierpinski().components(sierpinski().full_set()).size() == 1);
}

TEST_CASE("subspace intersects minimal opens") {
    FinSpace t = line3();
    FinSpace sub = t.subspace(t.set_of({"l", "m"}));
    REQUIRE(sub.size() == 2);
    CHECK(sub.minopen(sub.index_of("l")) == sub.set_of({"l"}));
    CHECK(sub.minopen(sub.index_of("m")) == sub.set_of({"l", "m"}));

    CHECK(t.subspace(t.full_set()) == t);
    CHECK(t.subspace(t.empty_set()).size() == 0);
}

TEST_CASE("subspace of a subspace is the subspace of the intersection") {
    std::mt19937 rng(23);
    for (int t = 0; t < 30; ++t) {
        FinSpace s = random_space(rng, 3 + t % 4);
        PointSet a(s.size()), b(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (rng() % 2) a.set(i);
            if (rng() % 2) b.set(i);
        }
        FinSpace sub = s.subspace(a);
        // b restricted into sub's indexing
        auto members = mask_members(a);
        PointSet b_in_sub(sub.size());
        for (std::size_t j = 0; j < members.size(); ++j)
            if (b.test(members[j])) b_in_sub.set(j);
        CHECK(sub.subspace(b_in_sub) == s.subspace(a & b));
    }
}

TEST_CASE("disjoint union carries open embeddings") {
    auto u = disjoint_union({sierpinski(), sierpinski()});
    CHECK(u.total.size() == 4);
    CHECK(u.injections.size() == 2);
    for (const auto& inj : u.injections) CHECK(is_open_embedding(inj));

    auto v = disjoint_union({sierpinski(), line3()});
    CHECK(v.total.size() == 5);
    for (const auto& inj : v.injections) CHECK(is_open_embedding(inj));

    auto single = disjoint_union({line3()});
    CHECK(brute_homeomorphic(single.total, line3()));

    CHECK_THROWS_AS(disjoint_union({}), TopologyError);
}

TEST_CASE("quotient space saturates opens") {
    FinSpace s = sierpinski();
    auto q1 = quotient_space(s, {s.full_set()});
    CHECK(q1.total.size() == 1);

    FinSpace t = line3();
    auto q2 = quotient_space(t, {t.set_of({"l", "r"}), t.set_of({"m"})});
    REQUIRE(q2.total.size() == 2);
    CHECK(brute_homeomorphic(q2.total, sierpinski()));
    CHECK(q2.projection->surjective());
    CHECK(!ContinuousMap::continuity_witness(t, q2.total, q2.projection->values()));

    std::vector<PointSet> identity_partition;
    for (std::size_t i = 0; i < t.size(); ++i) {
        PointSet c(t.size());
        c.set(i);
        identity_partition.push_back(c);
    }
    auto q3 = quotient_space(t, identity_partition);
    CHECK(brute_homeomorphic(q3.total, t));

    PointSet overlap = t.set_of({"l", "m"});
    CHECK_THROWS_MATCHES(
        quotient_space(t, {overlap, t.set_of({"m", "r"})}), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::NotAPartition; }));
}

TEST_CASE("product uses componentwise minimal opens") {
    FinSpace p = p9();
    REQUIRE(p.size() == 9);
    CHECK(p.minopen(p.index_of("(m,m)")) == p.full_set());
    CHECK(p.minopen(p.index_of("(l,l)")) == p.set_of({"(l,l)"}));
    CHECK(p.minopen(p.index_of("(l,m)")) == p.set_of({"(l,l)", "(l,m)", "(l,r)"}));

    FinSpace p25_space = p25();
    CHECK(p25_space.size() == 25);

    CHECK(brute_homeomorphic(product(line3(), point_space()), line3()));
}

TEST_CASE("continuity follows the minimal-open criterion") {
    FinSpace t = line3();
    FinSpace s = sierpinski();
    CHECK(!ContinuousMap::continuity_witness(t, t, {0, 1, 2}));

    // l->1, m->0, r->1 is continuous from line3 to sierpinski
    CHECK(!ContinuousMap::continuity_witness(t, s, {1, 0, 1}));

    // the swap on sierpinski is not; witness is the closed point z0
    auto w = ContinuousMap::continuity_witness(s, s, {1, 0});
    REQUIRE(w.has_value());
    CHECK(s.name(*w) == "z0");
}

TEST_CASE("map enumeration is exhaustive and canonically ordered") {
    FinSpace pt = point_space();
    FinSpace s = sierpinski();
    FinSpace t = line3();

    CHECK(enumerate_continuous_maps(pt, s).size() == 2);
    CHECK(enumerate_continuous_maps(s, s).size() == 3);
    // 9 candidates, 5 survive: both constants to open points, three maps
    // landing on the generic middle point
    CHECK(enumerate_continuous_maps(s, t).size() == 5);

    auto all = enumerate_maps(s, t, [](const auto&) { return true; });
    CHECK(all.size() == 9);  // |cod|^|dom|
    CHECK(std::is_sorted(all.begin(), all.end()));

    auto continuous = enumerate_maps(s, t, continuity_predicate(s, t));
    REQUIRE(continuous.size() == 5);
    auto backtracked = enumerate_continuous_maps(s, t);
    for (std::size_t i = 0; i < 5; ++i) CHECK(continuous[i] == backtracked[i].values());

    CHECK_THROWS_MATCHES(
        enumerate_maps(p9(), p9(), [](const auto&) { return true; }, 1000), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::BudgetExceeded; }));
}

TEST_CASE("probe catalog enumerates homeomorphism classes") {
    CHECK(probe_catalog(1).size() == 1);
    CHECK(probe_catalog(2).size() == 3);
    CHECK(probe_catalog(3).size() == 9);
    CHECK(probe_catalog(4).size() == 33);
    CHECK(probe_catalog(5, 5).size() == 139);
    CHECK_THROWS_AS(probe_catalog(5), TopologyError);

    auto cat = probe_catalog(3);
    for (std::size_t i = 0; i < cat.size(); ++i)
        for (std::size_t j = i + 1; j < cat.size(); ++j)
            CHECK(!brute_homeomorphic(cat[i], cat[j]));

    // determinism across calls
    auto again = probe_catalog(3);
    for (std::size_t i = 0; i < cat.size(); ++i) CHECK(cat[i] == again[i]);
}

TEST_CASE("minimal opens are connected across the catalog") {
    for (const auto& s : probes_up_to(4)) {
        for (std::size_t x = 0; x < s.size(); ++x)
            CHECK(s.components(s.minopen(x)).size() == 1);
    }
}

TEST_CASE("open and connected-open enumeration agree with the raw scan") {
    for (const auto& s : {sierpinski(), line3(), k5(), p9()}) {
        auto raw = brute_opens(s);
        CHECK(s.opens().size() == raw.size());
        std::size_t conn = 0;
        for (const auto& u : raw)
            if (u.any() && brute_connected(s, u)) ++conn;
        CHECK(s.connected_opens().size() == conn);
        for (const auto& u : s.connected_opens()) CHECK(brute_connected(s, u));
    }
}
