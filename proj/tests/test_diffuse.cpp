#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fintop;
using namespace testutil;

TEST_CASE("diffuseness by pullback of negligible elements") {
    FinSpace p = p9();
    CHECK(is_diffuse(ContinuousMap::identity(p)).holds);

    // constant at the generic middle point: the one negligible point pulls
    // back to the whole space
    auto const_mm = ContinuousMap::constant(p, p, p.index_of("(m,m)"));
    auto r = is_diffuse(const_mm);
    CHECK(!r.holds);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->open_set == p.full_set());
    CHECK(r.witness->inner == p.set_of({"(m,m)"}));

    // one-dimensional codomains admit no non-empty negligible elements, so
    // everything continuous into them is diffuse
    FinSpace t = line3();
    for (const auto& e : negligible_elements(t)) CHECK(e.inner.none());
    for (const auto& f : enumerate_continuous_maps(t, t)) CHECK(is_diffuse(f).holds);
    for (const auto& f : enumerate_continuous_maps(k5(), t)) CHECK(is_diffuse(f).holds);

    CHECK_THROWS_AS(make_diffuse(const_mm), TopologyError);
    CHECK(make_diffuse(ContinuousMap::identity(p)).certificate.size() ==
          negligible_generators(p).size());
}

TEST_CASE("generator-based diffuseness matches the full-catalog definition") {
    // independent route: pull back every negligible element of the codomain
    auto full_check = [](const ContinuousMap& f) {
        for (const auto& e : negligible_elements(f.cod())) {
            SubsetElement back{f.preimage(e.open_set), f.preimage(e.inner)};
            if (!is_negligible_element(f.dom(), back)) return false;
        }
        return true;
    };
    for (const auto& dom : probe_catalog(3)) {
        for (const auto& cod : probes_up_to(3)) {
            for (const auto& f : enumerate_continuous_maps(dom, cod))
                CHECK(is_diffuse(f).holds == full_check(f));
        }
    }
    std::mt19937 rng(97);
    for (int t = 0; t < 25; ++t) {
        FinSpace dom = random_space(rng, 4);
        FinSpace cod = random_space(rng, 4 + t % 2);
        for (const auto& f : enumerate_continuous_maps(dom, cod))
            CHECK(is_diffuse(f).holds == full_check(f));
    }
}

TEST_CASE("composition and isomorphism laws for diffuse maps") {
    for (const auto& s : probes_up_to(3)) {
        if (s.size() == 0) continue;
        auto maps = enumerate_continuous_maps(s, s);
        for (const auto& f : maps) {
            if (!is_diffuse(f).holds) continue;
            for (const auto& g : maps) {
                if (!is_diffuse(g).holds) continue;
                CHECK(is_diffuse(f.compose(g)).holds);
            }
        }
        CHECK(is_diffuse(ContinuousMap::identity(s)).holds);
    }
}

TEST_CASE("diffuseness is local over open covers") {
    // restriction to each member diffuse implies globally diffuse, checked
    // exhaustively over two-member covers of catalog spaces
    for (const auto& s : probe_catalog(3)) {
        for (const auto& cod : probe_catalog(2)) {
            for (const auto& f : enumerate_continuous_maps(s, cod)) {
                for (const auto& v1 : s.opens())
                    for (const auto& v2 : s.opens()) {
                        if ((v1 | v2) != s.full_set()) continue;
                        bool local = is_diffuse(f.restrict(v1)).holds &&
                                     is_diffuse(f.restrict(v2)).holds;
                        if (local) CHECK(is_diffuse(f).holds);
                    }
            }
        }
    }
}

TEST_CASE("post-composition with an open embedding preserves and reflects diffuseness") {
    FinSpace t = line3();
    for (const auto& u : t.opens()) {
        if (u.none()) continue;
        auto v = ContinuousMap::inclusion(t, u);
        for (const auto& s : probe_catalog(2)) {
            for (const auto& f : enumerate_continuous_maps(s, v.dom())) {
                CHECK(is_diffuse(v.compose(f)).holds == is_diffuse(f).holds);
            }
        }
    }
}

TEST_CASE("open embedding detection") {
    FinSpace t = line3();
    CHECK(is_open_embedding(ContinuousMap::inclusion(t, t.set_of({"l"}))));
    CHECK(!is_open_embedding(ContinuousMap::inclusion(t, t.set_of({"m"}))));

    // the diagonal into the square is injective and continuous but its image
    // is not open
    FinSpace p = p9();
    std::vector<std::size_t> diag = {p.index_of("(l,l)"), p.index_of("(m,m)"),
                                     p.index_of("(r,r)")};
    auto d = ContinuousMap::make(t, p, diag);
    CHECK(!is_open_embedding(d));

    CHECK(is_open_embedding(ContinuousMap::identity(p)));
}

TEST_CASE("cover detection in both modes") {
    FinSpace t = line3();
    auto full = ContinuousMap::identity(t);
    auto left = ContinuousMap::inclusion(t, t.set_of({"l"}));
    auto right = ContinuousMap::inclusion(t, t.set_of({"r"}));

    CHECK(is_cover({left, full}, t).holds);
    auto r = is_cover({left, right}, t);
    CHECK(!r.holds);
    REQUIRE(r.uncovered_point.has_value());
    CHECK(t.name(*r.uncovered_point) == "m");

    // fold map: a 2:1 local subset covering in the local mode
    auto u = disjoint_union({sierpinski(), sierpinski()});
    FinSpace s = sierpinski();
    std::vector<std::size_t> fold_values(u.total.size());
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < s.size(); ++i) fold_values[u.injections[j](i)] = i;
    auto fold = ContinuousMap::make(u.total, s, fold_values);
    CHECK(!is_cover({fold}, s, CoverMode::Pseudogeometric).holds);
    CHECK(is_cover({fold}, s, CoverMode::Pseudoetale).holds);
}

TEST_CASE("pullback along open embeddings") {
    FinSpace t = line3();
    FinSpace p = p9();

    // identity pulls back to the subset itself
    auto u = ContinuousMap::inclusion(t, t.set_of({"l"}));
    auto pb1 = pullback_embedding(ContinuousMap::identity(t), u);
    CHECK(brute_homeomorphic(pb1.total, u.dom()));

    // constant map outside the image pulls back to the empty space
    auto pb2 = pullback_embedding(ContinuousMap::constant(t, t, t.index_of("r")), u);
    CHECK(pb2.total.size() == 0);

    // first projection of the square against the left inclusion
    std::vector<std::size_t> proj(p.size());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) proj[a * 3 + b] = a;
    auto first = ContinuousMap::make(p, t, proj);
    auto pb3 = pullback_embedding(first, u);
    CHECK(pb3.total.size() == 3);  // {l} x line3
    CHECK(brute_homeomorphic(pb3.total, t));

    // commuting square
    CHECK(u.compose(pb3.into_sub) == first.compose(pb3.into_dom));

    CHECK_THROWS_MATCHES(
        pullback_embedding(first, ContinuousMap::inclusion(t, t.set_of({"m"}))), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::NotEmbedding; }));
}

TEST_CASE("pullback satisfies the universal property against probes") {
    FinSpace t = line3();
    FinSpace p = p9();
    std::vector<std::size_t> proj(p.size());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) proj[a * 3 + b] = a;
    auto f = ContinuousMap::make(p, t, proj);
    auto u = ContinuousMap::inclusion(t, t.set_of({"l"}));
    auto pb = pullback_embedding(f, u);
    for (const auto& probe : probes_up_to(2)) {
        for (const auto& a : enumerate_continuous_maps(probe, p)) {
            for (const auto& b : enumerate_continuous_maps(probe, u.dom())) {
                if (f.compose(a) != u.compose(b)) continue;
                std::size_t mediating = 0;
                for (const auto& h : enumerate_continuous_maps(probe, pb.total))
                    if (pb.into_dom.compose(h) == a && pb.into_sub.compose(h) == b) ++mediating;
                CHECK(mediating == 1);
            }
        }
    }
}

TEST_CASE("covers pull back to covers") {
    FinSpace t = line3();
    FinSpace p = p9();
    std::vector<std::size_t> proj(p.size());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) proj[a * 3 + b] = a;
    auto f = ContinuousMap::make(p, t, proj);
    std::vector<ContinuousMap> legs = {ContinuousMap::inclusion(t, t.set_of({"l"})),
                                       ContinuousMap::identity(t)};
    REQUIRE(is_cover(legs, t).holds);
    std::vector<ContinuousMap> pulled;
    for (const auto& leg : legs) pulled.push_back(pullback_embedding(f, leg).into_dom);
    CHECK(is_cover(pulled, p).holds);
}

TEST_CASE("compatible families glue uniquely over open covers") {
    // two-chart cover of line3; every compatible diffuse family into a probe
    // glues to exactly one diffuse map
    FinSpace t = line3();
    PointSet u1 = t.full_set(), u2 = t.set_of({"r"});
    for (const auto& probe : probes_up_to(3)) {
        auto glues = enumerate_continuous_maps(t, probe);
        for (const auto& f1 : enumerate_continuous_maps(t.subspace(u1), probe)) {
            if (!is_diffuse(f1).holds) continue;
            for (const auto& f2 : enumerate_continuous_maps(t.subspace(u2), probe)) {
                if (!is_diffuse(f2).holds) continue;
                // compatibility on the overlap {r}
                if (f1(t.subspace(u1).index_of("r")) != f2(t.subspace(u2).index_of("r")))
                    continue;
                std::size_t found = 0;
                for (const auto& g : glues) {
                    if (!is_diffuse(g).holds) continue;
                    if (g.restrict(u1) == f1 && g.restrict(u2) == f2) ++found;
                }
                CHECK(found == 1);
            }
        }
    }
}

TEST_CASE("local-subset recognition") {
    FinSpace t = line3();
    CHECK(is_fdl_local_subset(ContinuousMap::inclusion(t, t.set_of({"l"}))).holds);

    // fold map of two Sierpinski copies
    auto u = disjoint_union({sierpinski(), sierpinski()});
    FinSpace s = sierpinski();
    std::vector<std::size_t> fold_values(u.total.size());
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < s.size(); ++i) fold_values[u.injections[j](i)] = i;
    auto fold = ContinuousMap::make(u.total, s, fold_values);
    CHECK(is_fdl_local_subset(fold).holds);

    // collapsing the square to a point: the generic point has no injective
    // neighborhood
    FinSpace p = p9();
    auto collapse = ContinuousMap::constant(p, point_space(), 0);
    auto r = is_fdl_local_subset(collapse);
    CHECK(!r.holds);
    CHECK(r.bad_point.has_value());

    // non-diffuse input is rejected
    CHECK_THROWS_MATCHES(
        is_fdl_local_subset(ContinuousMap::constant(p, p, p.index_of("(m,m)"))), TopologyError,
        Catch::Matchers::Predicate<TopologyError>(
            [](const TopologyError& e) { return e.kind() == ErrorKind::NotDiffuse; }));
}

TEST_CASE("discreteness probe") {
    FinSpace t = line3();
    auto emb = ContinuousMap::inclusion(t, t.set_of({"l"}));
    auto v1 = discreteness_probe(emb, 3);
    CHECK(v1.separated);
    CHECK(v1.probe_discrete);

    auto u = disjoint_union({sierpinski(), sierpinski()});
    FinSpace s = sierpinski();
    std::vector<std::size_t> fold_values(u.total.size());
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < s.size(); ++i) fold_values[u.injections[j](i)] = i;
    auto fold = ContinuousMap::make(u.total, s, fold_values);
    auto v2 = discreteness_probe(fold, 3);
    CHECK(v2.separated);
    CHECK(v2.probe_discrete);

    // collapsing two comparable points in one fiber fails the separation part
    FinSpace chain = FinSpace::make({"a", "b", "c"},
                                    {{"a", {"a"}}, {"b", {"a", "b"}}, {"c", {"c"}}});
    FinSpace two = FinSpace::make({"p", "q"}, {{"p", {"p"}}, {"q", {"q"}}});
    auto collapse = ContinuousMap::make(chain, two, {0, 0, 1});
    auto v3 = discreteness_probe(collapse, 2);
    CHECK(!v3.separated);
    REQUIRE(v3.separation_witness.has_value());
}
