/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <doctest.h>

#include <fpp/canonical.hh>
#include <fpp/enumerate.hh>

#include "helpers.hh"

using namespace fpp;
using namespace fpp::testing;

TEST_CASE("connected graphs")
{
    EnumerateOptions o;
    o.signature = digraph_signature();
    o.graphs = true;
    o.max_size = 5;
    auto gs = enumerate_structures(o);
    std::vector<std::size_t> counts(6, 0);
    for (auto & g : gs) {
        CHECK(is_connected(g));
        ++counts[g.size()];
    }
    CHECK(counts == std::vector<std::size_t>{ 0, 1, 1, 2, 6, 21 });

    for (std::size_t i = 0 ; i < gs.size() ; ++i)
        for (std::size_t j = i + 1 ; j < gs.size() && gs[j].size() == gs[i].size() ; ++j)
            CHECK(! brute_force_isomorphic(gs[i], gs[j]));
}

TEST_CASE("paths and cycles")
{
    EnumerateOptions o;
    o.signature = digraph_signature();
    o.graphs = true;
    o.max_size = 8;
    o.max_degree = 2;
    o.degree_measure = DegreeMeasure::gaifman;
    auto gs = enumerate_structures(o);
    // One path per size, and a cycle for each size from 3.
    CHECK(gs.size() == 14);
    std::size_t cycles = 0;
    for (auto & g : gs) {
        CHECK(max_degree_under(g, DegreeMeasure::gaifman) <= 2);
        if (g.size() >= 3 && is_isomorphic(g, cycle(g.size())))
            ++cycles;
        else
            CHECK(is_isomorphic(g, path(g.size())));
    }
    CHECK(cycles == 6);
}

TEST_CASE("digraphs with loops")
{
    EnumerateOptions o;
    o.signature = digraph_signature();
    o.max_size = 2;
    auto ds = enumerate_structures(o);
    std::size_t two = 0;
    for (auto & d : ds)
        if (d.size() == 2)
            ++two;
    // Arc sets on two vertices joining them, up to swapping the vertices.
    CHECK(two == 7);
    CHECK(ds.size() == 2 + 7);
}

TEST_CASE("colours, degree and hereditary filters")
{
    EnumerateOptions o;
    o.signature = digraph_signature();
    o.graphs = true;
    o.max_size = 3;
    o.vertex_colours = 2;
    auto gs = enumerate_structures(o);
    // Sizes 1, 2, 3: two single vertices, three coloured edges, and
    // six coloured paths plus four coloured triangles.
    CHECK(gs.size() == 2 + 3 + 10);

    o.vertex_colours = 1;
    o.max_size = 6;
    o.keep = [] (const Structure & s) { return s.tuple_count() <= 6; };
    for (auto & g : enumerate_structures(o))
        CHECK(g.tuple_count() <= 6);

    EnumerateOptions t;
    t.signature = Signature{ { Symbol{ "R", 3 } } };
    t.max_size = 3;
    t.max_degree = 1;
    for (auto & s : enumerate_structures(t)) {
        CHECK(max_degree(s) <= 1);
        CHECK(is_connected(s));
    }

    EnumerateOptions tiny = o;
    tiny.keep = nullptr;
    tiny.budget = 10;
    CHECK_THROWS_AS(enumerate_structures(tiny), BudgetExceeded);
}
