/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <doctest.h>

#include <fpp/hom.hh>
#include <fpp/problem.hh>

#include "helpers.hh"

using namespace fpp;
using namespace fpp::testing;

namespace
{
    // Every colouring, every pattern, every map.
    auto naive_fpp(const Structure & s, const Problem & p) -> bool
    {
        auto tuples = s.all_tuples();
        std::size_t nv = p.vertex_palette().size(), ne = p.edge_palette().size();
        bool yes = false;
        for_each_map(s.size(), nv, [&] (const std::vector<Element> & vc) {
                if (yes)
                    return;
                for_each_map(tuples.size(), ne, [&] (const std::vector<Element> & tc) {
                        if (yes)
                            return;
                        auto cs = recoloured(s, std::vector<Colour>(vc.begin(), vc.end()), std::vector<Colour>(tc.begin(), tc.end()));
                        for (auto & f : p.patterns())
                            if (brute_force_hom_exists(f, cs))
                                return;
                        yes = true;
                        });
                });
        return yes;
    }

    auto all_graphs(std::size_t n) -> std::vector<Structure>
    {
        std::vector<std::pair<Element, Element>> pairs;
        for (Element i = 0 ; i < n ; ++i)
            for (Element j = i + 1 ; j < n ; ++j)
                pairs.emplace_back(i, j);
        std::vector<Structure> result;
        for (unsigned mask = 0 ; mask < (1u << pairs.size()) ; ++mask) {
            std::vector<std::pair<Element, Element>> e;
            for (std::size_t k = 0 ; k < pairs.size() ; ++k)
                if (mask & (1u << k))
                    e.push_back(pairs[k]);
            result.push_back(encode_graph(n, e));
        }
        return result;
    }

    auto has_triangle(const std::vector<std::vector<bool>> & adj) -> bool
    {
        std::size_t n = adj.size();
        for (std::size_t a = 0 ; a < n ; ++a)
            for (std::size_t b = a + 1 ; b < n ; ++b)
                for (std::size_t c = b + 1 ; c < n ; ++c)
                    if (adj[a][b] && adj[b][c] && adj[a][c])
                        return true;
        return false;
    }

    auto matrix(const Structure & g) -> std::vector<std::vector<bool>>
    {
        std::vector<std::vector<bool>> adj(g.size(), std::vector<bool>(g.size(), false));
        for (auto [u, v] : decode_graph(g))
            adj[u][v] = adj[v][u] = true;
        return adj;
    }

    auto direct_vertex_no_mono_tri(const Structure & g) -> bool
    {
        auto adj = matrix(g);
        std::size_t n = g.size();
        for (unsigned mask = 0 ; mask < (1u << n) ; ++mask) {
            bool ok = true;
            for (std::size_t a = 0 ; a < n && ok ; ++a)
                for (std::size_t b = a + 1 ; b < n && ok ; ++b)
                    for (std::size_t c = b + 1 ; c < n && ok ; ++c)
                        if (adj[a][b] && adj[b][c] && adj[a][c]
                                && ((mask >> a) & 1) == ((mask >> b) & 1) && ((mask >> b) & 1) == ((mask >> c) & 1))
                            ok = false;
            if (ok)
                return true;
        }
        return false;
    }

    auto direct_edge_no_mono_tri(const Structure & g) -> bool
    {
        auto edges = decode_graph(g);
        auto adj = matrix(g);
        std::size_t n = g.size();
        for (unsigned mask = 0 ; mask < (1u << edges.size()) ; ++mask) {
            std::vector<std::vector<int>> col(n, std::vector<int>(n, -1));
            for (std::size_t k = 0 ; k < edges.size() ; ++k)
                col[edges[k].first][edges[k].second] = col[edges[k].second][edges[k].first] = (mask >> k) & 1;
            bool ok = true;
            for (std::size_t a = 0 ; a < n && ok ; ++a)
                for (std::size_t b = a + 1 ; b < n && ok ; ++b)
                    for (std::size_t c = b + 1 ; c < n && ok ; ++c)
                        if (adj[a][b] && adj[b][c] && adj[a][c] && col[a][b] == col[b][c] && col[b][c] == col[a][c])
                            ok = false;
            if (ok)
                return true;
        }
        return false;
    }

    auto direct_tri_free_tri(const Structure & g) -> bool
    {
        auto adj = matrix(g);
        if (has_triangle(adj))
            return false;
        return brute_force_hom_exists(g, clique(3), false);
    }
}

TEST_CASE("builtin problem shapes")
{
    auto v = builtin_problem("vertex-no-mono-tri");
    CHECK(v.vertex_palette().size() == 2);
    CHECK(v.edge_palette().size() == 1);
    CHECK(v.patterns().size() == 2);

    auto e = builtin_problem("edge-no-mono-tri");
    CHECK(e.vertex_palette().size() == 1);
    CHECK(e.edge_palette().size() == 2);
    CHECK(e.patterns().size() == 3);

    auto t = builtin_problem("tri-free-tri");
    CHECK(t.vertex_palette().size() == 3);
    CHECK(t.patterns().size() == 13);

    CHECK_THROWS_AS(builtin_problem("nope"), FormatError);
}

TEST_CASE("is_valid examples")
{
    auto p = builtin_problem("vertex-no-mono-tri");
    CHECK(! is_valid(symmetric_triangle(1, 1, 1), p));
    CHECK(is_valid(symmetric_triangle(1, 1, 0), p));
    CHECK(is_valid(cycle(5), p));
    CHECK_THROWS_AS(is_valid(symmetric_triangle(2, 2, 2), p), FormatError);
}

TEST_CASE("decide_fpp on cliques and cycles")
{
    auto v = builtin_problem("vertex-no-mono-tri");
    CHECK(decide_fpp(clique(4), v));
    CHECK(! decide_fpp(clique(5), v));

    auto e = builtin_problem("edge-no-mono-tri");
    CHECK(decide_fpp(clique(5), e));
    CHECK(! decide_fpp(clique(6), e));

    auto t = builtin_problem("tri-free-tri");
    CHECK(decide_fpp(cycle(5), t));
    CHECK(decide_fpp(cycle(7), t));
    CHECK(! decide_fpp(clique(3), t));
}

TEST_CASE("builtins agree with their direct definitions on graphs up to five vertices")
{
    auto v = builtin_problem("vertex-no-mono-tri");
    auto e = builtin_problem("edge-no-mono-tri");
    auto t = builtin_problem("tri-free-tri");
    for (std::size_t n = 1 ; n <= 5 ; ++n)
        for (auto & g : all_graphs(n)) {
            auto wv = decide_fpp(g, v);
            CHECK(wv.has_value() == direct_vertex_no_mono_tri(g));
            if (wv)
                CHECK(is_valid(*wv, v));
            auto we = decide_fpp(g, e);
            CHECK(we.has_value() == direct_edge_no_mono_tri(g));
            if (we)
                CHECK(is_valid(*we, e));
            auto wt = decide_fpp(g, t);
            CHECK(wt.has_value() == direct_tri_free_tri(g));
            if (wt)
                CHECK(is_valid(*wt, t));
        }
}

TEST_CASE("decide_fpp agrees with the naive double loop on small structures")
{
    std::mt19937_64 rng(23);
    Signature sig = digraph_signature();
    std::vector<Problem> problems{ builtin_problem("vertex-no-mono-tri"), builtin_problem("edge-no-mono-tri") };
    for (int i = 0 ; i < 12 ; ++i) {
        std::vector<Structure> patterns;
        for (int j = 0 ; j < 2 ; ++j) {
            auto f = random_structure(rng, sig, 1 + (i + j) % 3, 0.5, 2, 2);
            if (is_connected(f))
                patterns.push_back(f);
        }
        problems.emplace_back(sig, Palette{ "a", "b" }, Palette{ "x", "y" }, patterns);
    }

    for (auto & p : problems)
        for (int i = 0 ; i < 25 ; ++i) {
            auto s = random_structure(rng, sig, 1 + i % 4, 0.35);
            if (s.tuple_count() > 7)
                continue;
            auto w = decide_fpp(s, p);
            CHECK(w.has_value() == naive_fpp(s, p));
            if (w)
                CHECK(is_valid(*w, p));
        }
}

TEST_CASE("closure under inverse homomorphism and disjoint union")
{
    std::mt19937_64 rng(29);
    auto p = builtin_problem("vertex-no-mono-tri");
    auto e = builtin_problem("edge-no-mono-tri");
    Signature sig = digraph_signature();
    for (int i = 0 ; i < 200 ; ++i) {
        auto a = random_structure(rng, sig, 1 + i % 4, 0.4);
        auto b = random_structure(rng, sig, 1 + (i / 3) % 4, 0.6);
        for (auto * q : { &p, &e }) {
            if (find_hom(a, b) && decide_fpp(b, *q))
                CHECK(decide_fpp(a, *q));
            bool both = decide_fpp(a, *q) && decide_fpp(b, *q);
            CHECK(decide_fpp(disjoint_union(a, b), *q).has_value() == both);
        }
    }
}

TEST_CASE("params")
{
    auto v = builtin_problem("vertex-no-mono-tri");
    CHECK(params(v).m == 1);
    CHECK(params(v).p == 3);

    Problem arc(digraph_signature(), { "0" }, { "0" }, { digraph(2, { { 0, 1 } }) });
    CHECK(params(arc).m == 1);
    CHECK(params(arc).p == 2);

    Problem none(digraph_signature(), { "0" }, { "0" }, {});
    CHECK(params(none).m == 0);
    CHECK(params(none).p == 0);
}

TEST_CASE("isomorphic patterns are merged and disconnected ones rejected")
{
    Problem p(digraph_signature(), { "0" }, { "0" }, { digraph(2, { { 0, 1 } }), digraph(2, { { 1, 0 } }) });
    CHECK(p.patterns().size() == 1);
    CHECK_THROWS_AS(Problem(digraph_signature(), { "0" }, { "0" }, { digraph(2, {}) }), FormatError);
}

TEST_CASE("decide_fpp budget")
{
    CHECK_THROWS_AS(decide_fpp(clique(6), builtin_problem("edge-no-mono-tri"), FppOptions{ 100 }), BudgetExceeded);
}
