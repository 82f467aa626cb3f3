/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <doctest.h>

#include <fpp/canonical.hh>
#include <fpp/hom.hh>
#include <fpp/products.hh>

#include "helpers.hh"

using namespace fpp;
using namespace fpp::testing;

namespace
{
    // Rebuilds the tuple set of a truncated product from its elements by
    // testing every candidate tuple against the definition.
    auto direct_tuples(const Structure & cs, const TruncatedProduct & tp) -> std::vector<std::pair<TupleOccurrence, Colour>>
    {
        std::vector<std::pair<TupleOccurrence, Colour>> result;
        for (SymbolId sym = 0 ; sym < cs.signature().size() ; ++sym) {
            unsigned r = cs.signature().symbol(sym).arity;
            for_each_map(r, tp.coords.size(), [&] (const std::vector<Element> & w) {
                    std::optional<Colour> e;
                    for (std::size_t i = 0 ; i < tp.p ; ++i) {
                        bool free = true;
                        for (auto x : w)
                            if (tp.star_index[x] == i)
                                free = false;
                        if (! free)
                            continue;
                        std::vector<Element> t;
                        for (auto x : w)
                            t.push_back(tp.coords[x][i]);
                        auto ref = cs.find_tuple(sym, t);
                        if (! ref)
                            return;
                        if (e && *e != cs.tuple_colour(*ref))
                            return;
                        e = cs.tuple_colour(*ref);
                    }
                    result.emplace_back(TupleOccurrence{ sym, w }, e.value_or(0));
                    });
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    auto actual_tuples(const Structure & s) -> std::vector<std::pair<TupleOccurrence, Colour>>
    {
        std::vector<std::pair<TupleOccurrence, Colour>> result;
        for (auto r : s.all_tuples()) {
            auto t = s.tuple(r);
            result.emplace_back(TupleOccurrence{ r.symbol, { t.begin(), t.end() } }, s.tuple_colour(r));
        }
        std::sort(result.begin(), result.end());
        return result;
    }
}

TEST_CASE("classical product")
{
    auto k2 = clique(2);
    auto sq = product(k2, k2);
    CHECK(sq.size() == 4);
    CHECK(sq.tuple_count() == 4);
    CHECK(components(sq).size() == 2);
    for (auto & c : components(sq))
        CHECK(is_isomorphic(c.structure, k2));

    std::mt19937_64 rng(43);
    for (int i = 0 ; i < 60 ; ++i) {
        auto x = random_structure(rng, digraph_signature(), 1 + i % 4, 0.3);
        auto a = random_structure(rng, digraph_signature(), 1 + i % 3, 0.5);
        auto b = random_structure(rng, digraph_signature(), 1 + (i / 3) % 3, 0.5);
        bool both = find_hom(x, a).has_value() && find_hom(x, b).has_value();
        CHECK(find_hom(x, product(a, b)).has_value() == both);
    }
}

TEST_CASE("truncated product sizes")
{
    Signature e = digraph_signature();
    StructureBuilder single(e, 3);
    CHECK(truncated_product(single.build(), 2).carrier.size() == 6);

    StructureBuilder mixed(e, 3);
    mixed.set_colour(2, 1);
    auto m = mixed.build();
    CHECK(truncated_product_size(m, 3) == 15);
    auto tp = truncated_product(m, 3);
    CHECK(tp.carrier.size() == 15);

    std::vector<std::size_t> per_star(3, 0);
    for (Element w = 0 ; w < tp.coords.size() ; ++w) {
        ++per_star[tp.star_index[w]];
        std::size_t stars = 0;
        for (std::size_t k = 0 ; k < 3 ; ++k)
            if (tp.coords[w][k] == star)
                ++stars;
            else
                CHECK(m.vertex_colour(tp.coords[w][k]) == tp.carrier.vertex_colour(w));
        CHECK(stars == 1);
        CHECK(tp.coords[w][tp.star_index[w]] == star);
        CHECK(tp.find(tp.coords[w]) == w);
    }
    CHECK(per_star == std::vector<std::size_t>{ 5, 5, 5 });

    CHECK_THROWS_AS(truncated_product(m, 3, ProductOptions{ 14 }), BudgetExceeded);
    CHECK_THROWS_AS(truncated_product(m, 1), FormatError);
}

TEST_CASE("truncated product of a loop")
{
    auto loop = digraph(1, { { 0, 0 } });
    auto tp = truncated_product(loop, 3);
    CHECK(tp.carrier.size() == 3);
    // Two distinct star positions leave a free coordinate holding the loop;
    // equal star positions do as well.
    CHECK(tp.carrier.tuple_count() == 9);
    CHECK(tp.carrier.name(0) == "(*,0,0)");
}

TEST_CASE("truncated products agree with the definition")
{
    std::mt19937_64 rng(47);
    Signature sig{ { Symbol{ "E", 2 }, Symbol{ "U", 1 }, Symbol{ "R", 3 } } };
    for (int i = 0 ; i < 40 ; ++i) {
        auto cs = random_structure(rng, sig, 1 + i % 3, 0.3, 1 + i % 2, 1 + (i / 2) % 2);
        for (std::size_t p = 2 ; p <= 4 ; ++p) {
            if (truncated_product_size(cs, p) > 40)
                continue;
            auto tp = truncated_product(cs, p);
            CHECK(actual_tuples(tp.carrier) == direct_tuples(cs, tp));
        }
    }
}

TEST_CASE("coordinate projections are homomorphisms")
{
    std::mt19937_64 rng(53);
    Signature sig{ { Symbol{ "E", 2 }, Symbol{ "R", 3 } } };
    for (int i = 0 ; i < 40 ; ++i) {
        auto cs = random_structure(rng, sig, 1 + i % 4, 0.25, 1 + i % 2, 1 + (i / 2) % 2);
        for (std::size_t p = 2 ; p <= 4 ; ++p) {
            if (truncated_product_size(cs, p) > 200)
                continue;
            auto tp = truncated_product(cs, p);
            for (std::size_t i0 = 0 ; i0 < p ; ++i0) {
                auto proj = coordinate_projection(tp, i0);
                CHECK(check_hom(proj.domain.structure, cs, proj.map));
            }
        }
    }
}

TEST_CASE("assembling partial homomorphisms")
{
    std::mt19937_64 rng(59);
    auto k3 = clique(3);
    std::size_t assembled = 0;
    for (int i = 0 ; i < 100 ; ++i) {
        std::size_t n = 3 + i % 5, p = 3;
        std::vector<std::pair<Element, Element>> edges;
        std::bernoulli_distribution coin(0.4);
        for (Element u = 0 ; u < n ; ++u)
            for (Element v = u + 1 ; v < n ; ++v)
                if (coin(rng))
                    edges.emplace_back(u, v);
        auto s = graph(n, edges);
        std::vector<std::size_t> parts(n);
        for (auto & x : parts)
            x = std::uniform_int_distribution<std::size_t>(0, p - 1)(rng);

        std::vector<Hom> partial(p, Hom(n, 0));
        bool ok = true;
        for (std::size_t k = 0 ; k < p && ok ; ++k) {
            std::vector<Element> rest;
            for (Element x = 0 ; x < n ; ++x)
                if (parts[x] != k)
                    rest.push_back(x);
            auto sub = induced(s, rest);
            auto h = find_hom(sub.structure, k3);
            if (! h)
                ok = false;
            else
                for (std::size_t j = 0 ; j < rest.size() ; ++j)
                    partial[k][rest[j]] = (*h)[j];
        }
        if (! ok)
            continue;
        ++assembled;
        auto tp = truncated_product(k3, p);
        auto h = assemble_partial_homs(s, parts, partial, tp);
        CHECK(check_hom(s, tp.carrier, h));
    }
    CHECK(assembled > 20);
}

TEST_CASE("iterated truncated products")
{
    auto k2 = clique(2);
    auto stages = iterated_truncated_product(k2, 3, 4);
    REQUIRE(stages.size() == 2);
    CHECK(stages[0].carrier.size() == 3 * 4);
    CHECK(stages[1].carrier.size() == 4 * 12 * 12 * 12);
    CHECK(iterated_truncated_product(k2, 3, 2).empty());
    CHECK_THROWS_AS(iterated_truncated_product(k2, 3, 5), BudgetExceeded);
}
