/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <doctest.h>

#include <fpp/canonical.hh>
#include <fpp/hom.hh>

#include "helpers.hh"

using namespace fpp;
using namespace fpp::testing;

TEST_CASE("small homomorphism facts")
{
    CHECK(find_hom(cycle(5), clique(3)));
    CHECK(! find_hom(clique(3), cycle(5)));
    CHECK(find_hom(path(4), clique(2)));
    CHECK(! find_hom(clique(4), clique(3)));
    CHECK(find_hom(cycle(6), clique(2)));
    CHECK(! find_hom(cycle(7), clique(2)));
}

TEST_CASE("find_hom agrees with brute force")
{
    std::mt19937_64 rng(3);
    Signature sig{ { Symbol{ "E", 2 }, Symbol{ "U", 1 } } };
    for (int i = 0 ; i < 400 ; ++i) {
        auto a = random_structure(rng, sig, 1 + i % 4, 0.25, 2, 2);
        auto b = random_structure(rng, sig, 1 + (i / 4) % 4, 0.45, 2, 2);
        auto h = find_hom(a, b);
        CHECK(h.has_value() == brute_force_hom_exists(a, b));
        if (h)
            CHECK(check_hom(a, b, *h));
        auto hu = find_hom(a, b, HomOptions{ ColourMode::ignore, 0, {} });
        CHECK(hu.has_value() == brute_force_hom_exists(a, b, false));
    }
}

TEST_CASE("ternary relations")
{
    std::mt19937_64 rng(5);
    Signature sig{ { Symbol{ "R", 3 } } };
    for (int i = 0 ; i < 200 ; ++i) {
        auto a = random_structure(rng, sig, 1 + i % 4, 0.08);
        auto b = random_structure(rng, sig, 1 + (i / 4) % 3, 0.3);
        CHECK(find_hom(a, b).has_value() == brute_force_hom_exists(a, b));
    }
}

TEST_CASE("enumeration counts")
{
    // Proper 3-colourings of a path on three vertices: 3 * 2 * 2.
    CHECK(enumerate_homs(path(3), clique(3)).size() == 12);
    CHECK(enumerate_homs(path(3), clique(3), 5).size() == 5);
    CHECK_THROWS_AS(enumerate_homs(path(12), clique(5), 0, HomOptions{ ColourMode::preserve, 1000, {} }), BudgetExceeded);
}

TEST_CASE("check_hom rejects non-homomorphisms")
{
    CHECK(check_hom(path(2), clique(2), Hom{ 0, 1 }));
    CHECK(! check_hom(path(2), clique(2), Hom{ 0, 0 }));
    CHECK(! check_hom(path(2), clique(2), Hom{ 0 }));
}

TEST_CASE("search budget")
{
    CHECK_THROWS_AS(find_hom(clique(7), clique(6), HomOptions{ ColourMode::preserve, 50, {} }), BudgetExceeded);
}

TEST_CASE("cores of familiar graphs")
{
    CHECK(core(cycle(6)).core.size() == 2);
    CHECK(core(cycle(5)).core.size() == 5);
    CHECK(core(path(5)).core.size() == 2);
    CHECK(core(disjoint_union(clique(3), cycle(5))).core.size() == 3);
    CHECK(is_core(clique(4)));
}

TEST_CASE("core properties on random coloured graphs")
{
    std::mt19937_64 rng(17);
    Signature sig = digraph_signature();
    for (int i = 0 ; i < 150 ; ++i) {
        auto s = random_structure(rng, sig, 1 + i % 5, 0.3, 2, 2);
        auto c = core(s);
        CHECK(check_hom(s, c.core, c.retraction));
        CHECK(check_hom(c.core, s, c.inclusion));
        CHECK(induced(s, c.inclusion).structure.same_as(c.core));
        CHECK(is_core(c.core));
        CHECK(core(c.core).core.size() == c.core.size());
        // Any core hom-equivalent to s is isomorphic to c.core.
        std::vector<Element> order(s.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        auto c2 = core(permuted(s, order));
        CHECK(is_isomorphic(c.core, c2.core));
    }
}
