/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_TESTS_HELPERS_HH
#define FPP_TESTS_HELPERS_HH

#include <fpp/structure.hh>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace fpp::testing
{
    inline auto graph(std::size_t n, std::vector<std::pair<Element, Element>> edges) -> Structure
    {
        return encode_graph(n, edges);
    }

    inline auto digraph(std::size_t n, std::vector<std::pair<Element, Element>> arcs) -> Structure
    {
        return encode_digraph(n, arcs);
    }

    inline auto path(std::size_t n) -> Structure
    {
        std::vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i + 1 < n ; ++i)
            e.emplace_back(i, i + 1);
        return graph(n, e);
    }

    inline auto cycle(std::size_t n) -> Structure
    {
        std::vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i < n ; ++i)
            e.emplace_back(i, (i + 1) % n);
        return graph(n, e);
    }

    inline auto clique(std::size_t n) -> Structure
    {
        std::vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i < n ; ++i)
            for (Element j = i + 1 ; j < n ; ++j)
                e.emplace_back(i, j);
        return graph(n, e);
    }

    inline auto random_structure(std::mt19937_64 & rng, const Signature & sig, std::size_t n,
            double density, Colour vertex_colours = 1, Colour tuple_colours = 1) -> Structure
    {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        StructureBuilder b(sig, n);
        for (Element x = 0 ; x < n ; ++x)
            b.set_colour(x, std::uniform_int_distribution<Colour>(0, vertex_colours - 1)(rng));
        for (SymbolId s = 0 ; s < sig.size() ; ++s) {
            unsigned r = sig.symbol(s).arity;
            std::size_t total = 1;
            for (unsigned i = 0 ; i < r ; ++i)
                total *= n;
            std::vector<Element> t(r);
            for (std::size_t code = 0 ; code < total ; ++code) {
                std::size_t c = code;
                for (unsigned i = 0 ; i < r ; ++i) {
                    t[i] = c % n;
                    c /= n;
                }
                if (coin(rng) < density)
                    b.add(s, t, std::uniform_int_distribution<Colour>(0, tuple_colours - 1)(rng));
            }
        }
        return b.build();
    }

    // Calls f on every map from an a-element set to a b-element set.
    inline void for_each_map(std::size_t a, std::size_t b, const std::function<void (const std::vector<Element> &)> & f)
    {
        std::vector<Element> h(a, 0);
        if (a > 0 && b == 0)
            return;
        while (true) {
            f(h);
            std::size_t i = 0;
            while (i < a && ++h[i] == b)
                h[i++] = 0;
            if (i == a)
                return;
        }
    }

    // Independent of the library search: tests every map.
    inline auto brute_force_hom_exists(const Structure & a, const Structure & b, bool colours = true) -> bool
    {
        bool found = false;
        for_each_map(a.size(), b.size(), [&] (const std::vector<Element> & h) {
                if (found)
                    return;
                for (Element x = 0 ; x < a.size() ; ++x)
                    if (colours && a.vertex_colour(x) != b.vertex_colour(h[x]))
                        return;
                for (auto r : a.all_tuples()) {
                    std::vector<Element> img;
                    for (auto y : a.tuple(r))
                        img.push_back(h[y]);
                    auto t = b.find_tuple(r.symbol, img);
                    if (! t || (colours && b.tuple_colour(*t) != a.tuple_colour(r)))
                        return;
                }
                found = true;
                });
        return found;
    }

    inline auto brute_force_isomorphic(const Structure & a, const Structure & b) -> bool
    {
        if (a.size() != b.size() || a.tuple_count() != b.tuple_count())
            return false;
        std::vector<Element> p(a.size());
        std::iota(p.begin(), p.end(), 0);
        do {
            bool ok = true;
            for (Element x = 0 ; x < a.size() && ok ; ++x)
                ok = a.vertex_colour(x) == b.vertex_colour(p[x]);
            for (auto r : a.all_tuples()) {
                if (! ok)
                    break;
                std::vector<Element> img;
                for (auto y : a.tuple(r))
                    img.push_back(p[y]);
                auto t = b.find_tuple(r.symbol, img);
                ok = t && b.tuple_colour(*t) == a.tuple_colour(r);
            }
            if (ok)
                return true;
        } while (std::next_permutation(p.begin(), p.end()));
        return false;
    }
}

#endif
