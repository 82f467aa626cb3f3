/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>
#include <fpp/enumerate.hh>

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

#include <fmt/core.h>

using std::size_t;
using std::vector;

namespace fpp
{
    auto degree_under(const Structure & s, Element x, DegreeMeasure measure) -> size_t
    {
        if (measure == DegreeMeasure::tuples)
            return degree(s, x);
        return gaifman_adjacency(s)[x].size();
    }

    auto max_degree_under(const Structure & s, DegreeMeasure measure) -> size_t
    {
        return measure == DegreeMeasure::tuples ? max_degree(s) : max_gaifman_degree(s);
    }

    namespace
    {
        struct Atom
        {
            SymbolId symbol;
            // One tuple, or the two arcs of an edge in graph mode.
            vector<vector<Element>> tuples;
        };

        auto atoms_for(const EnumerateOptions & o, Element n) -> vector<Atom>
        {
            vector<Atom> result;
            if (o.graphs) {
                for (Element u = 0 ; u < n ; ++u)
                    result.push_back(Atom{ 0, { { u, n }, { n, u } } });
                return result;
            }
            for (SymbolId s = 0 ; s < o.signature.size() ; ++s) {
                unsigned r = o.signature.symbol(s).arity;
                if (r == 0) {
                    if (n == 0)
                        result.push_back(Atom{ s, { {} } });
                    continue;
                }
                vector<Element> t(r, 0);
                while (true) {
                    if (std::find(t.begin(), t.end(), n) != t.end())
                        result.push_back(Atom{ s, { t } });
                    unsigned k = 0;
                    while (k < r && ++t[k] == n + 1)
                        t[k++] = 0;
                    if (k == r)
                        break;
                }
            }
            return result;
        }
    }

    auto enumerate_structures(const EnumerateOptions & o) -> vector<Structure>
    {
        if (o.graphs && (o.signature.size() != 1 || o.signature.symbol(0).arity != 2))
            throw FormatError("graph enumeration needs the signature {E/2}");
        bool grow_connected = o.connected && (o.graphs || o.signature.max_arity() <= 2);
        size_t candidates = 0;

        vector<Structure> level{ StructureBuilder(o.signature, 0).build() };
        vector<Structure> result;

        for (size_t n = 0 ; n < o.max_size ; ++n) {
            std::set<Code> seen;
            vector<std::pair<Code, Structure>> next;
            auto atoms = atoms_for(o, Element(n));

            for (auto & base : level) {
                auto base_adjacency = gaifman_adjacency(base);
                for (Colour c = 0 ; c < o.vertex_colours ; ++c) {
                    vector<size_t> tuple_degree(n + 1, 0);
                    vector<vector<Element>> adjacency(n + 1);
                    for (Element x = 0 ; x < n ; ++x) {
                        tuple_degree[x] = degree(base, x);
                        adjacency[x] = base_adjacency[x];
                    }
                    vector<std::pair<size_t, Colour>> chosen;

                    auto over = [&] (Element x) {
                        if (! o.max_degree)
                            return false;
                        size_t d = o.degree_measure == DegreeMeasure::tuples ? tuple_degree[x] : adjacency[x].size();
                        return d > *o.max_degree;
                    };

                    std::function<void (size_t)> choose = [&] (size_t i) {
                        if (i == atoms.size()) {
                            if (grow_connected && n > 0 && adjacency[n].empty())
                                return;
                            if (++candidates > o.budget)
                                throw BudgetExceeded(fmt::format("structure enumeration examined more than {} candidates", o.budget));
                            StructureBuilder b(o.signature, n + 1);
                            for (Element x = 0 ; x < n ; ++x)
                                b.set_colour(x, base.vertex_colour(x));
                            b.set_colour(n, c);
                            for (auto r : base.all_tuples())
                                b.add(r.symbol, base.tuple(r), base.tuple_colour(r));
                            for (auto [a, e] : chosen)
                                for (auto & t : atoms[a].tuples)
                                    b.add(atoms[a].symbol, t, e);
                            auto s = b.build();
                            if (o.keep && ! o.keep(s))
                                return;
                            auto form = canonical_form(s);
                            if (seen.insert(form.code).second)
                                next.emplace_back(form.code, permuted(s, form.order));
                            return;
                        }

                        choose(i + 1);

                        auto & atom = atoms[i];
                        vector<Element> touched;
                        for (auto & t : atom.tuples)
                            for (auto x : t)
                                if (std::find(touched.begin(), touched.end(), x) == touched.end())
                                    touched.push_back(x);
                        auto saved = adjacency;
                        for (auto x : touched) {
                            tuple_degree[x] += atom.tuples.size();
                            for (auto y : touched)
                                if (x != y && std::find(adjacency[x].begin(), adjacency[x].end(), y) == adjacency[x].end())
                                    adjacency[x].push_back(y);
                        }
                        bool ok = std::none_of(touched.begin(), touched.end(), over);
                        if (ok)
                            for (Colour e = 0 ; e < o.tuple_colours ; ++e) {
                                chosen.emplace_back(i, e);
                                choose(i + 1);
                                chosen.pop_back();
                            }
                        for (auto x : touched)
                            tuple_degree[x] -= atom.tuples.size();
                        adjacency = std::move(saved);
                    };

                    choose(0);
                }
            }

            std::sort(next.begin(), next.end(), [] (const auto & a, const auto & b) { return a.first < b.first; });
            level.clear();
            for (auto & [code, s] : next) {
                if (! o.connected || is_connected(s))
                    result.push_back(s);
                level.push_back(std::move(s));
            }
        }
        return result;
    }
}
