/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/enumerate.hh>
#include <fpp/generators.hh>
#include <fpp/mmsnp.hh>

#include <algorithm>
#include <set>

using std::optional;
using std::pair;
using std::size_t;
using std::vector;

namespace fpp
{
    auto degree_bounded_graphs(size_t b, size_t max_n) -> vector<Structure>
    {
        EnumerateOptions o;
        o.signature = digraph_signature();
        o.graphs = true;
        o.max_size = max_n;
        o.max_degree = b;
        o.degree_measure = DegreeMeasure::gaifman;
        return enumerate_structures(o);
    }

    auto random_degree_bounded_graph(Rng & rng, size_t n, size_t b) -> Structure
    {
        if (n > 2 && b < 2)
            throw FormatError("no connected graph with more than two vertices has degree at most 1");
        vector<size_t> deg(n, 0);
        std::set<pair<Element, Element>> edges;
        auto add = [&] (Element x, Element y) {
            edges.emplace(std::min(x, y), std::max(x, y));
            ++deg[x];
            ++deg[y];
        };

        for (Element v = 1 ; v < n ; ++v) {
            vector<Element> open;
            for (Element u = 0 ; u < v ; ++u)
                if (deg[u] < b)
                    open.push_back(u);
            // A path always leaves room, so open is never empty for b >= 2.
            add(open[std::uniform_int_distribution<size_t>(0, open.size() - 1)(rng)], v);
        }

        vector<pair<Element, Element>> extra;
        for (Element x = 0 ; x < n ; ++x)
            for (Element y = x + 1 ; y < n ; ++y)
                if (! edges.contains({ x, y }))
                    extra.emplace_back(x, y);
        std::shuffle(extra.begin(), extra.end(), rng);
        std::bernoulli_distribution keep(0.5);
        for (auto [x, y] : extra)
            if (deg[x] < b && deg[y] < b && keep(rng))
                add(x, y);

        vector<pair<Element, Element>> list(edges.begin(), edges.end());
        return encode_graph(n, list);
    }

    auto random_digraph(Rng & rng, size_t n, double density, bool loops) -> Structure
    {
        std::bernoulli_distribution coin(density);
        StructureBuilder b(digraph_signature(), n);
        for (Element x = 0 ; x < n ; ++x)
            for (Element y = 0 ; y < n ; ++y)
                if ((loops || x != y) && coin(rng))
                    b.add(0, { x, y });
        return b.build();
    }

    auto random_bounded_td(Rng & rng, const Signature & sig, size_t n, size_t td, double density) -> TdSample
    {
        if (td == 0 && n > 0)
            throw FormatError("tree-depth 0 only allows the empty structure");
        vector<optional<Element>> parent(n);
        vector<size_t> depth(n, 1);
        for (Element v = 1 ; v < n ; ++v) {
            vector<Element> open;
            for (Element u = 0 ; u < v ; ++u)
                if (depth[u] < td)
                    open.push_back(u);
            // One choice in open.size() + 1 starts a new tree.
            auto pick = std::uniform_int_distribution<size_t>(0, open.size())(rng);
            if (pick < open.size()) {
                parent[v] = open[pick];
                depth[v] = depth[open[pick]] + 1;
            }
        }
        RootedForest forest(parent);

        std::bernoulli_distribution coin(density);
        StructureBuilder b(sig, n);
        for (Element v = 0 ; v < n ; ++v) {
            vector<Element> chain{ v };
            for (auto u = parent[v] ; u ; u = parent[*u])
                chain.push_back(*u);
            // Tuples over the chain that use v, so each is offered once.
            for (SymbolId s = 0 ; s < sig.size() ; ++s) {
                unsigned r = sig.symbol(s).arity;
                if (r == 0)
                    continue;
                vector<size_t> digits(r, 0);
                while (true) {
                    vector<Element> t;
                    for (auto d : digits)
                        t.push_back(chain[d]);
                    if (std::find(t.begin(), t.end(), v) != t.end() && coin(rng))
                        b.add(s, t);
                    size_t i = 0;
                    while (i < r && ++digits[i] == chain.size())
                        digits[i++] = 0;
                    if (i == r)
                        break;
                }
            }
        }
        return TdSample{ b.build(), forest };
    }

    auto random_ltd_partitioned(Rng & rng, size_t n, size_t p, size_t q, double density) -> LtdSample
    {
        if (q == 0)
            throw FormatError("partitions need at least one part");
        Partition parts(n);
        for (auto & x : parts)
            x = std::uniform_int_distribution<size_t>(0, q - 1)(rng);

        vector<pair<Element, Element>> candidates;
        for (Element x = 0 ; x < n ; ++x)
            for (Element y = 0 ; y < n ; ++y)
                if (x != y)
                    candidates.emplace_back(x, y);
        std::shuffle(candidates.begin(), candidates.end(), rng);

        std::bernoulli_distribution coin(density);
        vector<pair<Element, Element>> arcs;
        for (auto & a : candidates) {
            if (! coin(rng))
                continue;
            arcs.push_back(a);
            if (! verify_ltd_partition(encode_digraph(n, arcs), parts, p))
                arcs.pop_back();
        }
        return LtdSample{ encode_digraph(n, arcs), parts };
    }

    auto random_tr_structure(Rng & rng, size_t n, double t_density, double r_density) -> Structure
    {
        std::bernoulli_distribution t(t_density), r(r_density);
        StructureBuilder b(tr_signature(), n);
        for (Element e = 0 ; e < n ; ++e)
            if (t(rng))
                b.add(0, { e });
        for (Element x = 0 ; x < n ; ++x)
            for (Element e = 0 ; e < n ; ++e)
                for (Element y = 0 ; y < n ; ++y)
                    if (r(rng))
                        b.add(1, { x, e, y });
        return b.build();
    }
}
