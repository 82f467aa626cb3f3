/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/treedepth.hh>

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::vector;

namespace fpp
{
    RootedForest::RootedForest(vector<optional<Element>> parent) :
        _parent(std::move(parent))
    {
        for (Element x = 0 ; x < _parent.size() ; ++x) {
            if (_parent[x] && *_parent[x] >= _parent.size())
                throw FormatError("forest parent outside the node set");
            size_t steps = 0;
            for (auto y = _parent[x] ; y ; y = _parent[*y])
                if (++steps > _parent.size())
                    throw FormatError("forest parent relation has a cycle");
        }
    }

    auto RootedForest::roots() const -> vector<Element>
    {
        vector<Element> result;
        for (Element x = 0 ; x < _parent.size() ; ++x)
            if (! _parent[x])
                result.push_back(x);
        return result;
    }

    auto RootedForest::children(Element x) const -> vector<Element>
    {
        vector<Element> result;
        for (Element y = 0 ; y < _parent.size() ; ++y)
            if (_parent[y] == x)
                result.push_back(y);
        return result;
    }

    auto RootedForest::depth(Element x) const -> size_t
    {
        size_t d = 1;
        for (auto y = _parent[x] ; y ; y = _parent[*y])
            ++d;
        return d;
    }

    auto RootedForest::height() const -> size_t
    {
        size_t h = 0;
        for (Element x = 0 ; x < _parent.size() ; ++x)
            h = std::max(h, depth(x));
        return h;
    }

    auto RootedForest::is_ancestor(Element a, Element b) const -> bool
    {
        for (optional<Element> y = b ; y ; y = _parent[*y])
            if (*y == a)
                return true;
        return false;
    }

    auto RootedForest::subtree(Element x) const -> vector<Element>
    {
        vector<Element> result;
        for (Element y = 0 ; y < _parent.size() ; ++y)
            if (is_ancestor(x, y))
                result.push_back(y);
        return result;
    }

    auto closure(const RootedForest & f, const Signature & sig) -> Structure
    {
        StructureBuilder b(sig, f.size());
        for (SymbolId s = 0 ; s < sig.size() ; ++s) {
            unsigned r = sig.symbol(s).arity;
            vector<Element> t(r, 0);
            size_t n = f.size();
            if (r > 0 && n == 0)
                continue;
            while (true) {
                bool chain = true;
                for (unsigned i = 0 ; i < r && chain ; ++i)
                    for (unsigned j = i + 1 ; j < r && chain ; ++j)
                        chain = f.comparable(t[i], t[j]);
                if (chain)
                    b.add(s, t);
                unsigned i = 0;
                while (i < r && ++t[i] == n)
                    t[i++] = 0;
                if (i == r)
                    break;
            }
        }
        return b.build();
    }

    auto is_substructure_of(const Structure & s, const Structure & t) -> bool
    {
        if (s.size() != t.size() || ! (s.signature() == t.signature()))
            return false;
        for (auto r : s.all_tuples())
            if (! t.holds(r.symbol, s.tuple(r)))
                return false;
        return true;
    }

    namespace
    {
        // Components of the hypergraph on `nodes` after deleting `removed`,
        // using only tuples that lie entirely within nodes.
        auto components_without(const Structure & s, const vector<Element> & nodes, Element removed) -> vector<vector<Element>>
        {
            vector<bool> inside(s.size(), false);
            for (auto x : nodes)
                inside[x] = true;
            vector<int> comp(s.size(), -1);
            vector<vector<Element>> result;
            for (auto start : nodes) {
                if (start == removed || comp[start] != -1)
                    continue;
                vector<Element> c{ start };
                comp[start] = result.size();
                for (size_t i = 0 ; i < c.size() ; ++i)
                    for (auto r : s.incident(c[i])) {
                        auto t = s.tuple(r);
                        if (! std::all_of(t.begin(), t.end(), [&] (Element y) { return inside[y]; }))
                            continue;
                        for (auto y : t)
                            if (y != removed && comp[y] == -1) {
                                comp[y] = result.size();
                                c.push_back(y);
                            }
                    }
                result.push_back(std::move(c));
            }
            return result;
        }

        auto elimination(const Structure & s, const RootedForest & y, Element root, bool strict) -> bool
        {
            auto nodes = y.subtree(root);
            auto kids = y.children(root);
            auto comps = components_without(s, nodes, root);

            vector<optional<size_t>> owner(s.size());
            for (size_t k = 0 ; k < kids.size() ; ++k)
                for (auto x : y.subtree(kids[k]))
                    owner[x] = k;

            vector<size_t> used(kids.size(), 0);
            for (auto & c : comps) {
                auto k = owner[c.front()];
                for (auto x : c)
                    if (owner[x] != k)
                        return false;
                ++used[*k];
                if (strict && y.subtree(kids[*k]).size() != c.size())
                    return false;
            }
            if (strict && std::any_of(used.begin(), used.end(), [] (size_t u) { return u != 1; }))
                return false;

            for (auto k : kids)
                if (! elimination(s, y, k, strict))
                    return false;
            return true;
        }

        auto elimination_tree(const Structure & s, const RootedForest & y, bool strict) -> bool
        {
            if (y.size() != s.size())
                throw FormatError("elimination tree node set differs from the structure's domain");
            if (! is_connected(s))
                throw FormatError("elimination trees are defined for connected structures");
            auto roots = y.roots();
            if (roots.size() != 1)
                return false;
            return elimination(s, y, roots.front(), strict);
        }
    }

    auto is_elimination_tree(const Structure & s, const RootedForest & y) -> bool
    {
        return elimination_tree(s, y, false);
    }

    auto is_strict_elimination_tree(const Structure & s, const RootedForest & y) -> bool
    {
        return elimination_tree(s, y, true);
    }

    namespace
    {
        using Mask = std::uint32_t;

        struct TreeDepthSearch
        {
            vector<Mask> adjacency;
            vector<std::uint8_t> value;
            vector<std::int8_t> best_root;

            auto components_of(Mask set) const -> vector<Mask>
            {
                vector<Mask> result;
                while (set) {
                    Mask comp = set & -set, frontier = comp;
                    while (frontier) {
                        Mask next = 0;
                        for (Mask f = frontier ; f ; f &= f - 1)
                            next |= adjacency[std::countr_zero(f)];
                        next &= set & ~comp;
                        comp |= next;
                        frontier = next;
                    }
                    result.push_back(comp);
                    set &= ~comp;
                }
                return result;
            }

            auto td(Mask set) -> unsigned
            {
                if (set == 0)
                    return 0;
                if (value[set] != 0xff)
                    return value[set];
                auto comps = components_of(set);
                unsigned result = 0;
                if (comps.size() > 1) {
                    for (auto c : comps)
                        result = std::max(result, td(c));
                }
                else {
                    result = 1000;
                    for (Mask f = set ; f ; f &= f - 1) {
                        int v = std::countr_zero(f);
                        unsigned d = 1 + td(set & ~(Mask(1) << v));
                        if (d < result) {
                            result = d;
                            best_root[set] = v;
                        }
                    }
                }
                value[set] = result;
                return result;
            }

            void build(Mask set, optional<Element> parent, vector<optional<Element>> & out)
            {
                for (auto c : components_of(set)) {
                    td(c);
                    Element r = best_root[c];
                    out[r] = parent;
                    build(c & ~(Mask(1) << r), r, out);
                }
            }
        };
    }

    auto tree_depth(const Structure & s, size_t cap) -> TreeDepth
    {
        if (s.size() > cap || s.size() > 24)
            throw BudgetExceeded(fmt::format("tree-depth of a structure with {} elements exceeds the cap of {}", s.size(), cap));

        TreeDepthSearch search;
        auto adj = gaifman_adjacency(s);
        for (auto & n : adj) {
            Mask m = 0;
            for (auto y : n)
                m |= Mask(1) << y;
            search.adjacency.push_back(m);
        }
        Mask all = s.size() == 32 ? ~Mask(0) : (Mask(1) << s.size()) - 1;
        search.value.assign(size_t(1) << s.size(), 0xff);
        search.best_root.assign(size_t(1) << s.size(), -1);

        unsigned value = search.td(all);
        vector<optional<Element>> parent(s.size());
        search.build(all, std::nullopt, parent);
        return TreeDepth{ value, RootedForest{ std::move(parent) } };
    }

    namespace
    {
        // Calls f with each set of exactly k of the parts 0..q-1.
        void for_each_choice(size_t q, size_t k, const std::function<auto (const vector<size_t> &) -> bool> & f)
        {
            vector<size_t> pick(k);
            std::iota(pick.begin(), pick.end(), 0);
            if (k > q)
                return;
            while (true) {
                if (! f(pick))
                    return;
                size_t i = k;
                while (i > 0 && pick[i - 1] == q - k + i - 1)
                    --i;
                if (i == 0)
                    return;
                ++pick[i - 1];
                for (size_t j = i ; j < k ; ++j)
                    pick[j] = pick[j - 1] + 1;
            }
        }

        auto union_ok(const Structure & s, const Partition & parts, const vector<bool> & assigned,
                const vector<size_t> & chosen, size_t p, size_t cap) -> bool
        {
            vector<Element> members;
            for (Element x = 0 ; x < s.size() ; ++x)
                if (assigned[x] && std::find(chosen.begin(), chosen.end(), parts[x]) != chosen.end())
                    members.push_back(x);
            if (members.size() <= p)
                return true;
            return tree_depth(induced(s, members).structure, cap).value <= p;
        }
    }

    auto verify_ltd_partition(const Structure & s, const Partition & parts, size_t p, size_t cap) -> bool
    {
        if (parts.size() != s.size())
            throw FormatError("partition does not cover the domain");
        if (s.size() == 0)
            return true;
        size_t q = *std::max_element(parts.begin(), parts.end()) + 1;
        vector<bool> all(s.size(), true);
        bool ok = true;
        // Tree-depth cannot grow when passing to an induced substructure, so
        // the largest unions suffice.
        for_each_choice(q, std::min(p, q), [&] (const vector<size_t> & chosen) {
                ok = union_ok(s, parts, all, chosen, p, cap);
                return ok;
                });
        return ok;
    }

    auto find_ltd_partition(const Structure & s, size_t p, size_t q, size_t cap) -> optional<Partition>
    {
        if (q == 0)
            throw FormatError("partitions need at least one part");
        size_t n = s.size();
        Partition parts(n, 0);
        vector<bool> assigned(n, false);

        // Checks the unions that contain the part of x, among assigned elements.
        auto consistent = [&] (Element x, size_t used) -> bool {
            bool ok = true;
            size_t k = std::min(p, used);
            for_each_choice(used, k, [&] (const vector<size_t> & chosen) {
                    if (std::find(chosen.begin(), chosen.end(), parts[x]) == chosen.end())
                        return true;
                    ok = union_ok(s, parts, assigned, chosen, p, cap);
                    return ok;
                    });
            return ok;
        };

        // Exhaustive up to eight elements; above that the same search runs
        // under a node budget and gives up when it is spent.
        auto adj = gaifman_adjacency(s);
        std::uint64_t nodes = 0, budget = n <= 8 ? 0 : 200'000;
        bool spent = false;
        std::function<auto (Element, size_t) -> bool> rec = [&] (Element x, size_t used) -> bool {
            if (x == n)
                return true;
            vector<size_t> order;
            for (size_t c = 0 ; c < std::min(q, used + 1) ; ++c)
                if (std::none_of(adj[x].begin(), adj[x].end(), [&] (Element y) { return assigned[y] && parts[y] == c; }))
                    order.push_back(c);
            for (size_t c = 0 ; c < std::min(q, used + 1) ; ++c)
                if (std::find(order.begin(), order.end(), c) == order.end())
                    order.push_back(c);
            for (auto c : order) {
                if (budget && ++nodes > budget) {
                    spent = true;
                    return false;
                }
                parts[x] = c;
                assigned[x] = true;
                size_t now = std::max(used, c + 1);
                if (consistent(x, now) && rec(x + 1, now))
                    return true;
                assigned[x] = false;
                if (spent)
                    return false;
            }
            return false;
        };
        if (rec(0, 0))
            return parts;
        return std::nullopt;
    }

    namespace
    {
        auto loopless_symmetric_edges(const Structure & g) -> vector<std::pair<Element, Element>>
        {
            auto edges = decode_graph(g);
            for (auto [u, v] : edges)
                if (u == v)
                    throw FormatError("expected a loopless graph");
            return edges;
        }
    }

    auto grad(const Structure & g, size_t r, size_t cap) -> Fraction
    {
        if (g.size() > cap)
            throw BudgetExceeded(fmt::format("grad of a graph with {} vertices exceeds the cap of {}", g.size(), cap));
        auto edges = loopless_symmetric_edges(g);
        size_t n = g.size();
        vector<vector<bool>> adj(n, vector<bool>(n, false));
        for (auto [u, v] : edges)
            adj[u][v] = adj[v][u] = true;

        // Radius of the part within its own induced subgraph, if connected.
        auto radius_ok = [&] (const vector<Element> & part) -> bool {
            for (auto c : part) {
                vector<size_t> dist(n, SIZE_MAX);
                dist[c] = 0;
                vector<Element> queue{ c };
                for (size_t i = 0 ; i < queue.size() ; ++i)
                    for (auto y : part)
                        if (adj[queue[i]][y] && dist[y] == SIZE_MAX) {
                            dist[y] = dist[queue[i]] + 1;
                            queue.push_back(y);
                        }
                if (std::all_of(part.begin(), part.end(), [&] (Element y) { return dist[y] <= r; }))
                    return true;
            }
            return false;
        };

        Fraction best{ 0, 1 };
        // label[x] == 0 deletes x; otherwise x joins part label[x] - 1.
        vector<size_t> label(n, 0);
        std::function<void (size_t, size_t)> rec = [&] (size_t x, size_t used) {
            if (x == n) {
                if (used == 0)
                    return;
                vector<vector<Element>> partsv(used);
                for (Element y = 0 ; y < n ; ++y)
                    if (label[y])
                        partsv[label[y] - 1].push_back(y);
                for (auto & part : partsv)
                    if (! radius_ok(part))
                        return;
                vector<vector<bool>> joined(used, vector<bool>(used, false));
                std::uint64_t count = 0;
                for (auto [u, v] : edges)
                    if (label[u] && label[v] && label[u] != label[v] && ! joined[label[u] - 1][label[v] - 1]) {
                        joined[label[u] - 1][label[v] - 1] = joined[label[v] - 1][label[u] - 1] = true;
                        ++count;
                    }
                Fraction f{ count, used };
                if (best < f)
                    best = f;
                return;
            }
            for (size_t c = 0 ; c <= used + 1 ; ++c) {
                label[x] = c;
                rec(x + 1, std::max(used, c));
            }
        };
        rec(0, 0);

        auto g_ = std::gcd(best.numerator, best.denominator);
        if (best.numerator == 0)
            return Fraction{ 0, 1 };
        return Fraction{ best.numerator / g_, best.denominator / g_ };
    }

    auto sparse_orientation(const Structure & g, size_t k) -> optional<Orientation>
    {
        auto edges = loopless_symmetric_edges(g);
        size_t n = g.size();
        // head[e] is the endpoint edge e points into.
        vector<optional<Element>> head(edges.size());
        vector<vector<size_t>> owned(n);

        std::function<auto (size_t, vector<bool> &) -> bool> augment = [&] (size_t e, vector<bool> & seen) -> bool {
            for (auto v : { edges[e].first, edges[e].second }) {
                if (seen[v])
                    continue;
                seen[v] = true;
                if (owned[v].size() < k) {
                    owned[v].push_back(e);
                    head[e] = v;
                    return true;
                }
                for (size_t i = 0 ; i < owned[v].size() ; ++i) {
                    size_t other = owned[v][i];
                    if (augment(other, seen)) {
                        // other moved to its far end; e takes its slot at v.
                        owned[v][i] = e;
                        head[e] = v;
                        return true;
                    }
                }
            }
            return false;
        };

        for (size_t e = 0 ; e < edges.size() ; ++e) {
            vector<bool> seen(n, false);
            if (! augment(e, seen))
                return std::nullopt;
        }

        Orientation result;
        for (size_t e = 0 ; e < edges.size() ; ++e) {
            Element h = *head[e];
            Element t = h == edges[e].first ? edges[e].second : edges[e].first;
            result.emplace_back(t, h);
        }
        return result;
    }

    auto is_uniformly_k_sparse(const Structure & g, size_t k) -> bool
    {
        return sparse_orientation(g, k).has_value();
    }

    auto check_orientation(const Structure & g, size_t k, const Orientation & o) -> bool
    {
        auto edges = decode_graph(g);
        vector<std::pair<Element, Element>> seen;
        vector<size_t> in(g.size(), 0);
        for (auto [t, h] : o) {
            if (t >= g.size() || h >= g.size())
                return false;
            seen.emplace_back(std::min(t, h), std::max(t, h));
            ++in[h];
        }
        std::sort(seen.begin(), seen.end());
        if (seen != edges)
            return false;
        return std::all_of(in.begin(), in.end(), [&] (size_t d) { return d <= k; });
    }
}
