/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/structure.hh>

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::span;
using std::string;
using std::vector;

namespace fpp
{
    Signature::Signature(vector<Symbol> symbols) :
        _symbols(std::move(symbols))
    {
        std::set<string> seen;
        for (auto & s : _symbols) {
            if (s.name.empty())
                throw FormatError("relation symbol with empty name");
            if (! seen.insert(s.name).second)
                throw FormatError(fmt::format("duplicate relation symbol '{}'", s.name));
        }
    }

    auto Signature::find(std::string_view name) const -> optional<SymbolId>
    {
        for (SymbolId i = 0 ; i < _symbols.size() ; ++i)
            if (_symbols[i].name == name)
                return i;
        return std::nullopt;
    }

    auto Signature::max_arity() const -> unsigned
    {
        unsigned r = 0;
        for (auto & s : _symbols)
            r = std::max(r, s.arity);
        return r;
    }

    auto digraph_signature() -> Signature
    {
        return Signature{ { Symbol{ "E", 2 } } };
    }

    auto Relation::find(span<const Element> t) const -> optional<std::uint32_t>
    {
        if (t.size() != _arity)
            return std::nullopt;
        if (_arity == 0)
            return size() ? optional<std::uint32_t>{ 0 } : std::nullopt;

        size_t lo = 0, hi = size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            auto m = tuple(mid);
            auto c = std::lexicographical_compare_three_way(m.begin(), m.end(), t.begin(), t.end());
            if (c == 0)
                return std::uint32_t(mid);
            else if (c < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return std::nullopt;
    }

    auto Structure::find_tuple(SymbolId s, span<const Element> t) const -> optional<TupleRef>
    {
        if (auto i = _relations[s].find(t))
            return TupleRef{ s, *i };
        return std::nullopt;
    }

    auto Structure::tuple_count() const -> size_t
    {
        size_t n = 0;
        for (auto & r : _relations)
            n += r.size();
        return n;
    }

    auto Structure::all_tuples() const -> vector<TupleRef>
    {
        vector<TupleRef> result;
        for (SymbolId s = 0 ; s < _relations.size() ; ++s)
            for (std::uint32_t i = 0 ; i < _relations[s].size() ; ++i)
                result.push_back(TupleRef{ s, i });
        return result;
    }

    auto Structure::name(Element e) const -> string
    {
        if (_names.empty())
            return std::to_string(e);
        return _names[e];
    }

    auto Structure::find_name(std::string_view n) const -> optional<Element>
    {
        for (Element e = 0 ; e < _size ; ++e)
            if (name(e) == n)
                return e;
        return std::nullopt;
    }

    auto Structure::is_uncoloured() const -> bool
    {
        for (auto c : _vertex_colours)
            if (c != 0)
                return false;
        for (auto & r : _relations)
            for (auto c : r._colours)
                if (c != 0)
                    return false;
        return true;
    }

    auto Structure::uncoloured() const -> Structure
    {
        Structure result = *this;
        std::fill(result._vertex_colours.begin(), result._vertex_colours.end(), 0);
        for (auto & r : result._relations)
            std::fill(r._colours.begin(), r._colours.end(), 0);
        return result;
    }

    auto Structure::with_names(vector<string> names) const -> Structure
    {
        if (names.size() != _size)
            throw FormatError("wrong number of element names");
        Structure result = *this;
        result._names = std::move(names);
        return result;
    }

    auto Structure::without_names() const -> Structure
    {
        Structure result = *this;
        result._names.clear();
        return result;
    }

    auto Structure::same_as(const Structure & other) const -> bool
    {
        if (_size != other._size || ! (_signature == other._signature) || _vertex_colours != other._vertex_colours)
            return false;
        for (size_t s = 0 ; s < _relations.size() ; ++s)
            if (_relations[s]._flat != other._relations[s]._flat || _relations[s]._colours != other._relations[s]._colours)
                return false;
        return true;
    }

    StructureBuilder::StructureBuilder(Signature sig, size_t size) :
        _signature(std::move(sig)),
        _size(size),
        _vertex_colours(size, 0)
    {
    }

    auto StructureBuilder::add_element(Colour c) -> Element
    {
        _vertex_colours.push_back(c);
        return Element(_size++);
    }

    void StructureBuilder::set_colour(Element e, Colour c)
    {
        _vertex_colours.at(e) = c;
    }

    void StructureBuilder::set_names(vector<string> names)
    {
        _names = std::move(names);
    }

    void StructureBuilder::add(SymbolId s, span<const Element> t, Colour c)
    {
        if (s >= _signature.size())
            throw FormatError("unknown relation symbol");
        if (t.size() != _signature.symbol(s).arity)
            throw FormatError(fmt::format("tuple of length {} for symbol '{}' of arity {}",
                        t.size(), _signature.symbol(s).name, _signature.symbol(s).arity));
        for (auto e : t)
            if (e >= _size)
                throw FormatError("tuple mentions an element outside the domain");
        _pending.push_back(Pending{ s, vector<Element>(t.begin(), t.end()), c });
    }

    auto StructureBuilder::build() const -> Structure
    {
        if (! _names.empty() && _names.size() != _size)
            throw FormatError("wrong number of element names");

        Structure result;
        result._signature = _signature;
        result._size = _size;
        result._vertex_colours = _vertex_colours;
        result._names = _names;
        result._incident.resize(_size);

        vector<const Pending *> order;
        order.reserve(_pending.size());
        for (auto & p : _pending)
            order.push_back(&p);
        std::sort(order.begin(), order.end(), [] (const Pending * a, const Pending * b) {
                return std::tie(a->symbol, a->tuple) < std::tie(b->symbol, b->tuple);
                });

        for (SymbolId s = 0 ; s < _signature.size() ; ++s)
            result._relations.emplace_back(_signature.symbol(s).arity);

        const Pending * prev = nullptr;
        for (auto p : order) {
            if (prev && prev->symbol == p->symbol && prev->tuple == p->tuple) {
                if (prev->colour != p->colour)
                    throw FormatError(fmt::format("tuple of '{}' given two different colours", _signature.symbol(p->symbol).name));
                continue;
            }
            auto & rel = result._relations[p->symbol];
            rel._flat.insert(rel._flat.end(), p->tuple.begin(), p->tuple.end());
            rel._colours.push_back(p->colour);
            prev = p;
        }

        for (SymbolId s = 0 ; s < result._relations.size() ; ++s) {
            auto & rel = result._relations[s];
            for (std::uint32_t i = 0 ; i < rel.size() ; ++i) {
                auto t = rel.tuple(i);
                for (size_t j = 0 ; j < t.size() ; ++j)
                    if (std::find(t.begin(), t.begin() + j, t[j]) == t.begin() + j)
                        result._incident[t[j]].push_back(TupleRef{ s, i });
            }
        }

        return result;
    }

    auto tuple_set(const Structure & s) -> vector<TupleOccurrence>
    {
        vector<TupleOccurrence> result;
        for (auto r : s.all_tuples()) {
            auto t = s.tuple(r);
            result.push_back(TupleOccurrence{ r.symbol, vector<Element>(t.begin(), t.end()) });
        }
        return result;
    }

    auto gaifman_adjacency(const Structure & s) -> vector<vector<Element>>
    {
        vector<vector<Element>> adj(s.size());
        for (Element x = 0 ; x < s.size() ; ++x) {
            for (auto r : s.incident(x))
                for (auto y : s.tuple(r))
                    if (y != x)
                        adj[x].push_back(y);
            std::sort(adj[x].begin(), adj[x].end());
            adj[x].erase(std::unique(adj[x].begin(), adj[x].end()), adj[x].end());
        }
        return adj;
    }

    auto gaifman(const Structure & s) -> Structure
    {
        StructureBuilder b(digraph_signature(), s.size());
        auto adj = gaifman_adjacency(s);
        for (Element x = 0 ; x < s.size() ; ++x)
            for (auto y : adj[x])
                b.add(0, { x, y });
        if (s.has_names())
            b.set_names(s.names());
        return b.build();
    }

    auto induced(const Structure & s, span<const Element> subset) -> Substructure
    {
        vector<Element> origin(subset.begin(), subset.end());
        std::unordered_map<Element, std::uint32_t> where;
        for (size_t i = 0 ; i < origin.size() ; ++i) {
            if (origin[i] >= s.size())
                throw FormatError("induced substructure on an element outside the domain");
            if (! where.emplace(origin[i], i).second)
                throw FormatError("induced substructure on a repeated element");
        }

        StructureBuilder b(s.signature(), origin.size());
        for (size_t i = 0 ; i < origin.size() ; ++i)
            b.set_colour(i, s.vertex_colour(origin[i]));

        vector<Element> buf;
        for (size_t i = 0 ; i < origin.size() ; ++i) {
            for (auto r : s.incident(origin[i])) {
                auto t = s.tuple(r);
                buf.clear();
                bool inside = true, first = true;
                for (auto y : t) {
                    auto w = where.find(y);
                    if (w == where.end()) {
                        inside = false;
                        break;
                    }
                    buf.push_back(w->second);
                }
                // Add each tuple once, from its smallest local element.
                if (inside)
                    for (auto y : buf)
                        if (y < i)
                            first = false;
                if (inside && first)
                    b.add(r.symbol, buf, s.tuple_colour(r));
            }
        }

        if (s.has_names()) {
            vector<string> names;
            for (auto o : origin)
                names.push_back(s.name(o));
            b.set_names(std::move(names));
        }

        return Substructure{ b.build(), std::move(origin) };
    }

    auto components(const Structure & s) -> vector<Substructure>
    {
        auto adj = gaifman_adjacency(s);
        vector<bool> seen(s.size(), false);
        vector<Substructure> result;
        for (Element start = 0 ; start < s.size() ; ++start) {
            if (seen[start])
                continue;
            vector<Element> comp{ start };
            seen[start] = true;
            for (size_t i = 0 ; i < comp.size() ; ++i)
                for (auto y : adj[comp[i]])
                    if (! seen[y]) {
                        seen[y] = true;
                        comp.push_back(y);
                    }
            std::sort(comp.begin(), comp.end());
            result.push_back(induced(s, comp));
        }
        return result;
    }

    auto is_connected(const Structure & s) -> bool
    {
        if (s.size() == 0)
            return false;
        auto d = distances_from(s, 0);
        return std::none_of(d.begin(), d.end(), [] (size_t x) { return x == std::numeric_limits<size_t>::max(); });
    }

    auto disjoint_union(const Structure & a, const Structure & b) -> Structure
    {
        if (! (a.signature() == b.signature()))
            throw FormatError("disjoint union of structures over different signatures");
        StructureBuilder u(a.signature(), a.size() + b.size());
        for (Element x = 0 ; x < a.size() ; ++x)
            u.set_colour(x, a.vertex_colour(x));
        for (Element x = 0 ; x < b.size() ; ++x)
            u.set_colour(a.size() + x, b.vertex_colour(x));
        for (auto r : a.all_tuples())
            u.add(r.symbol, a.tuple(r), a.tuple_colour(r));
        vector<Element> buf;
        for (auto r : b.all_tuples()) {
            buf.clear();
            for (auto y : b.tuple(r))
                buf.push_back(y + a.size());
            u.add(r.symbol, buf, b.tuple_colour(r));
        }
        return u.build();
    }

    auto degree(const Structure & s, Element x) -> size_t
    {
        return s.incident(x).size();
    }

    auto max_degree(const Structure & s) -> size_t
    {
        size_t d = 0;
        for (Element x = 0 ; x < s.size() ; ++x)
            d = std::max(d, degree(s, x));
        return d;
    }

    auto max_gaifman_degree(const Structure & s) -> size_t
    {
        size_t d = 0;
        for (auto & n : gaifman_adjacency(s))
            d = std::max(d, n.size());
        return d;
    }

    auto distances_from(const Structure & s, Element x) -> vector<size_t>
    {
        vector<size_t> dist(s.size(), std::numeric_limits<size_t>::max());
        std::deque<Element> queue{ x };
        dist[x] = 0;
        while (! queue.empty()) {
            auto u = queue.front();
            queue.pop_front();
            for (auto r : s.incident(u))
                for (auto y : s.tuple(r))
                    if (dist[y] == std::numeric_limits<size_t>::max()) {
                        dist[y] = dist[u] + 1;
                        queue.push_back(y);
                    }
        }
        return dist;
    }

    auto diameter(const Structure & s) -> size_t
    {
        if (! is_connected(s))
            throw FormatError("diameter of a disconnected or empty structure");
        size_t d = 0;
        for (Element x = 0 ; x < s.size() ; ++x)
            for (auto v : distances_from(s, x))
                d = std::max(d, v);
        return d;
    }

    auto ball(const Structure & s, Element x, size_t r) -> Substructure
    {
        // Bounded search, so the cost depends on the ball and not on s.
        std::unordered_map<Element, size_t> dist{ { x, 0 } };
        vector<Element> frontier{ x }, members{ x };
        for (size_t d = 0 ; d < r && ! frontier.empty() ; ++d) {
            vector<Element> next;
            for (auto u : frontier)
                for (auto t : s.incident(u))
                    for (auto y : s.tuple(t))
                        if (dist.emplace(y, d + 1).second) {
                            next.push_back(y);
                            members.push_back(y);
                        }
            frontier = std::move(next);
        }
        std::sort(members.begin(), members.end());
        return induced(s, members);
    }

    auto encode_graph(size_t n, span<const std::pair<Element, Element>> edges) -> Structure
    {
        StructureBuilder b(digraph_signature(), n);
        for (auto [u, v] : edges) {
            b.add(0, { u, v });
            b.add(0, { v, u });
        }
        return b.build();
    }

    auto encode_digraph(size_t n, span<const std::pair<Element, Element>> arcs) -> Structure
    {
        StructureBuilder b(digraph_signature(), n);
        for (auto [u, v] : arcs)
            b.add(0, { u, v });
        return b.build();
    }

    auto decode_graph(const Structure & s) -> vector<std::pair<Element, Element>>
    {
        if (s.signature().size() != 1 || s.signature().symbol(0).arity != 2)
            throw FormatError("decode_graph needs a single binary relation");
        std::set<std::pair<Element, Element>> edges;
        auto & rel = s.relation(0);
        for (size_t i = 0 ; i < rel.size() ; ++i) {
            auto t = rel.tuple(i);
            edges.emplace(std::min(t[0], t[1]), std::max(t[0], t[1]));
        }
        return { edges.begin(), edges.end() };
    }
}
