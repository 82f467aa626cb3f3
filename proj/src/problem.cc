/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>
#include <fpp/problem.hh>

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::string;
using std::vector;

namespace fpp
{
    Problem::Problem(Signature sig, Palette vertex_palette, Palette edge_palette, vector<Structure> patterns) :
        _signature(std::move(sig)),
        _vertex_palette(std::move(vertex_palette)),
        _edge_palette(std::move(edge_palette))
    {
        if (_vertex_palette.empty() || _edge_palette.empty())
            throw FormatError("palettes must be non-empty");
        if (std::set<string>(_vertex_palette.begin(), _vertex_palette.end()).size() != _vertex_palette.size()
                || std::set<string>(_edge_palette.begin(), _edge_palette.end()).size() != _edge_palette.size())
            throw FormatError("palette with a repeated colour");

        std::unordered_set<Code, CodeHash> seen;
        for (auto & f : patterns) {
            if (! (f.signature() == _signature))
                throw FormatError("pattern over a different signature");
            if (! is_connected(f))
                throw FormatError("pattern is not connected");
            for (Element x = 0 ; x < f.size() ; ++x)
                if (f.vertex_colour(x) >= _vertex_palette.size())
                    throw FormatError("pattern vertex colour outside the palette");
            for (auto r : f.all_tuples())
                if (f.tuple_colour(r) >= _edge_palette.size())
                    throw FormatError("pattern tuple colour outside the palette");
            if (seen.insert(canonical_form(f).code).second)
                _patterns.push_back(f);
        }
    }

    auto symmetric_triangle(Colour v0, Colour v1, Colour v2, Colour edges) -> Structure
    {
        StructureBuilder b(digraph_signature(), 3);
        b.set_colour(0, v0);
        b.set_colour(1, v1);
        b.set_colour(2, v2);
        for (Element x = 0 ; x < 3 ; ++x)
            for (Element y = 0 ; y < 3 ; ++y)
                if (x != y)
                    b.add(0, { x, y }, edges);
        return b.build();
    }

    auto symmetric_edge(Colour v0, Colour v1, Colour forward, Colour backward) -> Structure
    {
        StructureBuilder b(digraph_signature(), 2);
        b.set_colour(0, v0);
        b.set_colour(1, v1);
        b.add(0, { 0, 1 }, forward);
        b.add(0, { 1, 0 }, backward);
        return b.build();
    }

    auto builtin_problem_names() -> vector<string>
    {
        return { "vertex-no-mono-tri", "edge-no-mono-tri", "tri-free-tri" };
    }

    auto builtin_problem(std::string_view name) -> Problem
    {
        if (name == "vertex-no-mono-tri")
            return Problem(digraph_signature(), { "0", "1" }, { "0" },
                    { symmetric_triangle(0, 0, 0), symmetric_triangle(1, 1, 1) });

        if (name == "edge-no-mono-tri")
            // Each arc of an undirected edge is coloured on its own, so the
            // two arcs of an edge are forced to agree by forbidding a digon
            // whose arcs differ.
            return Problem(digraph_signature(), { "0" }, { "full", "dashed" },
                    { symmetric_triangle(0, 0, 0, 0), symmetric_triangle(0, 0, 0, 1), symmetric_edge(0, 0, 0, 1) });

        if (name == "tri-free-tri") {
            vector<Structure> patterns;
            for (Colour c = 0 ; c < 3 ; ++c)
                patterns.push_back(symmetric_edge(c, c, 0, 0));
            for (Colour a = 0 ; a < 3 ; ++a)
                for (Colour b = a ; b < 3 ; ++b)
                    for (Colour c = b ; c < 3 ; ++c)
                        patterns.push_back(symmetric_triangle(a, b, c));
            return Problem(digraph_signature(), { "0", "1", "2" }, { "0" }, std::move(patterns));
        }

        throw FormatError(fmt::format("unknown builtin problem '{}'", name));
    }

    namespace
    {
        void check_palettes(const Structure & cs, const Problem & p)
        {
            if (! (cs.signature() == p.signature()))
                throw FormatError("structure and problem have different signatures");
            for (Element x = 0 ; x < cs.size() ; ++x)
                if (cs.vertex_colour(x) >= p.vertex_palette().size())
                    throw FormatError("vertex colour outside the problem's palette");
            for (auto r : cs.all_tuples())
                if (cs.tuple_colour(r) >= p.edge_palette().size())
                    throw FormatError("tuple colour outside the problem's palette");
        }
    }

    auto find_violation(const Structure & cs, const Problem & p) -> optional<Violation>
    {
        check_palettes(cs, p);
        for (size_t i = 0 ; i < p.patterns().size() ; ++i)
            if (auto h = find_hom(p.patterns()[i], cs))
                return Violation{ i, *h };
        return std::nullopt;
    }

    auto is_valid(const Structure & cs, const Problem & p) -> bool
    {
        return ! find_violation(cs, p);
    }

    auto recoloured(const Structure & s, const vector<Colour> & vertex_colours, const vector<Colour> & tuple_colours) -> Structure
    {
        StructureBuilder b(s.signature(), s.size());
        for (Element x = 0 ; x < s.size() ; ++x)
            b.set_colour(x, vertex_colours.at(x));
        size_t i = 0;
        for (auto r : s.all_tuples())
            b.add(r.symbol, s.tuple(r), tuple_colours.at(i++));
        if (s.has_names())
            b.set_names(s.names());
        return b.build();
    }

    namespace
    {
        // A partial colouring that completes a pattern image: each literal
        // says variable `var` takes value `value`.
        struct Literal
        {
            std::uint32_t var;
            Colour value;

            auto operator<=> (const Literal &) const = default;
        };

        using Nogood = vector<Literal>;

        class ColouringSearch
        {
            private:
                vector<std::uint64_t> _domain;
                vector<optional<Colour>> _value;
                vector<Nogood> _nogoods;
                vector<vector<std::uint32_t>> _watch;
                vector<std::pair<std::uint32_t, std::uint64_t>> _trail;
                std::uint64_t _budget, _nodes = 0;

                auto propagate(std::uint32_t v) -> bool
                {
                    for (auto n : _watch[v]) {
                        optional<Literal> open;
                        bool dead = false, two_open = false;
                        for (auto & l : _nogoods[n]) {
                            if (_value[l.var]) {
                                if (*_value[l.var] != l.value) {
                                    dead = true;
                                    break;
                                }
                            }
                            else if (open)
                                two_open = true;
                            else
                                open = l;
                        }
                        if (dead || two_open)
                            continue;
                        if (! open)
                            return false;
                        std::uint64_t bit = std::uint64_t(1) << open->value;
                        if (_domain[open->var] & bit) {
                            _trail.emplace_back(open->var, _domain[open->var]);
                            _domain[open->var] &= ~bit;
                            if (! _domain[open->var])
                                return false;
                        }
                    }
                    return true;
                }

                auto choose() -> optional<std::uint32_t>
                {
                    optional<std::uint32_t> best;
                    for (std::uint32_t v = 0 ; v < _value.size() ; ++v) {
                        if (_value[v])
                            continue;
                        if (! best)
                            best = v;
                        else {
                            int a = std::popcount(_domain[v]), b = std::popcount(_domain[*best]);
                            if (a < b || (a == b && _watch[v].size() > _watch[*best].size()))
                                best = v;
                        }
                    }
                    return best;
                }

                auto recurse() -> bool
                {
                    auto v = choose();
                    if (! v)
                        return true;
                    std::uint64_t d = _domain[*v];
                    for (Colour c = 0 ; c < 64 ; ++c) {
                        if (! (d & (std::uint64_t(1) << c)))
                            continue;
                        if (_budget && ++_nodes > _budget)
                            throw BudgetExceeded(fmt::format("colouring search exceeded its budget of {} nodes", _budget));
                        auto mark = _trail.size();
                        _value[*v] = c;
                        if (propagate(*v) && recurse())
                            return true;
                        _value[*v] = std::nullopt;
                        while (_trail.size() > mark) {
                            _domain[_trail.back().first] = _trail.back().second;
                            _trail.pop_back();
                        }
                    }
                    return false;
                }

            public:
                ColouringSearch(vector<std::uint64_t> domain, vector<Nogood> nogoods, std::uint64_t budget) :
                    _domain(std::move(domain)),
                    _value(_domain.size()),
                    _nogoods(std::move(nogoods)),
                    _watch(_domain.size()),
                    _budget(budget)
                {
                    for (std::uint32_t n = 0 ; n < _nogoods.size() ; ++n)
                        for (auto & l : _nogoods[n])
                            _watch[l.var].push_back(n);
                }

                auto run() -> optional<vector<Colour>>
                {
                    for (auto & n : _nogoods)
                        if (n.size() == 1) {
                            _domain[n[0].var] &= ~(std::uint64_t(1) << n[0].value);
                            if (! _domain[n[0].var])
                                return std::nullopt;
                        }
                    if (! recurse())
                        return std::nullopt;
                    vector<Colour> result;
                    for (auto & v : _value)
                        result.push_back(*v);
                    return result;
                }
        };
    }

    auto decide_fpp(const Structure & s, const Problem & p, const FppOptions & options) -> optional<Structure>
    {
        if (! (s.signature() == p.signature()))
            throw FormatError("structure and problem have different signatures");
        size_t nv = p.vertex_palette().size(), ne = p.edge_palette().size();
        if (nv > 64 || ne > 64)
            throw FormatError("palettes with more than 64 colours are not supported");

        auto tuples = s.all_tuples();
        auto var_of_tuple = [&] (TupleRef r) -> std::uint32_t {
            return s.size() + (std::lower_bound(tuples.begin(), tuples.end(), r) - tuples.begin());
        };

        // Every uncoloured image of a pattern becomes a forbidden partial colouring.
        std::set<Nogood> nogoods;
        std::uint64_t images = 0;
        for (auto & f : p.patterns()) {
            HomOptions ho;
            ho.colours = ColourMode::ignore;
            auto tf = f.all_tuples();
            bool empty_found = false;
            for_each_hom(f, s, [&] (const Hom & h) -> bool {
                    if (options.budget && ++images > options.budget)
                        throw BudgetExceeded(fmt::format("pattern image enumeration exceeded its budget of {}", options.budget));
                    Nogood n;
                    for (Element x = 0 ; x < f.size() ; ++x)
                        if (nv > 1)
                            n.push_back(Literal{ h[x], f.vertex_colour(x) });
                        else if (f.vertex_colour(x) != 0)
                            return true;
                    vector<Element> img;
                    for (auto r : tf) {
                        img.clear();
                        for (auto y : f.tuple(r))
                            img.push_back(h[y]);
                        if (ne > 1)
                            n.push_back(Literal{ var_of_tuple(*s.find_tuple(r.symbol, img)), f.tuple_colour(r) });
                        else if (f.tuple_colour(r) != 0)
                            return true;
                    }
                    std::sort(n.begin(), n.end());
                    n.erase(std::unique(n.begin(), n.end()), n.end());
                    for (size_t i = 1 ; i < n.size() ; ++i)
                        if (n[i].var == n[i - 1].var)
                            return true;
                    if (n.empty())
                        empty_found = true;
                    nogoods.insert(std::move(n));
                    return ! empty_found;
                    }, ho);
            if (empty_found)
                return std::nullopt;
        }

        vector<std::uint64_t> domain;
        for (Element x = 0 ; x < s.size() ; ++x)
            domain.push_back(nv == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << nv) - 1);
        for (size_t i = 0 ; i < tuples.size() ; ++i)
            domain.push_back(ne == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << ne) - 1);

        ColouringSearch search(std::move(domain), vector<Nogood>(nogoods.begin(), nogoods.end()), options.budget);
        auto values = search.run();
        if (! values)
            return std::nullopt;

        vector<Colour> vc(values->begin(), values->begin() + s.size());
        vector<Colour> tc(values->begin() + s.size(), values->end());
        return recoloured(s, vc, tc);
    }

    auto params(const Problem & p) -> ProblemParams
    {
        ProblemParams result;
        for (auto & f : p.patterns()) {
            result.m = std::max(result.m, diameter(f));
            result.p = std::max(result.p, f.size());
        }
        return result;
    }
}
