/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/hom.hh>

#include <algorithm>
#include <limits>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::vector;

namespace fpp
{
    namespace
    {
        void require_same_signature(const Structure & a, const Structure & b)
        {
            if (! (a.signature() == b.signature()))
                throw FormatError("homomorphism between structures over different signatures");
        }

        // Nullary relations never show up in incidence lists.
        auto nullary_ok(const Structure & a, const Structure & b, bool colours) -> bool
        {
            for (SymbolId s = 0 ; s < a.signature().size() ; ++s) {
                if (a.signature().symbol(s).arity != 0 || a.relation(s).size() == 0)
                    continue;
                if (b.relation(s).size() == 0)
                    return false;
                if (colours && a.relation(s).colour(0) != b.relation(s).colour(0))
                    return false;
            }
            return true;
        }

        class Searcher
        {
            private:
                const Structure & _a;
                const Structure & _b;
                bool _colours;
                std::uint64_t _budget;
                std::uint64_t _nodes = 0;
                const std::function<auto (const Hom &) -> bool> & _callback;

                vector<vector<Element>> _domains;
                Hom _value;
                vector<bool> _assigned;
                vector<std::pair<Element, vector<Element>>> _trail;
                vector<std::uint32_t> _mark;
                std::uint32_t _stamp = 0;
                vector<Element> _image;
                vector<Element> _hits;
                vector<Element> _free;

                auto next_stamp() -> std::uint32_t
                {
                    if (++_stamp == 0) {
                        std::fill(_mark.begin(), _mark.end(), 0);
                        _stamp = 1;
                    }
                    return _stamp;
                }

                // Keeps the marked values of y's domain. Domains stay sorted, so
                // a few hits against a large domain are looked up directly.
                void restrict(Element y, std::uint32_t stamp)
                {
                    auto & domain = _domains[y];
                    vector<Element> next;
                    if (_hits.size() * 16 < domain.size()) {
                        std::sort(_hits.begin(), _hits.end());
                        for (auto v : _hits)
                            if (std::binary_search(domain.begin(), domain.end(), v))
                                next.push_back(v);
                    }
                    else
                        for (auto v : domain)
                            if (_mark[v] == stamp)
                                next.push_back(v);
                    if (next.size() != domain.size()) {
                        _trail.emplace_back(y, std::move(domain));
                        domain = std::move(next);
                    }
                }

                auto propagate(Element x) -> bool
                {
                    Element c = _value[x];
                    for (auto r : _a.incident(x)) {
                        auto t = _a.tuple(r);
                        _free.clear();
                        for (auto y : t)
                            if (! _assigned[y] && std::find(_free.begin(), _free.end(), y) == _free.end())
                                _free.push_back(y);

                        if (_free.empty()) {
                            _image.clear();
                            for (auto y : t)
                                _image.push_back(_value[y]);
                            auto found = _b.find_tuple(r.symbol, _image);
                            if (! found)
                                return false;
                            if (_colours && _b.tuple_colour(*found) != _a.tuple_colour(r))
                                return false;
                            continue;
                        }

                        // Each free element keeps the values some tuple at c supports.
                        for (auto y : _free) {
                            auto stamp = next_stamp();
                            _hits.clear();
                            for (auto rb : _b.incident(c)) {
                                if (rb.symbol != r.symbol)
                                    continue;
                                if (_colours && _b.tuple_colour(rb) != _a.tuple_colour(r))
                                    continue;
                                auto tb = _b.tuple(rb);
                                optional<Element> v;
                                bool ok = true;
                                for (size_t j = 0 ; j < t.size() && ok ; ++j) {
                                    if (t[j] == y) {
                                        if (v && *v != tb[j])
                                            ok = false;
                                        v = tb[j];
                                    }
                                    else if (_assigned[t[j]] && tb[j] != _value[t[j]])
                                        ok = false;
                                }
                                if (ok && _mark[*v] != stamp) {
                                    _mark[*v] = stamp;
                                    _hits.push_back(*v);
                                }
                            }
                            restrict(y, stamp);
                            if (_domains[y].empty())
                                return false;
                        }
                    }
                    return true;
                }

                auto choose() -> optional<Element>
                {
                    optional<Element> best;
                    for (Element x = 0 ; x < _a.size() ; ++x) {
                        if (_assigned[x])
                            continue;
                        if (! best || _domains[x].size() < _domains[*best].size()
                                || (_domains[x].size() == _domains[*best].size() && _a.incident(x).size() > _a.incident(*best).size()))
                            best = x;
                    }
                    return best;
                }

                auto recurse() -> bool
                {
                    auto x = choose();
                    if (! x)
                        return _callback(_value);

                    vector<Element> values = _domains[*x];
                    for (auto c : values) {
                        if (_budget && ++_nodes > _budget)
                            throw BudgetExceeded(fmt::format("homomorphism search exceeded its budget of {} nodes", _budget));
                        auto trail_size = _trail.size();
                        _assigned[*x] = true;
                        _value[*x] = c;
                        bool keep_going = true;
                        if (propagate(*x))
                            keep_going = recurse();
                        _assigned[*x] = false;
                        while (_trail.size() > trail_size) {
                            _domains[_trail.back().first] = std::move(_trail.back().second);
                            _trail.pop_back();
                        }
                        if (! keep_going)
                            return false;
                    }
                    return true;
                }

            public:
                Searcher(const Structure & a, const Structure & b, const HomOptions & options,
                        const std::function<auto (const Hom &) -> bool> & callback) :
                    _a(a),
                    _b(b),
                    _colours(options.colours == ColourMode::preserve),
                    _budget(options.budget),
                    _callback(callback),
                    _domains(a.size()),
                    _value(a.size(), 0),
                    _assigned(a.size(), false),
                    _mark(b.size(), 0)
                {
                    for (Element x = 0 ; x < a.size() ; ++x) {
                        const vector<Element> * given = nullptr;
                        if (x < options.candidates.size() && options.candidates[x])
                            given = &*options.candidates[x];

                        auto consider = [&] (Element v) {
                            if (v >= b.size())
                                throw FormatError("candidate outside the target domain");
                            if (_colours && a.vertex_colour(x) != b.vertex_colour(v))
                                return;
                            _domains[x].push_back(v);
                        };
                        if (given) {
                            for (auto v : *given)
                                consider(v);
                            auto & d = _domains[x];
                            std::sort(d.begin(), d.end());
                            d.erase(std::unique(d.begin(), d.end()), d.end());
                        }
                        else
                            for (Element v = 0 ; v < b.size() ; ++v)
                                consider(v);
                    }

                    // Tuples whose only element is x.
                    for (Element x = 0 ; x < a.size() ; ++x)
                        for (auto r : a.incident(x)) {
                            auto t = a.tuple(r);
                            if (std::any_of(t.begin(), t.end(), [&] (Element y) { return y != x; }))
                                continue;
                            vector<Element> keep;
                            for (auto v : _domains[x]) {
                                vector<Element> img(t.size(), v);
                                auto found = b.find_tuple(r.symbol, img);
                                if (found && (! _colours || b.tuple_colour(*found) == a.tuple_colour(r)))
                                    keep.push_back(v);
                            }
                            _domains[x] = std::move(keep);
                        }
                }

                void run()
                {
                    if (! nullary_ok(_a, _b, _colours))
                        return;
                    for (auto & d : _domains)
                        if (d.empty())
                            return;
                    recurse();
                }
        };
    }

    auto check_hom(const Structure & a, const Structure & b, const Hom & h, ColourMode colours) -> bool
    {
        require_same_signature(a, b);
        bool col = colours == ColourMode::preserve;
        if (h.size() != a.size())
            return false;
        for (Element x = 0 ; x < a.size() ; ++x) {
            if (h[x] >= b.size())
                return false;
            if (col && a.vertex_colour(x) != b.vertex_colour(h[x]))
                return false;
        }
        if (! nullary_ok(a, b, col))
            return false;
        vector<Element> img;
        for (auto r : a.all_tuples()) {
            img.clear();
            for (auto y : a.tuple(r))
                img.push_back(h[y]);
            auto found = b.find_tuple(r.symbol, img);
            if (! found)
                return false;
            if (col && b.tuple_colour(*found) != a.tuple_colour(r))
                return false;
        }
        return true;
    }

    void for_each_hom(const Structure & a, const Structure & b,
            const std::function<auto (const Hom &) -> bool> & f, const HomOptions & options)
    {
        require_same_signature(a, b);
        Searcher s(a, b, options, f);
        s.run();
    }

    auto find_hom(const Structure & a, const Structure & b, const HomOptions & options) -> optional<Hom>
    {
        require_same_signature(a, b);

        auto comps = components(a);
        if (comps.size() > 1) {
            Hom result(a.size(), 0);
            for (auto & c : comps) {
                HomOptions sub = options;
                sub.candidates.clear();
                for (auto o : c.origin)
                    sub.candidates.push_back(o < options.candidates.size() ? options.candidates[o] : std::nullopt);
                auto h = find_hom(c.structure, b, sub);
                if (! h)
                    return std::nullopt;
                for (size_t i = 0 ; i < c.origin.size() ; ++i)
                    result[c.origin[i]] = (*h)[i];
            }
            if (! nullary_ok(a, b, options.colours == ColourMode::preserve))
                return std::nullopt;
            return result;
        }

        optional<Hom> result;
        std::function<auto (const Hom &) -> bool> f = [&] (const Hom & h) {
            result = h;
            return false;
        };
        Searcher s(a, b, options, f);
        s.run();
        return result;
    }

    auto enumerate_homs(const Structure & a, const Structure & b, size_t limit, const HomOptions & options) -> vector<Hom>
    {
        if (limit == 0) {
            std::uint64_t budget = options.budget ? options.budget : default_enumeration_budget;
            long double space = 1;
            for (size_t i = 0 ; i < a.size() ; ++i)
                space *= b.size();
            if (space > budget)
                throw BudgetExceeded(fmt::format("enumerating homomorphisms from {} into {} elements exceeds the budget of {}",
                            a.size(), b.size(), budget));
        }

        vector<Hom> result;
        std::function<auto (const Hom &) -> bool> f = [&] (const Hom & h) {
            result.push_back(h);
            return limit == 0 || result.size() < limit;
        };
        for_each_hom(a, b, f, options);
        return result;
    }

    auto core(const Structure & s, size_t cap) -> CoreResult
    {
        if (s.size() > cap)
            throw BudgetExceeded(fmt::format("core of a structure with {} elements exceeds the cap of {}", s.size(), cap));

        Structure current = s;
        vector<Element> inclusion(s.size());
        Hom retraction(s.size());
        for (Element x = 0 ; x < s.size() ; ++x)
            inclusion[x] = retraction[x] = x;

        bool changed = true;
        while (changed) {
            changed = false;
            for (Element x = 0 ; x < current.size() && ! changed ; ++x) {
                vector<Element> others;
                for (Element y = 0 ; y < current.size() ; ++y)
                    if (y != x)
                        others.push_back(y);
                HomOptions options;
                options.candidates.assign(current.size(), others);
                auto h = find_hom(current, current, options);
                if (! h)
                    continue;

                vector<Element> image = *h;
                std::sort(image.begin(), image.end());
                image.erase(std::unique(image.begin(), image.end()), image.end());
                vector<Element> position(current.size(), 0);
                for (size_t i = 0 ; i < image.size() ; ++i)
                    position[image[i]] = i;

                for (auto & r : retraction)
                    r = position[(*h)[r]];
                vector<Element> next_inclusion;
                for (auto i : image)
                    next_inclusion.push_back(inclusion[i]);
                inclusion = std::move(next_inclusion);
                current = induced(current, image).structure;
                changed = true;
            }
        }

        return CoreResult{ std::move(current), std::move(inclusion), std::move(retraction) };
    }

    auto is_core(const Structure & s, size_t cap) -> bool
    {
        return core(s, cap).core.size() == s.size();
    }

    auto hom_equivalent(const Structure & a, const Structure & b) -> bool
    {
        return find_hom(a, b).has_value() && find_hom(b, a).has_value();
    }
}
