/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/enumerate.hh>
#include <fpp/treedepth.hh>
#include <fpp/universal.hh>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::vector;

namespace fpp
{
    auto x_param(size_t b, size_t m) -> size_t
    {
        if (b < 1)
            throw FormatError("x_param needs b >= 1");
        size_t total = 1, term = b;
        for (size_t j = 0 ; j <= m ; ++j) {
            total += term;
            term *= (b - 1);
        }
        return total;
    }

    auto template_radius(const Problem & p) -> size_t
    {
        return std::max<size_t>(1, params(p).m);
    }

    auto Member::index_of(Element label) const -> optional<Element>
    {
        auto i = std::lower_bound(labels.begin(), labels.end(), label);
        if (i == labels.end() || *i != label)
            return std::nullopt;
        return Element(i - labels.begin());
    }

    auto Member::key() const -> Code
    {
        Code result{ std::uint32_t(labels.size()) };
        result.insert(result.end(), labels.begin(), labels.end());
        auto c = exact_code(structure);
        result.insert(result.end(), c.begin(), c.end());
        return result;
    }

    auto make_member(const Structure & s, const vector<Element> & labels) -> Member
    {
        if (labels.size() != s.size())
            throw FormatError("one label per element is needed");
        vector<Element> order(s.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&] (Element a, Element b) { return labels[a] < labels[b]; });
        Member m{ permuted(s, order).without_names(), {} };
        for (auto x : order)
            m.labels.push_back(labels[x]);
        for (size_t i = 1 ; i < m.labels.size() ; ++i)
            if (m.labels[i - 1] == m.labels[i])
                throw FormatError("labels must be distinct");
        return m;
    }

    auto member_ball(const Member & s, Element label, size_t radius) -> Member
    {
        auto i = s.index_of(label);
        if (! i)
            throw FormatError(fmt::format("label {} is not in the member", label));
        auto b = ball(s.structure, *i, radius);
        Member result{ std::move(b.structure), {} };
        for (auto x : b.origin)
            result.labels.push_back(s.labels[x]);
        return result;
    }

    namespace
    {
        void for_each_injection(size_t k, const vector<Element> & targets, const std::function<void (const vector<Element> &)> & f)
        {
            vector<Element> current;
            vector<bool> used(targets.size(), false);
            std::function<void ()> rec = [&] {
                if (current.size() == k) {
                    f(current);
                    return;
                }
                for (size_t i = 0 ; i < targets.size() ; ++i)
                    if (! used[i]) {
                        used[i] = true;
                        current.push_back(targets[i]);
                        rec();
                        current.pop_back();
                        used[i] = false;
                    }
            };
            rec();
        }

        auto falling(size_t x, size_t k) -> long double
        {
            long double r = 1;
            for (size_t i = 0 ; i < k ; ++i)
                r *= (x - i);
            return r;
        }

        auto shapes_for(const Problem & p, size_t max_size, optional<size_t> max_degree, size_t budget) -> vector<Structure>
        {
            EnumerateOptions o;
            o.signature = p.signature();
            o.vertex_colours = p.vertex_palette().size();
            o.tuple_colours = p.edge_palette().size();
            o.max_size = max_size;
            o.connected = true;
            o.max_degree = max_degree;
            o.degree_measure = DegreeMeasure::gaifman;
            o.keep = [&] (const Structure & s) { return is_valid(s, p); };
            o.budget = budget;
            return enumerate_structures(o);
        }

        auto within(const Structure & s, Element x, size_t radius) -> bool
        {
            for (auto d : distances_from(s, x))
                if (d > radius)
                    return false;
            return true;
        }
    }

    auto BoundedDegreeTemplate::element(Element label, size_t member) const -> optional<Element>
    {
        auto i = members.at(member).index_of(label);
        if (! i)
            return std::nullopt;
        // Elements are laid out member by member in label order.
        auto first = std::lower_bound(provenance.begin(), provenance.end(), std::pair<Element, size_t>{ 0, member },
                [] (const auto & a, const auto & b) { return a.second < b.second; });
        return Element((first - provenance.begin()) + *i);
    }

    auto bounded_degree_universal(const Problem & p, size_t b, const BoundedDegreeOptions & options) -> BoundedDegreeTemplate
    {
        BoundedDegreeTemplate t;
        t.problem = p;
        t.b = b;
        t.m = template_radius(p);
        t.x = x_param(b, t.m);

        auto shapes = shapes_for(p, t.x, options.restrict_degree ? optional<size_t>(b) : std::nullopt, options.enumeration_budget);

        long double forecast = 0;
        for (auto & s : shapes)
            forecast += falling(t.x, s.size());
        if (forecast > options.member_cap)
            throw BudgetExceeded(fmt::format("bounded-degree template would have up to {:.0f} labelled members from {} shapes, over the cap of {}",
                        double(forecast), shapes.size(), options.member_cap));

        vector<Element> all_labels(t.x);
        std::iota(all_labels.begin(), all_labels.end(), 0);
        for (auto & s : shapes)
            for_each_injection(s.size(), all_labels, [&] (const vector<Element> & labels) {
                    auto m = make_member(s, labels);
                    auto key = m.key();
                    if (t.member_index.emplace(key, t.members.size()).second)
                        t.members.push_back(std::move(m));
                    });

        // Elements member by member, in label order.
        vector<size_t> offset;
        for (size_t i = 0 ; i < t.members.size() ; ++i) {
            offset.push_back(t.provenance.size());
            for (auto l : t.members[i].labels)
                t.provenance.emplace_back(l, i);
        }

        StructureBuilder out(p.signature(), t.provenance.size());
        vector<std::string> names;
        for (Element w = 0 ; w < t.provenance.size() ; ++w) {
            auto [l, i] = t.provenance[w];
            out.set_colour(w, t.members[i].structure.vertex_colour(w - offset[i]));
            names.push_back(fmt::format("{}@{}", l, i));
        }
        out.set_names(std::move(names));

        // Balls are compared label for label, so intern them.
        std::unordered_map<Code, std::uint32_t, CodeHash> ball_ids;
        auto ball_id = [&] (size_t i, Element label) {
            auto key = member_ball(t.members[i], label, t.m).key();
            return ball_ids.emplace(key, ball_ids.size()).first->second;
        };

        std::map<Code, vector<size_t>> classes;
        for (size_t i = 0 ; i < t.members.size() ; ++i) {
            auto & s = t.members[i].structure;
            std::map<Element, std::uint32_t> balls;
            for (auto r : s.all_tuples()) {
                Code key{ r.symbol, s.tuple_colour(r) };
                for (auto x : s.tuple(r))
                    key.push_back(t.members[i].labels[x]);
                for (auto x : s.tuple(r)) {
                    auto l = t.members[i].labels[x];
                    auto f = balls.find(l);
                    if (f == balls.end())
                        f = balls.emplace(l, ball_id(i, l)).first;
                    key.push_back(f->second);
                }
                classes[key].push_back(i);
            }
        }

        long double tuple_forecast = 0;
        for (auto & [key, cls] : classes)
            tuple_forecast += std::pow(static_cast<long double>(cls.size()), p.signature().symbol(key[0]).arity);
        if (tuple_forecast > options.tuple_cap)
            throw BudgetExceeded(fmt::format("bounded-degree template would have {:.0f} tuples, over the cap of {}",
                        double(tuple_forecast), options.tuple_cap));

        for (auto & [key, cls] : classes) {
            SymbolId sym = key[0];
            Colour e = key[1];
            unsigned r = p.signature().symbol(sym).arity;
            vector<Element> labels(key.begin() + 2, key.begin() + 2 + r);
            vector<size_t> pick(r, 0);
            vector<Element> tuple(r);
            while (true) {
                for (unsigned j = 0 ; j < r ; ++j) {
                    auto i = cls[pick[j]];
                    tuple[j] = offset[i] + *t.members[i].index_of(labels[j]);
                }
                out.add(sym, tuple, e);
                unsigned j = 0;
                while (j < r && ++pick[j] == cls.size())
                    pick[j++] = 0;
                if (j == r)
                    break;
            }
        }

        t.carrier = out.build();
        t.retraction.resize(t.carrier.size());
        for (Element w = 0 ; w < t.carrier.size() ; ++w) {
            auto & [label, member] = t.provenance[w];
            auto i = t.member_index.at(member_ball(t.members[member], label, t.m + 1).key());
            t.retraction[w] = *t.element(label, i);
        }
        t.representatives = label_orbit_representatives(t);
        return t;
    }

    auto template_ball(const BoundedDegreeTemplate & t, Element u, size_t radius) -> BallMap
    {
        BallMap result{ ball(t.carrier, u, radius), std::nullopt };
        auto & centre = t.members.at(t.provenance.at(u).second);
        Hom h;
        for (auto w : result.ball.origin) {
            auto i = centre.index_of(t.provenance[w].first);
            if (! i)
                return result;
            h.push_back(*i);
        }
        result.map = std::move(h);
        return result;
    }

    auto ball_lemma_failures(const BoundedDegreeTemplate & t) -> vector<Element>
    {
        vector<Element> failures;
        for (Element u = 0 ; u < t.carrier.size() ; ++u) {
            auto bm = template_ball(t, u, t.m);
            auto & centre = t.members[t.provenance[u].second];
            if (! bm.map || ! check_hom(bm.ball.structure, centre.structure, *bm.map))
                failures.push_back(u);
        }
        return failures;
    }

    auto ball_injective_labelling(const Structure & g, size_t radius, size_t x) -> vector<Element>
    {
        size_t n = g.size();
        vector<std::set<Element>> conflicts(n);
        for (Element c = 0 ; c < n ; ++c) {
            auto d = distances_from(g, c);
            vector<Element> in;
            for (Element y = 0 ; y < n ; ++y)
                if (d[y] <= radius)
                    in.push_back(y);
            for (auto a : in)
                for (auto b : in)
                    if (a != b)
                        conflicts[a].insert(b);
        }

        vector<optional<Element>> label(n);
        vector<Element> order;
        vector<bool> queued(n, false);
        auto adj = gaifman_adjacency(g);
        for (Element s = 0 ; s < n ; ++s) {
            if (queued[s])
                continue;
            std::deque<Element> queue{ s };
            queued[s] = true;
            while (! queue.empty()) {
                auto v = queue.front();
                queue.pop_front();
                order.push_back(v);
                for (auto w : adj[v])
                    if (! queued[w]) {
                        queued[w] = true;
                        queue.push_back(w);
                    }
            }
        }

        for (auto v : order) {
            vector<bool> used(x, false);
            for (auto w : conflicts[v])
                if (label[w] && *label[w] < x)
                    used[*label[w]] = true;
            auto free = std::find(used.begin(), used.end(), false);
            if (free == used.end())
                throw LabellingFailure(fmt::format("element {} needs a label outside 0..{}: its radius-{} balls hold {} other elements",
                            v, x - 1, radius, conflicts[v].size()));
            label[v] = Element(free - used.begin());
        }

        vector<Element> result;
        for (auto & l : label)
            result.push_back(*l);
        return result;
    }

    auto embed_into_universal(const Structure & coloured_g, const BoundedDegreeTemplate & t) -> Hom
    {
        auto chi = ball_injective_labelling(coloured_g, t.m + 1, t.x);
        Hom result;
        for (Element v = 0 ; v < coloured_g.size() ; ++v) {
            auto b = ball(coloured_g, v, t.m + 1);
            vector<Element> labels;
            for (auto y : b.origin)
                labels.push_back(chi[y]);
            auto m = make_member(b.structure, labels);
            auto i = t.member_index.find(m.key());
            if (i == t.member_index.end())
                throw Error(fmt::format("the labelled ball around element {} is not a member of the template", v));
            result.push_back(*t.element(chi[v], i->second));
        }
        return result;
    }

    auto label_orbit_representatives(const BoundedDegreeTemplate & t) -> vector<Element>
    {
        std::set<Code> seen;
        vector<Element> result;
        for (Element w = 0 ; w < t.carrier.size() ; ++w) {
            auto & [label, member] = t.provenance[w];
            auto & s = t.members[member];
            Element root = *s.index_of(label);
            if (seen.insert(canonical_form(s.structure, std::span<const Element>(&root, 1)).code).second)
                result.push_back(w);
        }
        return result;
    }

    auto find_hom_to_template(const Structure & g, const BoundedDegreeTemplate & t, std::uint64_t budget) -> optional<Hom>
    {
        auto reps = t.representatives.empty() ? label_orbit_representatives(t) : t.representatives;
        vector<Element> image;
        for (Element w = 0 ; w < t.retraction.size() ; ++w)
            if (t.retraction[w] == w)
                image.push_back(w);
        if (! t.retraction.empty())
            std::erase_if(reps, [&] (Element w) { return t.retraction[w] != w; });

        Hom result(g.size(), 0);
        for (auto & comp : components(g)) {
            auto & c = comp.structure;
            auto adj = gaifman_adjacency(c);
            Element pin = 0;
            for (Element x = 1 ; x < c.size() ; ++x)
                if (adj[x].size() > adj[pin].size())
                    pin = x;
            HomOptions o{ ColourMode::ignore, budget, {} };
            if (! t.retraction.empty())
                o.candidates.assign(c.size(), image);
            else
                o.candidates.resize(c.size());
            o.candidates[pin] = reps;
            auto h = find_hom(c, t.carrier, o);
            if (! h)
                return std::nullopt;
            for (Element x = 0 ; x < c.size() ; ++x)
                result[comp.origin[x]] = (*h)[x];
        }
        return result;
    }

    BallTemplate::BallTemplate(Problem p, size_t b, bool restrict_degree) :
        _problem(std::move(p)),
        _b(b),
        _m(template_radius(_problem)),
        _x(x_param(b, _m)),
        _restrict_degree(restrict_degree)
    {
    }

    auto BallTemplate::intern(Member m) -> size_t
    {
        auto key = m.key();
        auto [i, fresh] = _index.emplace(std::move(key), _members.size());
        if (fresh)
            _members.push_back(std::move(m));
        return i->second;
    }

    auto BallTemplate::ball_id(size_t member, Element label) -> size_t
    {
        auto k = std::pair{ member, label };
        auto f = _ball_ids.find(k);
        if (f != _ball_ids.end())
            return f->second;
        auto code = member_ball(_members[member], label, _m).key();
        auto id = _ball_codes.emplace(std::move(code), _ball_codes.size()).first->second;
        _ball_ids.emplace(k, id);
        return id;
    }

    namespace
    {
        // Members whose radius-j ball around root is exactly base and whose
        // other elements all lie at distance j + 1. New elements take labels
        // from free; with fresh_only they take the smallest free labels in
        // creation order.
        auto extend_layer(const Problem & p, const Member & base, Element root, size_t j, size_t x,
                optional<size_t> max_degree, bool fresh_only) -> vector<Member>
        {
            auto & sig = p.signature();
            auto ri = *base.index_of(root);
            auto dist = distances_from(base.structure, ri);
            vector<Element> boundary;
            for (Element e = 0 ; e < base.structure.size() ; ++e)
                if (dist[e] == j)
                    boundary.push_back(e);

            vector<Element> free;
            for (Element l = 0 ; l < x ; ++l)
                if (! base.index_of(l))
                    free.push_back(l);

            vector<Member> result;
            std::set<Code> seen;
            bool binary = sig.max_arity() <= 2;
            size_t n0 = base.structure.size();

            auto emit = [&] (const Structure & s) {
                size_t k = s.size() - n0;
                auto adj = gaifman_adjacency(s);
                for (size_t e = n0 ; e < s.size() ; ++e)
                    if (std::none_of(adj[e].begin(), adj[e].end(), [&] (Element y) {
                                return y < n0 && dist[y] == j; }))
                        return;
                auto with = [&] (const vector<Element> & fresh) {
                    auto labels = base.labels;
                    labels.insert(labels.end(), fresh.begin(), fresh.end());
                    auto m = make_member(s, labels);
                    if (seen.insert(m.key()).second)
                        result.push_back(std::move(m));
                };
                if (fresh_only)
                    with(vector<Element>(free.begin(), free.begin() + k));
                else
                    for_each_injection(k, free, with);
            };

            std::function<void (const Structure &)> grow = [&] (const Structure & s) {
                emit(s);
                if (s.size() - n0 >= free.size() || boundary.empty())
                    return;
                Element n = s.size();
                // Elements that tuples with the new element may use.
                vector<Element> allowed = boundary;
                for (Element e = n0 ; e <= n ; ++e)
                    allowed.push_back(e);

                vector<std::pair<SymbolId, vector<Element>>> atoms;
                for (SymbolId sym = 0 ; sym < sig.size() ; ++sym) {
                    unsigned r = sig.symbol(sym).arity;
                    if (r == 0)
                        continue;
                    vector<size_t> pick(r, 0);
                    while (true) {
                        vector<Element> t;
                        for (auto q : pick)
                            t.push_back(allowed[q]);
                        if (std::find(t.begin(), t.end(), n) != t.end())
                            atoms.emplace_back(sym, t);
                        unsigned k = 0;
                        while (k < r && ++pick[k] == allowed.size())
                            pick[k++] = 0;
                        if (k == r)
                            break;
                    }
                }

                auto adjacency = gaifman_adjacency(s);
                adjacency.emplace_back();
                vector<std::pair<size_t, Colour>> chosen;

                for (Colour c = 0 ; c < p.vertex_palette().size() ; ++c) {
                    std::function<void (size_t)> choose = [&] (size_t i) {
                        if (i == atoms.size()) {
                            if (binary && std::none_of(adjacency[n].begin(), adjacency[n].end(), [&] (Element y) {
                                        return y < n0; }))
                                return;
                            StructureBuilder b(sig, n + 1);
                            for (Element e = 0 ; e < n ; ++e)
                                b.set_colour(e, s.vertex_colour(e));
                            b.set_colour(n, c);
                            for (auto r : s.all_tuples())
                                b.add(r.symbol, s.tuple(r), s.tuple_colour(r));
                            for (auto [a, e] : chosen)
                                b.add(atoms[a].first, atoms[a].second, e);
                            auto next = b.build();
                            if (is_valid(next, p))
                                grow(next);
                            return;
                        }
                        choose(i + 1);
                        auto & t = atoms[i].second;
                        auto saved = adjacency;
                        bool ok = true;
                        for (auto a : t)
                            for (auto bb : t)
                                if (a != bb && std::find(adjacency[a].begin(), adjacency[a].end(), bb) == adjacency[a].end())
                                    adjacency[a].push_back(bb);
                        if (max_degree)
                            for (auto a : t)
                                if (adjacency[a].size() > *max_degree)
                                    ok = false;
                        if (ok)
                            for (Colour e = 0 ; e < p.edge_palette().size() ; ++e) {
                                chosen.emplace_back(i, e);
                                choose(i + 1);
                                chosen.pop_back();
                            }
                        adjacency = std::move(saved);
                    };
                    choose(0);
                }
            };

            grow(base.structure);
            return result;
        }
    }

    auto BallTemplate::extensions(size_t member, Element label) -> const vector<size_t> &
    {
        auto k = std::pair{ member, label };
        auto f = _extensions.find(k);
        if (f != _extensions.end())
            return f->second;
        auto base = member_ball(_members[member], label, _m);
        vector<size_t> ids;
        for (auto & s : extend_layer(_problem, base, label, _m, _x,
                    _restrict_degree ? optional<size_t>(_b) : std::nullopt, false))
            ids.push_back(intern(std::move(s)));
        return _extensions.emplace(k, std::move(ids)).first->second;
    }

    auto BallTemplate::roots() -> const vector<Vertex> &
    {
        if (_roots)
            return *_roots;
        auto & sig = _problem.signature();
        optional<size_t> bound = _restrict_degree ? optional<size_t>(_b) : std::nullopt;

        // Radius-0 balls: one element with any loops.
        vector<Member> stage;
        vector<std::pair<SymbolId, vector<Element>>> loops;
        for (SymbolId s = 0 ; s < sig.size() ; ++s)
            if (sig.symbol(s).arity > 0)
                loops.emplace_back(s, vector<Element>(sig.symbol(s).arity, 0));
        for (Colour c = 0 ; c < _problem.vertex_palette().size() ; ++c) {
            vector<Colour> choice(loops.size(), 0);
            size_t e = _problem.edge_palette().size() + 1;
            while (true) {
                StructureBuilder b(sig, 1);
                b.set_colour(0, c);
                for (size_t i = 0 ; i < loops.size() ; ++i)
                    if (choice[i])
                        b.add(loops[i].first, loops[i].second, choice[i] - 1);
                auto s = b.build();
                if (is_valid(s, _problem) && (! bound || max_gaifman_degree(s) <= *bound))
                    stage.push_back(Member{ s, { 0 } });
                size_t k = 0;
                while (k < loops.size() && ++choice[k] == e)
                    choice[k++] = 0;
                if (k == loops.size())
                    break;
            }
        }

        for (size_t j = 0 ; j <= _m ; ++j) {
            std::set<Code> seen;
            vector<std::pair<Code, Member>> next;
            for (auto & base : stage)
                for (auto & s : extend_layer(_problem, base, 0, j, _x, bound, true)) {
                    Element root = *s.index_of(0);
                    vector<Element> pin{ root };
                    auto form = canonical_form(s.structure, pin);
                    if (! seen.insert(form.code).second)
                        continue;
                    vector<Element> labels(s.structure.size());
                    for (size_t k = 0 ; k < form.order.size() ; ++k)
                        labels[form.order[k]] = k;
                    next.emplace_back(form.code, make_member(s.structure, labels));
                }
            std::sort(next.begin(), next.end(), [] (const auto & a, const auto & b) { return a.first < b.first; });
            stage.clear();
            for (auto & [c, s] : next)
                stage.push_back(std::move(s));
        }

        _roots.emplace();
        for (auto & s : stage)
            _roots->push_back(Vertex{ 0, intern(std::move(s)) });
        return *_roots;
    }

    auto BallTemplate::is_vertex(Vertex v) const -> bool
    {
        if (v.member >= _members.size())
            return false;
        auto & s = _members[v.member];
        auto i = s.index_of(v.label);
        if (! i || s.labels.empty() || s.labels.back() >= _x)
            return false;
        if (! within(s.structure, *i, _m + 1))
            return false;
        if (_restrict_degree && max_gaifman_degree(s.structure) > _b)
            return false;
        return is_valid(s.structure, _problem);
    }

    auto BallTemplate::vertex_colour(Vertex v) const -> Colour
    {
        auto & s = _members.at(v.member);
        return s.structure.vertex_colour(*s.index_of(v.label));
    }

    auto BallTemplate::KeyHash::operator() (const vector<std::uint64_t> & k) const -> size_t
    {
        size_t h = k.size();
        for (auto x : k)
            h ^= std::hash<std::uint64_t>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    auto BallTemplate::tuple_colour(SymbolId sym, const vector<Vertex> & vs) -> optional<Colour>
    {
        vector<std::uint64_t> key{ sym };
        for (auto & v : vs) {
            key.push_back(v.label);
            key.push_back(v.member);
        }
        auto f = _tuple_colours.find(key);
        if (f != _tuple_colours.end())
            return f->second;
        auto c = uncached_tuple_colour(sym, vs);
        _tuple_colours.emplace(std::move(key), c);
        return c;
    }

    auto BallTemplate::neighbours(Vertex v) -> const vector<Vertex> &
    {
        auto f = _neighbours.find(v);
        if (f != _neighbours.end())
            return f->second;
        auto & ms = _members[v.member];
        auto pi = *ms.index_of(v.label);
        auto adj = gaifman_adjacency(ms.structure);
        vector<Element> labels{ v.label };
        for (auto y : adj.at(pi))
            labels.push_back(ms.labels[y]);
        vector<Vertex> result;
        for (auto l : labels)
            for (auto i : extensions(v.member, l))
                result.push_back(Vertex{ l, i });
        std::sort(result.begin(), result.end());
        return _neighbours.emplace(v, std::move(result)).first->second;
    }

    auto BallTemplate::uncached_tuple_colour(SymbolId sym, const vector<Vertex> & vs) -> optional<Colour>
    {
        vector<Element> labels;
        for (auto & v : vs)
            labels.push_back(v.label);
        optional<Colour> colour;
        for (auto & v : vs) {
            auto & s = _members[v.member];
            vector<Element> t;
            for (auto l : labels) {
                auto i = s.index_of(l);
                if (! i)
                    return std::nullopt;
                t.push_back(*i);
            }
            auto r = s.structure.find_tuple(sym, t);
            if (! r)
                return std::nullopt;
            auto c = s.structure.tuple_colour(*r);
            if (colour && *colour != c)
                return std::nullopt;
            colour = c;
        }
        for (auto l : labels)
            for (size_t j = 1 ; j < vs.size() ; ++j)
                if (ball_id(vs[j].member, l) != ball_id(vs[0].member, l))
                    return std::nullopt;
        return colour;
    }

    auto BallTemplate::find_hom(const Structure & g, std::uint64_t budget) -> optional<vector<Vertex>>
    {
        vector<Vertex> result(g.size());
        std::uint64_t nodes = 0;
        auto & rs = roots();

        for (auto & comp : components(g)) {
            auto & c = comp.structure;
            size_t n = c.size();
            auto adj = gaifman_adjacency(c);

            Element start = 0;
            auto loops = [&] (Element x) {
                size_t k = 0;
                for (auto r : c.incident(x)) {
                    auto t = c.tuple(r);
                    if (std::all_of(t.begin(), t.end(), [&] (Element y) { return y == x; }))
                        ++k;
                }
                return k;
            };
            for (Element x = 1 ; x < n ; ++x)
                if (std::pair{ loops(x), adj[x].size() } > std::pair{ loops(start), adj[start].size() })
                    start = x;

            vector<Vertex> h(n);
            vector<bool> placed(n, false);
            vector<optional<vector<Vertex>>> domain(n);
            domain[start] = rs;
            std::sort(domain[start]->begin(), domain[start]->end());

            // Tuples at x whose other elements are all placed.
            auto fits = [&] (Element x) {
                for (auto r : c.incident(x)) {
                    auto t = c.tuple(r);
                    if (std::any_of(t.begin(), t.end(), [&] (Element y) { return y != x && ! placed[y]; }))
                        continue;
                    vector<Vertex> vs;
                    for (auto y : t)
                        vs.push_back(h[y]);
                    if (! tuple_colour(r.symbol, vs))
                        return false;
                }
                return true;
            };

            // Vertices a neighbour w of a placed vertex z can take, given the
            // tuples that lie inside {z, w}. Tuples reaching other placed
            // elements are checked when w is placed.
            auto candidates = [&] (Element z, Element w) -> const vector<Vertex> & {
                vector<std::uint64_t> pattern;
                vector<std::pair<TupleRef, std::uint64_t>> inside;
                for (auto r : c.incident(w)) {
                    auto t = c.tuple(r);
                    if (std::any_of(t.begin(), t.end(), [&] (Element y) { return y != z && y != w; }))
                        continue;
                    std::uint64_t mask = 0;
                    for (size_t j = 0 ; j < t.size() ; ++j)
                        if (t[j] == w)
                            mask |= std::uint64_t(1) << j;
                    inside.emplace_back(r, mask);
                    pattern.push_back((std::uint64_t(r.symbol) << 32) | mask);
                }
                std::sort(pattern.begin(), pattern.end());
                pattern.erase(std::unique(pattern.begin(), pattern.end()), pattern.end());
                auto key = std::pair{ h[z], pattern };
                auto f = _compatible.find(key);
                if (f != _compatible.end())
                    return f->second;

                vector<Vertex> result;
                for (auto & v : neighbours(h[z])) {
                    bool ok = true;
                    for (auto & [r, mask] : inside) {
                        vector<Vertex> vs;
                        for (size_t j = 0 ; j < c.tuple(r).size() ; ++j)
                            vs.push_back((mask >> j) & 1 ? v : h[z]);
                        if (! tuple_colour(r.symbol, vs)) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok)
                        result.push_back(v);
                }
                return _compatible.emplace(std::move(key), std::move(result)).first->second;
            };

            std::function<bool (size_t)> place = [&] (size_t k) -> bool {
                if (k == n)
                    return true;
                optional<Element> z;
                for (Element x = 0 ; x < n ; ++x)
                    if (! placed[x] && domain[x] && (! z || domain[x]->size() < domain[*z]->size()))
                        z = x;
                auto values = *domain[*z];
                for (auto & v : values) {
                    if (budget && ++nodes > budget)
                        throw BudgetExceeded(fmt::format("implicit template search spent its budget of {} nodes", budget));
                    h[*z] = v;
                    if (! fits(*z))
                        continue;
                    placed[*z] = true;
                    vector<std::pair<Element, optional<vector<Vertex>>>> saved;
                    bool ok = true;
                    for (auto w : adj[*z]) {
                        if (placed[w])
                            continue;
                        auto cands = candidates(*z, w);
                        if (domain[w]) {
                            vector<Vertex> both;
                            std::set_intersection(domain[w]->begin(), domain[w]->end(), cands.begin(), cands.end(),
                                    std::back_inserter(both));
                            cands = std::move(both);
                        }
                        saved.emplace_back(w, std::move(domain[w]));
                        domain[w] = std::move(cands);
                        if (domain[w]->empty()) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok && place(k + 1))
                        return true;
                    while (! saved.empty()) {
                        domain[saved.back().first] = std::move(saved.back().second);
                        saved.pop_back();
                    }
                    placed[*z] = false;
                }
                return false;
            };

            if (! place(0))
                return std::nullopt;
            for (Element x = 0 ; x < n ; ++x)
                result[comp.origin[x]] = h[x];
        }
        return result;
    }

    auto BallTemplate::check_hom(const Structure & g, const vector<Vertex> & h, ColourMode colours) -> bool
    {
        if (h.size() != g.size())
            return false;
        for (Element x = 0 ; x < g.size() ; ++x) {
            if (! is_vertex(h[x]))
                return false;
            if (colours == ColourMode::preserve && vertex_colour(h[x]) != g.vertex_colour(x))
                return false;
        }
        for (auto r : g.all_tuples()) {
            vector<Vertex> vs;
            for (auto y : g.tuple(r))
                vs.push_back(h[y]);
            auto c = uncached_tuple_colour(r.symbol, vs);
            if (! c || (colours == ColourMode::preserve && *c != g.tuple_colour(r)))
                return false;
        }
        return true;
    }

    auto BallTemplate::embed(const Structure & coloured_g) -> vector<Vertex>
    {
        auto chi = ball_injective_labelling(coloured_g, _m + 1, _x);
        vector<Vertex> result;
        for (Element v = 0 ; v < coloured_g.size() ; ++v) {
            auto b = fpp::ball(coloured_g, v, _m + 1);
            vector<Element> labels;
            for (auto y : b.origin)
                labels.push_back(chi[y]);
            result.push_back(Vertex{ chi[v], intern(make_member(b.structure, labels)) });
        }
        return result;
    }

    auto BallTemplate::ball(Vertex v, size_t radius) -> std::pair<Structure, vector<Vertex>>
    {
        auto & sig = _problem.signature();
        std::map<Vertex, Element> found{ { v, 0 } };
        vector<Vertex> verts{ v };

        // Candidates for each position of a tuple of the member of u.
        auto positions = [&] (Vertex u, TupleRef r) {
            auto & s = _members[u.member];
            vector<Element> labels;
            for (auto x : s.structure.tuple(r))
                labels.push_back(s.labels[x]);
            vector<vector<Vertex>> result;
            for (auto l : labels) {
                vector<Vertex> cands;
                for (auto m : extensions(u.member, l))
                    if (tuple_colour(r.symbol, { u, Vertex{ l, m } }))
                        cands.push_back(Vertex{ l, m });
                result.push_back(std::move(cands));
            }
            return std::pair{ labels, result };
        };

        vector<Vertex> frontier{ v };
        for (size_t d = 0 ; d < radius ; ++d) {
            vector<Vertex> next;
            for (auto u : frontier) {
                auto & s = _members[u.member];
                auto ui = *s.index_of(u.label);
                for (auto r : s.structure.incident(ui))
                    for (auto & cands : positions(u, r).second)
                        for (auto w : cands)
                            if (found.emplace(w, verts.size()).second) {
                                verts.push_back(w);
                                next.push_back(w);
                            }
            }
            frontier = std::move(next);
        }

        std::map<Element, vector<Vertex>> by_label;
        for (auto & w : verts)
            by_label[w.label].push_back(w);

        StructureBuilder b(sig, verts.size());
        for (Element i = 0 ; i < verts.size() ; ++i)
            b.set_colour(i, vertex_colour(verts[i]));
        for (auto u : verts) {
            auto & s = _members[u.member];
            auto ui = *s.index_of(u.label);
            for (auto r : s.structure.incident(ui)) {
                vector<Element> labels;
                for (auto x : s.structure.tuple(r))
                    labels.push_back(s.labels[x]);
                unsigned arity = labels.size();
                vector<size_t> pick(arity, 0);
                vector<const vector<Vertex> *> pools;
                bool empty = false;
                for (auto l : labels) {
                    auto f = by_label.find(l);
                    if (f == by_label.end()) {
                        empty = true;
                        break;
                    }
                    pools.push_back(&f->second);
                }
                if (empty)
                    continue;
                while (true) {
                    vector<Vertex> vs;
                    for (unsigned j = 0 ; j < arity ; ++j)
                        vs.push_back((*pools[j])[pick[j]]);
                    if (std::find(vs.begin(), vs.end(), u) != vs.end())
                        if (auto c = tuple_colour(r.symbol, vs)) {
                            vector<Element> t;
                            for (auto & w : vs)
                                t.push_back(found[w]);
                            b.add(r.symbol, t, *c);
                        }
                    unsigned j = 0;
                    while (j < arity && ++pick[j] == pools[j]->size())
                        pick[j++] = 0;
                    if (j == arity)
                        break;
                }
            }
        }
        return { b.build(), verts };
    }

    auto BallTemplate::ball_lemma_holds(Vertex v) -> bool
    {
        auto [b, verts] = ball(v, _m);
        auto & s = _members[v.member];
        Hom h;
        for (auto & w : verts) {
            auto i = s.index_of(w.label);
            if (! i)
                return false;
            h.push_back(*i);
        }
        return fpp::check_hom(b, s.structure, h);
    }

    auto enumerate_valid_cores(const Problem & p, size_t td_bound, size_t n_max, size_t budget) -> vector<Structure>
    {
        EnumerateOptions o;
        o.signature = p.signature();
        o.vertex_colours = p.vertex_palette().size();
        o.tuple_colours = p.edge_palette().size();
        o.max_size = n_max;
        o.connected = true;
        o.keep = [&] (const Structure & s) { return is_valid(s, p) && tree_depth(s).value <= td_bound; };
        o.budget = budget;

        std::set<Code> seen;
        vector<std::pair<Code, Structure>> cores;
        for (auto & s : enumerate_structures(o)) {
            auto c = core(s).core;
            auto form = canonical_form(c);
            if (seen.insert(form.code).second)
                cores.emplace_back(form.code, permuted(c, form.order));
        }
        std::sort(cores.begin(), cores.end(), [] (const auto & a, const auto & b) {
                return std::pair{ a.second.size(), a.first } < std::pair{ b.second.size(), b.first }; });
        vector<Structure> result;
        for (auto & [code, s] : cores)
            result.push_back(std::move(s));
        return result;
    }

    auto low_td_universal(const Problem & problem, size_t p, size_t q, size_t n_max, const LowTdOptions & options) -> LowTdTemplate
    {
        if (p <= problem.signature().max_arity())
            throw FormatError(fmt::format("p = {} must exceed the largest arity {}", p, problem.signature().max_arity()));
        for (auto & f : problem.patterns())
            if (f.size() >= p)
                throw FormatError(fmt::format("p = {} must exceed every pattern size, but a pattern has {} elements", p, f.size()));
        if (q < p)
            throw FormatError("q must be at least p");

        LowTdTemplate t;
        t.p = p;
        t.q = q;
        t.cores = enumerate_valid_cores(problem, p, n_max, options.enumeration_budget);

        vector<const Structure *> parts;
        if (options.reduce_base) {
            // Keep the cores that map into no other; pairwise incomparable
            // connected cores form a core.
            for (size_t i = 0 ; i < t.cores.size() ; ++i) {
                bool dominated = false;
                for (size_t j = 0 ; j < t.cores.size() && ! dominated ; ++j)
                    if (i != j && fpp::find_hom(t.cores[i], t.cores[j]))
                        dominated = true;
                if (! dominated)
                    parts.push_back(&t.cores[i]);
            }
        }
        else
            for (auto & c : t.cores)
                parts.push_back(&c);

        t.base = StructureBuilder(problem.signature(), 0).build();
        for (auto c : parts)
            t.base = disjoint_union(t.base, *c);

        if (t.base.size() == 0)
            t.carrier = t.base;
        else {
            t.stages = iterated_truncated_product(t.base, p + 1, q, options.products);
            t.carrier = t.stages.empty() ? t.base : t.stages.back().carrier;
        }
        return t;
    }

    auto verify_duality(const vector<Structure> & inputs, const Problem & p,
            const std::function<auto (const Structure &) -> optional<Hom>> & hom_to_template,
            std::uint64_t budget) -> DualityReport
    {
        DualityReport report;
        for (auto & g : inputs) {
            ++report.cases;
            optional<Structure> colouring;
            optional<Hom> h;
            try {
                colouring = decide_fpp(g, p, FppOptions{ budget });
                h = hom_to_template(g);
            }
            catch (const BudgetExceeded &) {
                ++report.exhausted;
                continue;
            }
            if (colouring.has_value() == h.has_value())
                ++report.agreements;
            else
                report.disagreements.push_back(Disagreement{ g, colouring.has_value(), h.has_value(), colouring, h });
        }
        return report;
    }

    auto witness_gn(size_t n) -> WitnessGraph
    {
        if (n < 2)
            throw FormatError("witness_gn needs n >= 2");
        WitnessGraph w;
        vector<std::pair<Element, Element>> edges;
        Element next = n;
        for (Element i = 0 ; i < n ; ++i)
            w.special.push_back(i);
        for (Element i = 0 ; i < n ; ++i)
            for (Element j = i + 1 ; j < n ; ++j) {
                Element a = next++, b = next++;
                edges.insert(edges.end(), { { i, a }, { a, b }, { b, j } });
                w.orientation.insert(w.orientation.end(), { { i, a }, { a, b }, { j, b } });
            }
        w.graph = encode_graph(next, edges);
        return w;
    }
}
