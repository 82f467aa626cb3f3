/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>
#include <fpp/products.hh>

#include <algorithm>
#include <functional>
#include <unordered_map>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::vector;

namespace fpp
{
    auto product(const Structure & a, const Structure & b) -> Structure
    {
        if (! (a.signature() == b.signature()))
            throw FormatError("product of structures over different signatures");
        size_t nb = b.size();
        StructureBuilder out(a.signature(), a.size() * nb);
        vector<std::string> names;
        for (Element x = 0 ; x < a.size() ; ++x)
            for (Element y = 0 ; y < nb ; ++y)
                names.push_back("(" + a.name(x) + "," + b.name(y) + ")");
        out.set_names(std::move(names));

        vector<Element> t;
        for (SymbolId s = 0 ; s < a.signature().size() ; ++s) {
            auto & ra = a.relation(s);
            auto & rb = b.relation(s);
            for (size_t i = 0 ; i < ra.size() ; ++i)
                for (size_t j = 0 ; j < rb.size() ; ++j) {
                    auto ta = ra.tuple(i), tb = rb.tuple(j);
                    t.clear();
                    for (size_t k = 0 ; k < ta.size() ; ++k)
                        t.push_back(ta[k] * nb + tb[k]);
                    out.add(s, t);
                }
        }
        return out.build();
    }

    auto TruncatedProduct::find(const vector<Element> & c) const -> optional<Element>
    {
        // Elements are generated in lexicographic order of (star, coords).
        size_t lo = 0, hi = coords.size();
        auto key = [&] (size_t w) { return std::tie(star_index[w], coords[w]); };
        size_t s = std::find(c.begin(), c.end(), star) - c.begin();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (key(mid) < std::tie(s, c))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < coords.size() && star_index[lo] == s && coords[lo] == c)
            return Element(lo);
        return std::nullopt;
    }

    namespace
    {
        auto by_colour(const Structure & cs) -> vector<vector<Element>>
        {
            Colour top = 0;
            for (auto c : cs.vertex_colours())
                top = std::max(top, c + 1);
            vector<vector<Element>> result(top);
            for (Element x = 0 ; x < cs.size() ; ++x)
                result[cs.vertex_colour(x)].push_back(x);
            return result;
        }

        auto power(size_t base, size_t exp) -> long double
        {
            long double r = 1;
            for (size_t i = 0 ; i < exp ; ++i)
                r *= base;
            return r;
        }
    }

    auto truncated_product_size(const Structure & cs, size_t p) -> size_t
    {
        long double total = 0;
        for (auto & group : by_colour(cs))
            total += p * power(group.size(), p - 1);
        if (total > static_cast<long double>(std::numeric_limits<size_t>::max()))
            return std::numeric_limits<size_t>::max();
        return size_t(total);
    }

    auto truncated_product(const Structure & cs, size_t p, const ProductOptions & options) -> TruncatedProduct
    {
        if (p < 2)
            throw FormatError("truncated products need p >= 2");
        size_t forecast = truncated_product_size(cs, p);
        if (forecast > options.element_cap)
            throw BudgetExceeded(fmt::format("truncated product with p={} of a {}-element structure would have {} elements, over the cap of {}",
                        p, cs.size(), forecast, options.element_cap));

        TruncatedProduct tp;
        tp.p = p;
        auto groups = by_colour(cs);
        vector<Colour> element_colour;

        for (size_t i = 0 ; i < p ; ++i)
            for (Colour v = 0 ; v < groups.size() ; ++v) {
                auto & g = groups[v];
                if (g.empty())
                    continue;
                vector<size_t> digit(p - 1, 0);
                while (true) {
                    vector<Element> c;
                    for (size_t k = 0, d = 0 ; k < p ; ++k)
                        c.push_back(k == i ? star : g[digit[d++]]);
                    tp.coords.push_back(std::move(c));
                    tp.star_index.push_back(i);
                    element_colour.push_back(v);
                    size_t k = p - 1;
                    while (k > 0 && ++digit[k - 1] == g.size())
                        digit[--k] = 0;
                    if (k == 0)
                        break;
                }
            }

        // Sort into (star, coords) order so find() can binary search.
        vector<size_t> order(tp.coords.size());
        for (size_t w = 0 ; w < order.size() ; ++w)
            order[w] = w;
        std::sort(order.begin(), order.end(), [&] (size_t a, size_t b) {
                return std::tie(tp.star_index[a], tp.coords[a]) < std::tie(tp.star_index[b], tp.coords[b]);
                });
        {
            TruncatedProduct sorted;
            vector<Colour> sc;
            for (auto w : order) {
                sorted.coords.push_back(std::move(tp.coords[w]));
                sorted.star_index.push_back(tp.star_index[w]);
                sc.push_back(element_colour[w]);
            }
            tp.coords = std::move(sorted.coords);
            tp.star_index = std::move(sorted.star_index);
            element_colour = std::move(sc);
        }

        size_t n = tp.coords.size();
        StructureBuilder b(cs.signature(), n);
        vector<std::string> names;
        for (Element w = 0 ; w < n ; ++w) {
            b.set_colour(w, element_colour[w]);
            std::string name = "(";
            for (size_t k = 0 ; k < p ; ++k) {
                if (k)
                    name += ",";
                name += tp.coords[w][k] == star ? std::string("*") : cs.name(tp.coords[w][k]);
            }
            names.push_back(name + ")");
        }
        b.set_names(std::move(names));

        size_t tuples = 0;
        for (SymbolId sym = 0 ; sym < cs.signature().size() ; ++sym) {
            unsigned r = cs.signature().symbol(sym).arity;
            auto & rel = cs.relation(sym);
            if (r == 0) {
                if (rel.size())
                    b.add(sym, std::span<const Element>{}, rel.colour(0));
                continue;
            }

            vector<size_t> stars(r, 0);
            while (true) {
                vector<bool> hit(p, false);
                for (auto s : stars)
                    hit[s] = true;
                vector<size_t> free;
                for (size_t i = 0 ; i < p ; ++i)
                    if (! hit[i])
                        free.push_back(i);

                // Choose the projected tuple at each free coordinate, then the
                // entries at hit coordinates other than each element's own star.
                vector<vector<Element>> coord(r, vector<Element>(p, star));
                std::function<void (size_t, optional<Colour>)> pick_tuples;
                std::function<void (size_t, size_t, Colour)> pick_rest;

                pick_rest = [&] (size_t k, size_t i, Colour e) {
                    if (k == r) {
                        vector<Element> t;
                        for (size_t j = 0 ; j < r ; ++j) {
                            auto w = tp.find(coord[j]);
                            if (! w)
                                return;
                            t.push_back(*w);
                        }
                        if (++tuples > options.tuple_cap)
                            throw BudgetExceeded(fmt::format("truncated product has more than {} tuples", options.tuple_cap));
                        b.add(sym, t, e);
                        return;
                    }
                    if (i == p) {
                        pick_rest(k + 1, 0, e);
                        return;
                    }
                    if (! hit[i] || i == stars[k]) {
                        pick_rest(k, i + 1, e);
                        return;
                    }
                    // Entries must share the colour of the element's other entries.
                    optional<Colour> v;
                    for (size_t j = 0 ; j < p ; ++j)
                        if (! hit[j])
                            v = cs.vertex_colour(coord[k][j]);
                    if (v) {
                        if (*v >= groups.size())
                            return;
                        for (auto x : groups[*v]) {
                            coord[k][i] = x;
                            pick_rest(k, i + 1, e);
                        }
                    }
                    else {
                        // No free coordinate fixed the colour yet: choose it now
                        // from the first hit entry and keep it for the rest.
                        optional<Colour> fixed;
                        for (size_t j = 0 ; j < i ; ++j)
                            if (hit[j] && j != stars[k])
                                fixed = cs.vertex_colour(coord[k][j]);
                        for (Element x = 0 ; x < cs.size() ; ++x) {
                            if (fixed && cs.vertex_colour(x) != *fixed)
                                continue;
                            coord[k][i] = x;
                            pick_rest(k, i + 1, e);
                        }
                    }
                    coord[k][i] = star;
                };

                pick_tuples = [&] (size_t f, optional<Colour> e) {
                    if (f == free.size()) {
                        pick_rest(0, 0, e.value_or(0));
                        return;
                    }
                    size_t i = free[f];
                    for (size_t ti = 0 ; ti < rel.size() ; ++ti) {
                        if (e && rel.colour(ti) != *e)
                            continue;
                        auto t = rel.tuple(ti);
                        bool ok = true;
                        for (size_t k = 0 ; k < r && ok ; ++k) {
                            coord[k][i] = t[k];
                            if (f > 0 && cs.vertex_colour(t[k]) != cs.vertex_colour(coord[k][free[0]]))
                                ok = false;
                        }
                        if (ok)
                            pick_tuples(f + 1, rel.colour(ti));
                    }
                    for (size_t k = 0 ; k < r ; ++k)
                        coord[k][i] = star;
                };

                pick_tuples(0, std::nullopt);

                size_t k = 0;
                while (k < r && ++stars[k] == p)
                    stars[k++] = 0;
                if (k == r)
                    break;
            }
        }

        tp.carrier = b.build();
        return tp;
    }

    auto iterated_truncated_product(const Structure & cs, size_t from, size_t to, const ProductOptions & options) -> vector<TruncatedProduct>
    {
        vector<TruncatedProduct> stages;
        const Structure * current = &cs;
        for (size_t k = from ; k <= to ; ++k) {
            try {
                stages.push_back(truncated_product(*current, k, options));
            }
            catch (const BudgetExceeded & e) {
                throw BudgetExceeded(fmt::format("stage {}: {}", k, e.what()));
            }
            current = &stages.back().carrier;
        }
        return stages;
    }

    auto coordinate_projection(const TruncatedProduct & tp, size_t i0) -> Projection
    {
        if (i0 >= tp.p)
            throw FormatError("projection coordinate out of range");
        vector<Element> keep;
        for (Element w = 0 ; w < tp.coords.size() ; ++w)
            if (tp.star_index[w] != i0)
                keep.push_back(w);
        auto domain = induced(tp.carrier, keep);
        Hom map;
        for (auto w : keep)
            map.push_back(tp.coords[w][i0]);
        return Projection{ std::move(domain), std::move(map) };
    }

    auto assemble_partial_homs(const Structure & s, const vector<size_t> & parts, const vector<Hom> & partial,
            const TruncatedProduct & tp) -> Hom
    {
        if (parts.size() != s.size() || partial.size() != tp.p)
            throw FormatError("assembly needs one part per element and one partial map per part");
        Hom result;
        for (Element x = 0 ; x < s.size() ; ++x) {
            vector<Element> c(tp.p, star);
            for (size_t k = 0 ; k < tp.p ; ++k)
                if (k != parts[x])
                    c[k] = partial[k].at(x);
            auto w = tp.find(c);
            if (! w)
                throw FormatError("assembled element is not in the truncated product");
            result.push_back(*w);
        }
        return result;
    }
}
