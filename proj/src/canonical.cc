/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include <fmt/core.h>

using std::size_t;
using std::span;
using std::vector;

namespace fpp
{
    auto CodeHash::operator() (const Code & c) const -> size_t
    {
        size_t h = 0xcbf29ce484222325ULL;
        for (auto v : c) {
            h ^= v;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    auto code_under(const Structure & s, span<const Element> position) -> Code
    {
        Code code;
        code.push_back(s.size());
        vector<Colour> vc(s.size());
        for (Element x = 0 ; x < s.size() ; ++x)
            vc[position[x]] = s.vertex_colour(x);
        code.insert(code.end(), vc.begin(), vc.end());

        vector<std::uint32_t> rows;
        for (SymbolId sym = 0 ; sym < s.signature().size() ; ++sym) {
            auto & rel = s.relation(sym);
            unsigned w = rel.arity() + 1;
            rows.assign(rel.size() * w, 0);
            for (size_t i = 0 ; i < rel.size() ; ++i) {
                auto t = rel.tuple(i);
                for (unsigned j = 0 ; j < rel.arity() ; ++j)
                    rows[i * w + j] = position[t[j]];
                rows[i * w + rel.arity()] = rel.colour(i);
            }
            vector<size_t> idx(rel.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&] (size_t a, size_t b) {
                    return std::lexicographical_compare(rows.begin() + a * w, rows.begin() + (a + 1) * w,
                            rows.begin() + b * w, rows.begin() + (b + 1) * w);
                    });
            code.push_back(rel.size());
            for (auto i : idx)
                code.insert(code.end(), rows.begin() + i * w, rows.begin() + (i + 1) * w);
        }
        return code;
    }

    auto exact_code(const Structure & s) -> Code
    {
        vector<Element> id(s.size());
        std::iota(id.begin(), id.end(), 0);
        return code_under(s, id);
    }

    namespace
    {
        using Cells = vector<std::uint32_t>;

        // Re-rank arbitrary keys into dense cell numbers.
        template <typename Key_>
        auto rank(const vector<Key_> & keys) -> Cells
        {
            vector<Key_> sorted = keys;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            Cells result(keys.size());
            for (size_t i = 0 ; i < keys.size() ; ++i)
                result[i] = std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin();
            return result;
        }

        auto count_cells(const Cells & c) -> size_t
        {
            if (c.empty())
                return 0;
            return *std::max_element(c.begin(), c.end()) + 1;
        }

        auto refine(const Structure & s, Cells cells) -> Cells
        {
            size_t n = count_cells(cells);
            while (true) {
                vector<vector<std::uint32_t>> keys(s.size());
                for (Element x = 0 ; x < s.size() ; ++x) {
                    vector<vector<std::uint32_t>> parts;
                    for (auto r : s.incident(x)) {
                        auto t = s.tuple(r);
                        vector<std::uint32_t> part{ r.symbol, s.tuple_colour(r) };
                        for (auto y : t) {
                            part.push_back(y == x ? 1 : 0);
                            part.push_back(cells[y]);
                        }
                        parts.push_back(std::move(part));
                    }
                    std::sort(parts.begin(), parts.end());
                    auto & k = keys[x];
                    k.push_back(cells[x]);
                    for (auto & p : parts) {
                        k.push_back(p.size());
                        k.insert(k.end(), p.begin(), p.end());
                    }
                }
                auto next = rank(keys);
                size_t m = count_cells(next);
                if (m == n)
                    return next;
                cells = std::move(next);
                n = m;
            }
        }

        struct Search
        {
            const Structure & s;
            std::optional<Code> best;
            vector<Element> best_order;

            void go(const Cells & cells)
            {
                size_t n = s.size();
                if (count_cells(cells) == n) {
                    auto code = code_under(s, cells);
                    if (! best || code < *best) {
                        best = std::move(code);
                        best_order.assign(n, 0);
                        for (Element x = 0 ; x < n ; ++x)
                            best_order[cells[x]] = x;
                    }
                    return;
                }

                vector<size_t> sizes(count_cells(cells), 0);
                for (auto c : cells)
                    ++sizes[c];
                std::uint32_t target = 0;
                while (sizes[target] == 1)
                    ++target;

                for (Element v = 0 ; v < n ; ++v) {
                    if (cells[v] != target)
                        continue;
                    vector<std::pair<std::uint32_t, std::uint32_t>> keys(n);
                    for (Element x = 0 ; x < n ; ++x)
                        keys[x] = { cells[x], (cells[x] == target && x != v) ? 1 : 0 };
                    go(refine(s, rank(keys)));
                }
            }
        };
    }

    auto canonical_form(const Structure & s, span<const Element> pinned, size_t cap) -> CanonicalForm
    {
        if (s.size() > cap)
            throw BudgetExceeded(fmt::format("canonical form of a structure with {} elements exceeds the cap of {}", s.size(), cap));

        vector<std::pair<std::uint32_t, Colour>> keys(s.size());
        for (Element x = 0 ; x < s.size() ; ++x)
            keys[x] = { std::uint32_t(pinned.size()), s.vertex_colour(x) };
        for (size_t i = 0 ; i < pinned.size() ; ++i)
            keys.at(pinned[i]).first = i;

        Search search{ s, std::nullopt, {} };
        search.go(refine(s, rank(keys)));
        if (s.size() == 0)
            return CanonicalForm{ exact_code(s), {} };
        return CanonicalForm{ std::move(*search.best), std::move(search.best_order) };
    }

    auto is_isomorphic(const Structure & a, const Structure & b, size_t cap) -> bool
    {
        if (a.size() != b.size() || ! (a.signature() == b.signature()) || a.tuple_count() != b.tuple_count())
            return false;
        return canonical_form(a, {}, cap).code == canonical_form(b, {}, cap).code;
    }

    auto permuted(const Structure & s, span<const Element> order) -> Structure
    {
        if (order.size() != s.size())
            throw FormatError("permutation of the wrong length");
        vector<Element> position(s.size());
        for (size_t k = 0 ; k < order.size() ; ++k)
            position[order[k]] = k;

        StructureBuilder b(s.signature(), s.size());
        for (Element x = 0 ; x < s.size() ; ++x)
            b.set_colour(position[x], s.vertex_colour(x));
        vector<Element> buf;
        for (auto r : s.all_tuples()) {
            buf.clear();
            for (auto y : s.tuple(r))
                buf.push_back(position[y]);
            b.add(r.symbol, buf, s.tuple_colour(r));
        }
        if (s.has_names()) {
            vector<std::string> names;
            for (auto o : order)
                names.push_back(s.name(o));
            b.set_names(std::move(names));
        }
        return b.build();
    }
}
