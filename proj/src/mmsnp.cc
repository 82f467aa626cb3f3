/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/mmsnp.hh>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include <fmt/core.h>

using std::optional;
using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace fpp
{
    ParseError::ParseError(const string & message, size_t l, size_t c) :
        FormatError(fmt::format("{}:{}: {}", l, c, message)),
        line(l),
        column(c)
    {
    }

    namespace
    {
        enum class Kind
        {
            name,
            open,
            close,
            comma,
            dot,
            amp,
            bang,
            bar,
            equals,
            end
        };

        struct Token
        {
            Kind kind;
            string text;
            size_t line, column;
        };

        auto tokenise(string_view text) -> vector<Token>
        {
            vector<Token> result;
            size_t line = 1, column = 1;
            for (size_t i = 0 ; i < text.size() ; ) {
                char c = text[i];
                if (c == '\n') {
                    ++line;
                    column = 1;
                    ++i;
                    continue;
                }
                if (std::isspace(static_cast<unsigned char>(c))) {
                    ++column;
                    ++i;
                    continue;
                }
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    size_t j = i;
                    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                        ++j;
                    result.push_back(Token{ Kind::name, string(text.substr(i, j - i)), line, column });
                    column += j - i;
                    i = j;
                    continue;
                }
                Kind k;
                switch (c) {
                    case '(': k = Kind::open; break;
                    case ')': k = Kind::close; break;
                    case ',': k = Kind::comma; break;
                    case '.': k = Kind::dot; break;
                    case '&': k = Kind::amp; break;
                    case '!': k = Kind::bang; break;
                    case '|': k = Kind::bar; break;
                    case '=': k = Kind::equals; break;
                    default:
                        throw ParseError(fmt::format("unexpected character '{}'", c), line, column);
                }
                if (k == Kind::bang && i + 1 < text.size() && text[i + 1] == '=')
                    k = Kind::equals;
                result.push_back(Token{ k, string(1, c), line, column });
                ++column;
                ++i;
            }
            result.push_back(Token{ Kind::end, "", line, column });
            return result;
        }

        auto describe(Kind k) -> string
        {
            switch (k) {
                case Kind::name: return "a name";
                case Kind::open: return "'('";
                case Kind::close: return "')'";
                case Kind::comma: return "','";
                case Kind::dot: return "'.'";
                case Kind::amp: return "'&'";
                case Kind::bang: return "'!'";
                case Kind::bar: return "'|'";
                case Kind::equals: return "'='";
                case Kind::end: return "the end of the input";
            }
            return "?";
        }

        class Parser
        {
            private:
                vector<Token> _tokens;
                size_t _at = 0;
                Sentence _s;
                std::set<string> _monadic, _variables;
                std::map<string, size_t> _arity;

                auto peek() const -> const Token & { return _tokens[_at]; }

                [[noreturn]] void fail(const Token & t, const string & message) const
                {
                    throw ParseError(message, t.line, t.column);
                }

                auto expect(Kind k) -> const Token &
                {
                    auto & t = _tokens[_at];
                    if (t.kind == Kind::equals)
                        fail(t, "the equality symbol may not occur in a sentence");
                    if (t.kind != k)
                        fail(t, fmt::format("expected {} but found {}", describe(k), t.kind == Kind::end ? describe(Kind::end) : "'" + t.text + "'"));
                    ++_at;
                    return t;
                }

                void keyword(const string & word)
                {
                    auto & t = peek();
                    if (t.kind != Kind::name || t.text != word)
                        fail(t, fmt::format("expected '{}'", word));
                    ++_at;
                }

                // Comma-separated names up to the dot; may be empty.
                auto name_list(std::set<string> & seen) -> vector<string>
                {
                    vector<string> names;
                    if (peek().kind == Kind::dot) {
                        ++_at;
                        return names;
                    }
                    while (true) {
                        auto & t = expect(Kind::name);
                        if (! seen.insert(t.text).second)
                            fail(t, fmt::format("'{}' is listed twice", t.text));
                        names.push_back(t.text);
                        if (peek().kind == Kind::comma) {
                            ++_at;
                            continue;
                        }
                        expect(Kind::dot);
                        return names;
                    }
                }

                auto variable() -> string
                {
                    auto & t = expect(Kind::name);
                    if (! _variables.contains(t.text))
                        fail(t, fmt::format("'{}' is not a quantified variable", t.text));
                    if (peek().kind == Kind::equals)
                        fail(peek(), "the equality symbol may not occur in a sentence");
                    return t.text;
                }

                auto relation_atom(const Token & name) -> Atom
                {
                    if (_monadic.contains(name.text))
                        fail(name, fmt::format("'{}' is monadic and cannot take a tuple of variables", name.text));
                    Atom a{ name.text, {} };
                    expect(Kind::open);
                    if (peek().kind != Kind::close)
                        while (true) {
                            a.args.push_back(variable());
                            if (peek().kind != Kind::comma)
                                break;
                            ++_at;
                        }
                    expect(Kind::close);
                    auto [i, fresh] = _arity.emplace(a.relation, a.args.size());
                    if (! fresh && i->second != a.args.size())
                        fail(name, fmt::format("'{}' is used with arities {} and {}", a.relation, i->second, a.args.size()));
                    return a;
                }

                void item(NegatedConjunct & c, vector<std::pair<Atom, Token>> & edge_atoms)
                {
                    bool negated = false;
                    auto & first = peek();
                    if (first.kind == Kind::bang) {
                        negated = true;
                        ++_at;
                    }
                    auto & name = expect(Kind::name);
                    if (! _monadic.contains(name.text)) {
                        if (negated)
                            fail(first, fmt::format("negated atom over '{}': only monadic predicates may be negated, "
                                        "as sentences must be monotone", name.text));
                        c.alpha.push_back(relation_atom(name));
                        return;
                    }
                    expect(Kind::open);
                    auto & arg = expect(Kind::name);
                    MonadicLiteral l{ ! negated, name.text, "", std::nullopt };
                    if (peek().kind == Kind::open) {
                        l.atom = relation_atom(arg);
                        edge_atoms.emplace_back(*l.atom, arg);
                    }
                    else {
                        if (! _variables.contains(arg.text))
                            fail(arg, fmt::format("'{}' is not a quantified variable", arg.text));
                        l.variable = arg.text;
                    }
                    if (peek().kind == Kind::equals)
                        fail(peek(), "the equality symbol may not occur in a sentence");
                    expect(Kind::close);
                    c.beta.push_back(std::move(l));
                }

                auto conjunct() -> NegatedConjunct
                {
                    expect(Kind::bang);
                    expect(Kind::open);
                    NegatedConjunct c;
                    vector<std::pair<Atom, Token>> edge_atoms;
                    while (true) {
                        item(c, edge_atoms);
                        if (peek().kind != Kind::amp)
                            break;
                        ++_at;
                    }
                    expect(Kind::close);
                    for (auto & [a, t] : edge_atoms)
                        if (std::find(c.alpha.begin(), c.alpha.end(), a) == c.alpha.end())
                            fail(t, fmt::format("a literal over the tuple {}(...) needs that atom in the conjunct", a.relation));
                    return c;
                }

            public:
                explicit Parser(vector<Token> tokens) :
                    _tokens(std::move(tokens))
                {
                }

                auto at_end() const -> bool { return peek().kind == Kind::end; }

                auto at_bar() -> bool
                {
                    if (peek().kind != Kind::bar)
                        return false;
                    ++_at;
                    return true;
                }

                auto sentence() -> Sentence
                {
                    _s = Sentence{};
                    _monadic.clear();
                    _variables.clear();
                    _arity.clear();

                    keyword("exists");
                    _s.monadic = name_list(_monadic);
                    keyword("forall");
                    _s.variables = name_list(_variables);
                    for (auto & v : _s.variables)
                        if (_monadic.contains(v))
                            fail(peek(), fmt::format("'{}' names both a predicate and a variable", v));

                    if (peek().kind == Kind::name && peek().text == "true")
                        ++_at;
                    else
                        while (true) {
                            _s.conjuncts.push_back(conjunct());
                            if (peek().kind != Kind::amp)
                                break;
                            ++_at;
                        }
                    if (peek().kind == Kind::equals)
                        fail(peek(), "the equality symbol may not occur in a sentence");

                    for (auto & c : _s.conjuncts)
                        for (auto & l : c.beta)
                            if (l.atom)
                                _s.dialect = Dialect::mmsnp2;
                    return _s;
                }

                void finish()
                {
                    if (! at_end())
                        fail(peek(), fmt::format("unexpected '{}' after the sentence", peek().text));
                }
        };

        auto render_atom(const Atom & a) -> string
        {
            string s = a.relation + "(";
            for (size_t i = 0 ; i < a.args.size() ; ++i)
                s += (i ? "," : "") + a.args[i];
            return s + ")";
        }

        auto join(const vector<string> & parts, const string & sep) -> string
        {
            string s;
            for (size_t i = 0 ; i < parts.size() ; ++i)
                s += (i ? sep : "") + parts[i];
            return s;
        }

        // Variables of a conjunct in the order of the quantifier.
        auto conjunct_variables(const Sentence & s, const NegatedConjunct & c) -> vector<string>
        {
            std::set<string> used;
            for (auto & a : c.alpha)
                used.insert(a.args.begin(), a.args.end());
            for (auto & l : c.beta) {
                if (l.atom)
                    used.insert(l.atom->args.begin(), l.atom->args.end());
                else
                    used.insert(l.variable);
            }
            vector<string> result;
            for (auto & v : s.variables)
                if (used.contains(v))
                    result.push_back(v);
            return result;
        }

        auto ceil_log2(size_t k) -> size_t
        {
            size_t m = 0;
            while ((size_t(1) << m) < k)
                ++m;
            return m;
        }

        auto assignment_palette(const vector<string> & predicates) -> Palette
        {
            if (predicates.empty())
                return { "0" };
            Palette result;
            for (size_t a = 0 ; a < (size_t(1) << predicates.size()) ; ++a) {
                vector<string> parts;
                for (size_t j = 0 ; j < predicates.size() ; ++j)
                    parts.push_back(((a >> j) & 1 ? "" : "!") + predicates[j]);
                result.push_back(join(parts, "&"));
            }
            return result;
        }

        inline constexpr size_t max_predicates = 12;
    }

    auto parse_sentence(string_view text) -> Sentence
    {
        Parser p(tokenise(text));
        auto s = p.sentence();
        p.finish();
        return s;
    }

    auto parse_disjunction(string_view text) -> vector<Sentence>
    {
        Parser p(tokenise(text));
        vector<Sentence> result{ p.sentence() };
        while (p.at_bar())
            result.push_back(p.sentence());
        p.finish();
        return result;
    }

    auto render(const Sentence & s) -> string
    {
        string out = "exists " + join(s.monadic, ",") + ". forall " + join(s.variables, ",") + ". ";
        if (s.conjuncts.empty())
            return out + "true";
        vector<string> conjuncts;
        for (auto & c : s.conjuncts) {
            vector<string> items;
            for (auto & a : c.alpha)
                items.push_back(render_atom(a));
            for (auto & l : c.beta)
                items.push_back((l.positive ? "" : "!") + l.predicate + "(" + (l.atom ? render_atom(*l.atom) : l.variable) + ")");
            conjuncts.push_back("!(" + join(items, "&") + ")");
        }
        return out + join(conjuncts, " & ");
    }

    auto is_primitive(const Sentence & s) -> PrimitivityReport
    {
        PrimitivityReport report;
        auto complain = [&] (string message) {
            report.primitive = false;
            report.diagnostics.push_back(std::move(message));
        };

        for (size_t i = 0 ; i < s.conjuncts.size() ; ++i) {
            auto & c = s.conjuncts[i];
            auto vars = conjunct_variables(s, c);

            for (auto & x : vars)
                for (auto & m : s.monadic) {
                    bool pos = false, neg = false;
                    for (auto & l : c.beta)
                        if (! l.atom && l.variable == x && l.predicate == m)
                            (l.positive ? pos : neg) = true;
                    if (pos == neg)
                        complain(fmt::format("conjunct {}: variable {} needs exactly one of {}({}) and !{}({}), but has {}",
                                    i + 1, x, m, x, m, x, pos ? "both" : "neither"));
                }

            if (vars.size() > 1)
                for (auto & x : vars)
                    if (std::none_of(c.alpha.begin(), c.alpha.end(), [&] (const Atom & a) {
                                return std::find(a.args.begin(), a.args.end(), x) != a.args.end(); }))
                        complain(fmt::format("conjunct {}: variable {} occurs in no atom", i + 1, x));

            vector<string> in_alpha;
            for (auto & x : vars)
                for (auto & a : c.alpha)
                    if (std::find(a.args.begin(), a.args.end(), x) != a.args.end()) {
                        in_alpha.push_back(x);
                        break;
                    }
            if (! in_alpha.empty()) {
                std::set<string> reached{ in_alpha[0] };
                bool grew = true;
                while (grew) {
                    grew = false;
                    for (auto & a : c.alpha)
                        if (std::any_of(a.args.begin(), a.args.end(), [&] (const string & y) { return reached.contains(y); }))
                            for (auto & y : a.args)
                                grew = reached.insert(y).second || grew;
                }
                if (reached.size() != in_alpha.size())
                    complain(fmt::format("conjunct {}: the structure of its atoms is not connected", i + 1));
            }

            if (s.dialect == Dialect::mmsnp2)
                for (auto & a : c.alpha)
                    for (auto & m : s.monadic) {
                        bool pos = false, neg = false;
                        for (auto & l : c.beta)
                            if (l.atom && *l.atom == a && l.predicate == m)
                                (l.positive ? pos : neg) = true;
                        if (pos == neg)
                            complain(fmt::format("conjunct {}: tuple {} needs exactly one of {}({}) and !{}({}), but has {}",
                                        i + 1, render_atom(a), m, render_atom(a), m, render_atom(a), pos ? "both" : "neither"));
                    }
        }
        return report;
    }

    auto sentence_signature(const Sentence & s) -> Signature
    {
        vector<Symbol> symbols;
        auto see = [&] (const Atom & a) {
            if (std::none_of(symbols.begin(), symbols.end(), [&] (const Symbol & x) { return x.name == a.relation; }))
                symbols.push_back(Symbol{ a.relation, unsigned(a.args.size()) });
        };
        for (auto & c : s.conjuncts) {
            for (auto & a : c.alpha)
                see(a);
            for (auto & l : c.beta)
                if (l.atom)
                    see(*l.atom);
        }
        return Signature{ symbols };
    }

    auto sentence_to_problem(const Sentence & s, const optional<Signature> & signature) -> Problem
    {
        auto report = is_primitive(s);
        if (! report.primitive)
            throw FormatError("sentence is not primitive: " + join(report.diagnostics, "; "));
        if (s.monadic.size() > max_predicates)
            throw FormatError(fmt::format("at most {} monadic predicates are supported", max_predicates));

        Signature sig = signature ? *signature : sentence_signature(s);
        auto colours = assignment_palette(s.monadic);
        Palette edge_colours = s.dialect == Dialect::mmsnp2 ? colours : Palette{ "0" };

        auto assignment = [&] (auto && holds) {
            Colour a = 0;
            for (size_t j = 0 ; j < s.monadic.size() ; ++j)
                if (holds(s.monadic[j]))
                    a |= Colour(1) << j;
            return a;
        };

        vector<Structure> patterns;
        for (auto & c : s.conjuncts) {
            auto vars = conjunct_variables(s, c);
            auto index = [&] (const string & v) {
                return Element(std::find(vars.begin(), vars.end(), v) - vars.begin());
            };
            StructureBuilder b(sig, vars.size());
            for (auto & x : vars)
                b.set_colour(index(x), assignment([&] (const string & m) {
                            return std::any_of(c.beta.begin(), c.beta.end(), [&] (const MonadicLiteral & l) {
                                    return ! l.atom && l.variable == x && l.predicate == m && l.positive; }); }));
            std::set<Atom> done;
            for (auto & a : c.alpha) {
                if (! done.insert(a).second)
                    continue;
                auto sym = sig.find(a.relation);
                if (! sym || sig.symbol(*sym).arity != a.args.size())
                    throw FormatError(fmt::format("relation {} with arity {} is not in the signature", a.relation, a.args.size()));
                vector<Element> t;
                for (auto & x : a.args)
                    t.push_back(index(x));
                Colour e = 0;
                if (s.dialect == Dialect::mmsnp2)
                    e = assignment([&] (const string & m) {
                            return std::any_of(c.beta.begin(), c.beta.end(), [&] (const MonadicLiteral & l) {
                                    return l.atom && *l.atom == a && l.predicate == m && l.positive; }); });
                b.add(*sym, t, e);
            }
            patterns.push_back(b.build());
        }
        return Problem(sig, colours, edge_colours, std::move(patterns));
    }

    auto problem_to_sentence(const Problem & p) -> Sentence
    {
        auto & sig = p.signature();
        bool edges = p.edge_palette().size() > 1;
        size_t k = ceil_log2(std::max(p.vertex_palette().size(), edges ? p.edge_palette().size() : 1));
        if (k > max_predicates)
            throw FormatError(fmt::format("at most {} monadic predicates are supported", max_predicates));

        Sentence s;
        s.dialect = edges ? Dialect::mmsnp2 : Dialect::mmsnp1;
        auto taken = [&] (const string & name) { return sig.find(name).has_value(); };
        string prefix = "M", var = "x";
        while (std::any_of(sig.symbols().begin(), sig.symbols().end(), [&] (const Symbol & x) {
                    return x.name.starts_with(prefix); }))
            prefix += "M";
        for (size_t j = 0 ; j < k ; ++j)
            s.monadic.push_back(prefix + std::to_string(j + 1));
        size_t width = 0;
        for (auto & f : p.patterns())
            width = std::max(width, f.size());
        for (size_t i = 0 ; i < width ; ++i) {
            auto name = var + std::to_string(i + 1);
            if (taken(name))
                throw FormatError(fmt::format("relation name {} clashes with a variable", name));
            s.variables.push_back(name);
        }

        // Assignments standing for each colour; the surplus goes to the first.
        auto preimages = [&] (size_t palette, Colour c) {
            vector<Colour> result{ c };
            if (c == 0)
                for (size_t a = palette ; a < (size_t(1) << k) ; ++a)
                    result.push_back(Colour(a));
            return result;
        };

        for (auto & f : p.patterns()) {
            if (f.size() == 1 && f.tuple_count() == 0 && k == 0)
                throw FormatError("a pattern with one element and no tuples needs a monadic predicate to be written");
            auto tuples = f.all_tuples();
            vector<vector<Colour>> choices;
            for (Element x = 0 ; x < f.size() ; ++x)
                choices.push_back(preimages(p.vertex_palette().size(), f.vertex_colour(x)));
            for (auto r : tuples)
                choices.push_back(edges ? preimages(p.edge_palette().size(), f.tuple_colour(r)) : vector<Colour>{ 0 });

            vector<size_t> pick(choices.size(), 0);
            while (true) {
                NegatedConjunct c;
                vector<Atom> atoms;
                for (auto r : tuples) {
                    Atom a{ sig.symbol(r.symbol).name, {} };
                    for (auto x : f.tuple(r))
                        a.args.push_back(s.variables[x]);
                    atoms.push_back(a);
                }
                c.alpha = atoms;
                for (Element x = 0 ; x < f.size() ; ++x)
                    for (size_t j = 0 ; j < k ; ++j)
                        c.beta.push_back(MonadicLiteral{ ((choices[x][pick[x]] >> j) & 1) != 0, s.monadic[j], s.variables[x], std::nullopt });
                if (edges)
                    for (size_t i = 0 ; i < tuples.size() ; ++i) {
                        auto a = choices[f.size() + i][pick[f.size() + i]];
                        for (size_t j = 0 ; j < k ; ++j)
                            c.beta.push_back(MonadicLiteral{ ((a >> j) & 1) != 0, s.monadic[j], "", atoms[i] });
                    }
                s.conjuncts.push_back(std::move(c));

                size_t i = 0;
                while (i < pick.size() && ++pick[i] == choices[i].size())
                    pick[i++] = 0;
                if (i == pick.size())
                    break;
            }
        }
        return s;
    }

    auto tr_signature() -> Signature
    {
        return Signature{ { Symbol{ "T", 1 }, Symbol{ "R", 3 } } };
    }

    auto encode_fpp2(const Problem & p) -> Fpp2Encoding
    {
        auto & sig = p.signature();
        if (sig.size() != 1 || sig.symbol(0).arity != 2)
            throw FormatError("encode-fpp2 needs a problem over a single binary relation");
        if (p.vertex_palette().size() != 1)
            throw FormatError("encode-fpp2 needs a problem with a single vertex colour");

        size_t c = p.edge_palette().size();
        size_t m = ceil_log2(c);
        if (m > max_predicates)
            throw FormatError(fmt::format("at most {} monadic predicates are supported", max_predicates));
        vector<string> predicates;
        for (size_t j = 0 ; j < m ; ++j)
            predicates.push_back("X" + std::to_string(j + 1));
        auto palette = assignment_palette(predicates);
        auto tr = tr_signature();

        vector<Structure> patterns;
        for (auto & f : p.patterns()) {
            auto tuples = f.all_tuples();
            size_t n = f.size();
            vector<Colour> colours(n, 0);
            while (true) {
                StructureBuilder b(tr, n + tuples.size());
                for (Element x = 0 ; x < n ; ++x)
                    b.set_colour(x, colours[x]);
                for (size_t i = 0 ; i < tuples.size() ; ++i) {
                    Element e = n + i;
                    auto t = f.tuple(tuples[i]);
                    b.set_colour(e, f.tuple_colour(tuples[i]));
                    b.add(0, { e });
                    b.add(1, { t[0], e, t[1] });
                }
                patterns.push_back(b.build());

                size_t i = 0;
                while (i < n && ++colours[i] == palette.size())
                    colours[i++] = 0;
                if (i == n)
                    break;
            }
        }
        for (size_t a = c ; a < palette.size() ; ++a) {
            StructureBuilder b(tr, 1);
            b.set_colour(0, Colour(a));
            b.add(0, { 0 });
            patterns.push_back(b.build());
        }
        return Fpp2Encoding{ Problem(tr, palette, { "0" }, std::move(patterns)), m };
    }

    auto interpret_tr(const Structure & a) -> Structure
    {
        auto t = a.signature().find("T"), r = a.signature().find("R");
        if (! t || ! r || a.signature().symbol(*t).arity != 1 || a.signature().symbol(*r).arity != 3)
            throw FormatError("interpretation needs the signature <T/1, R/3>");
        StructureBuilder b(digraph_signature(), a.size());
        auto & rel = a.relation(*r);
        for (size_t i = 0 ; i < rel.size() ; ++i) {
            auto tuple = rel.tuple(i);
            if (a.holds(*t, std::vector<Element>{ tuple[1] }))
                b.add(0, { tuple[0], tuple[2] });
        }
        return b.build();
    }

    auto encode_tr(const Structure & g) -> Structure
    {
        if (g.signature() != digraph_signature())
            throw FormatError("encoding needs a digraph over {E/2}");
        auto arcs = g.all_tuples();
        StructureBuilder b(tr_signature(), g.size() + arcs.size());
        for (size_t i = 0 ; i < arcs.size() ; ++i) {
            Element e = g.size() + i;
            auto t = g.tuple(arcs[i]);
            b.add(0, { e });
            b.add(1, { t[0], e, t[1] });
        }
        return b.build();
    }
}
