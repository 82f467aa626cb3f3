/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/io.hh>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/core.h>

using std::size_t;
using std::string;
using std::vector;

namespace fpp
{
    namespace
    {
        [[noreturn]] void fail(const string & path, const string & message)
        {
            throw FormatError(fmt::format("{}: {}", path.empty() ? "/" : path, message));
        }

        auto at(const string & path, const string & key) -> string
        {
            return path + "/" + key;
        }

        auto at(const string & path, size_t i) -> string
        {
            return path + "/" + std::to_string(i);
        }

        auto element_name(const Json & j, const string & path) -> string
        {
            if (j.is_string())
                return j.get<string>();
            if (j.is_number_integer())
                return std::to_string(j.get<long long>());
            fail(path, "element names must be strings or integers");
        }

        auto lookup(const std::map<string, Element> & index, const Json & j, const string & path) -> Element
        {
            auto n = element_name(j, path);
            auto i = index.find(n);
            if (i == index.end())
                fail(path, fmt::format("unknown element '{}'", n));
            return i->second;
        }

        auto colour_index(Palette & palette, const Json & j, bool frozen, const string & path) -> Colour
        {
            if (! j.is_string())
                fail(path, "colour tokens must be strings");
            auto t = j.get<string>();
            auto i = std::find(palette.begin(), palette.end(), t);
            if (i != palette.end())
                return i - palette.begin();
            if (frozen)
                fail(path, fmt::format("colour '{}' is not in the palette", t));
            palette.push_back(t);
            return palette.size() - 1;
        }

        void only_keys(const Json & j, std::initializer_list<const char *> keys, const char * what, const string & path)
        {
            if (! j.is_object())
                fail(path, fmt::format("{} must be a JSON object", what));
            for (auto & [k, v] : j.items())
                if (std::none_of(keys.begin(), keys.end(), [&] (const char * x) { return k == x; }))
                    fail(at(path, k), fmt::format("unexpected key in {}", what));
        }

        auto signature_at(const Json & j, const string & path) -> Signature
        {
            if (! j.is_object())
                fail(path, "signature must map relation names to arities");
            vector<Symbol> symbols;
            for (auto & [name, arity] : j.items()) {
                if (! arity.is_number_unsigned())
                    fail(at(path, name), "arity must be a non-negative integer");
                symbols.push_back(Symbol{ name, arity.get<unsigned>() });
            }
            return Signature{ std::move(symbols) };
        }

        auto structure_at(const Json & j, const Signature & sig, PaletteContext * palettes, const string & path) -> Structure;
    }

    auto signature_from_json(const Json & j) -> Signature
    {
        return signature_at(j, "/signature");
    }

    auto signature_to_json(const Signature & sig) -> Json
    {
        Json j = Json::object();
        for (auto & s : sig.symbols())
            j[s.name] = s.arity;
        return j;
    }

    auto structure_from_json(const Json & j, PaletteContext * palettes) -> Structure
    {
        if (! j.is_object() || ! j.contains("signature"))
            fail("", "structure needs a \"signature\"");
        return structure_at(j, signature_at(j.at("signature"), "/signature"), palettes, "");
    }

    auto structure_from_json(const Json & j, const Signature & sig, PaletteContext * palettes) -> Structure
    {
        return structure_at(j, sig, palettes, "");
    }

    namespace
    {
        auto structure_at(const Json & j, const Signature & sig, PaletteContext * palettes, const string & path) -> Structure
        {
            only_keys(j, { "signature", "elements", "relations", "vertex_colours", "tuple_colours", "stamp" }, "structure", path);
            if (! j.contains("elements") || ! j.at("elements").is_array())
                fail(at(path, "elements"), "structure needs an \"elements\" array");

            vector<string> names;
            std::map<string, Element> index;
            for (size_t i = 0 ; i < j.at("elements").size() ; ++i) {
                auto p = at(at(path, "elements"), i);
                auto n = element_name(j.at("elements")[i], p);
                if (! index.emplace(n, names.size()).second)
                    fail(p, fmt::format("duplicate element '{}'", n));
                names.push_back(n);
            }

            StructureBuilder b(sig, names.size());
            b.set_names(names);

            std::map<std::pair<SymbolId, vector<Element>>, Colour> tuple_colour;
            if (j.contains("tuple_colours")) {
                auto tp = at(path, "tuple_colours");
                if (! palettes)
                    fail(tp, "tuple colours are not allowed here");
                if (! j.at("tuple_colours").is_array())
                    fail(tp, "tuple colours must be an array");
                for (size_t k = 0 ; k < j.at("tuple_colours").size() ; ++k) {
                    auto & tc = j.at("tuple_colours")[k];
                    auto p = at(tp, k);
                    only_keys(tc, { "rel", "tuple", "colour" }, "tuple colour entry", p);
                    if (! tc.contains("rel") || ! tc.contains("tuple") || ! tc.contains("colour"))
                        fail(p, "tuple colour entries need \"rel\", \"tuple\" and \"colour\"");
                    if (! tc.at("rel").is_string())
                        fail(at(p, "rel"), "relation names must be strings");
                    auto s = sig.find(tc.at("rel").get<string>());
                    if (! s)
                        fail(at(p, "rel"), "tuple colour for an unknown relation");
                    if (! tc.at("tuple").is_array())
                        fail(at(p, "tuple"), "tuple must be an array");
                    vector<Element> t;
                    for (size_t i = 0 ; i < tc.at("tuple").size() ; ++i)
                        t.push_back(lookup(index, tc.at("tuple")[i], at(at(p, "tuple"), i)));
                    tuple_colour[{ *s, t }] = colour_index(palettes->edge, tc.at("colour"), palettes->frozen, at(p, "colour"));
                }
            }

            if (j.contains("relations")) {
                auto rp = at(path, "relations");
                if (! j.at("relations").is_object())
                    fail(rp, "relations must map relation names to tuple lists");
                for (auto & [name, tuples] : j.at("relations").items()) {
                    auto p = at(rp, name);
                    auto s = sig.find(name);
                    if (! s)
                        fail(p, "relation is not in the signature");
                    if (! tuples.is_array())
                        fail(p, "tuples must be an array");
                    for (size_t k = 0 ; k < tuples.size() ; ++k) {
                        auto & tj = tuples[k];
                        auto tp = at(p, k);
                        if (! tj.is_array())
                            fail(tp, "tuple is not an array");
                        vector<Element> t;
                        for (size_t i = 0 ; i < tj.size() ; ++i)
                            t.push_back(lookup(index, tj[i], at(tp, i)));
                        if (t.size() != sig.symbol(*s).arity)
                            fail(tp, fmt::format("tuple of length {} for arity {}", t.size(), sig.symbol(*s).arity));
                        Colour c = 0;
                        auto i = tuple_colour.find({ *s, t });
                        if (i != tuple_colour.end()) {
                            c = i->second;
                            tuple_colour.erase(i);
                        }
                        else if (palettes && palettes->frozen && palettes->edge.size() > 1)
                            fail(tp, "tuple has no colour");
                        b.add(*s, t, c);
                    }
                }
            }
            if (! tuple_colour.empty())
                fail(at(path, "tuple_colours"), "tuple colour given for a tuple that is not present");

            if (j.contains("vertex_colours")) {
                auto vp = at(path, "vertex_colours");
                if (! palettes)
                    fail(vp, "vertex colours are not allowed here");
                auto & vc = j.at("vertex_colours");
                if (! vc.is_object())
                    fail(vp, "vertex colours must map element names to colours");
                std::set<Element> coloured;
                for (auto & [name, c] : vc.items()) {
                    auto e = lookup(index, name, at(vp, name));
                    b.set_colour(e, colour_index(palettes->vertex, c, palettes->frozen, at(vp, name)));
                    coloured.insert(e);
                }
                if (coloured.size() != names.size() && palettes->vertex.size() > 1)
                    fail(vp, "some elements have no colour");
            }
            else if (palettes && palettes->frozen && palettes->vertex.size() > 1 && ! names.empty())
                fail(path, "vertex colours are required");

            if (palettes && ! palettes->frozen) {
                if (palettes->vertex.empty())
                    palettes->vertex.push_back("0");
                if (palettes->edge.empty())
                    palettes->edge.push_back("0");
            }

            return b.build();
        }
    }

    auto structure_to_json(const Structure & s, const PaletteContext * palettes) -> Json
    {
        Json j = Json::object();
        j["signature"] = signature_to_json(s.signature());
        Json elements = Json::array();
        for (Element e = 0 ; e < s.size() ; ++e)
            elements.push_back(s.name(e));
        j["elements"] = elements;

        Json relations = Json::object();
        Json tuple_colours = Json::array();
        for (SymbolId sym = 0 ; sym < s.signature().size() ; ++sym) {
            Json tuples = Json::array();
            auto & rel = s.relation(sym);
            for (size_t i = 0 ; i < rel.size() ; ++i) {
                Json t = Json::array();
                for (auto e : rel.tuple(i))
                    t.push_back(s.name(e));
                tuples.push_back(t);
                if (palettes && palettes->edge.size() > 1)
                    tuple_colours.push_back(Json{ { "rel", s.signature().symbol(sym).name }, { "tuple", t },
                            { "colour", palettes->edge.at(rel.colour(i)) } });
            }
            j["relations"][s.signature().symbol(sym).name] = tuples;
        }
        if (s.signature().size() == 0)
            j["relations"] = Json::object();

        // Colours are implied when a palette has a single colour.
        if (palettes && palettes->vertex.size() > 1) {
            Json vc = Json::object();
            for (Element e = 0 ; e < s.size() ; ++e)
                vc[s.name(e)] = palettes->vertex.at(s.vertex_colour(e));
            j["vertex_colours"] = vc;
        }
        if (palettes && palettes->edge.size() > 1)
            j["tuple_colours"] = tuple_colours;
        return j;
    }

    auto align_signature(const Structure & s, const Signature & sig) -> Structure
    {
        if (s.signature() == sig)
            return s;
        if (s.signature().size() != sig.size())
            throw FormatError("structure and problem have different signatures");
        StructureBuilder b(sig, s.size());
        for (SymbolId t = 0 ; t < sig.size() ; ++t) {
            auto from = s.signature().find(sig.symbol(t).name);
            if (! from || s.signature().symbol(*from).arity != sig.symbol(t).arity)
                throw FormatError(fmt::format("relation '{}' with arity {} is missing", sig.symbol(t).name, sig.symbol(t).arity));
            auto & rel = s.relation(*from);
            for (size_t i = 0 ; i < rel.size() ; ++i)
                b.add(t, rel.tuple(i), rel.colour(i));
        }
        for (Element x = 0 ; x < s.size() ; ++x)
            b.set_colour(x, s.vertex_colour(x));
        if (s.has_names())
            b.set_names(s.names());
        return b.build();
    }

    auto problem_from_json(const Json & j) -> Problem
    {
        only_keys(j, { "signature", "vertex_palette", "edge_palette", "patterns" }, "problem", "");
        for (auto k : { "signature", "vertex_palette", "edge_palette", "patterns" })
            if (! j.contains(k))
                fail(at("", k), "missing");
        auto sig = signature_at(j.at("signature"), "/signature");
        PaletteContext palettes;
        for (auto k : { "vertex_palette", "edge_palette" }) {
            auto & pj = j.at(k);
            if (! pj.is_array() || std::any_of(pj.begin(), pj.end(), [] (const Json & x) { return ! x.is_string(); }))
                fail(at("", k), "palette must be an array of strings");
        }
        palettes.vertex = j.at("vertex_palette").get<Palette>();
        palettes.edge = j.at("edge_palette").get<Palette>();
        palettes.frozen = true;
        if (! j.at("patterns").is_array())
            fail("/patterns", "patterns must be an array");
        vector<Structure> patterns;
        for (size_t i = 0 ; i < j.at("patterns").size() ; ++i) {
            auto & f = j.at("patterns")[i];
            auto p = at("/patterns", i);
            if (f.is_object() && f.contains("signature") && ! (signature_at(f.at("signature"), at(p, "signature")) == sig))
                fail(at(p, "signature"), "pattern signature differs from the problem's");
            patterns.push_back(structure_at(f, sig, &palettes, p));
        }
        return Problem(sig, palettes.vertex, palettes.edge, std::move(patterns));
    }

    auto problem_to_json(const Problem & p) -> Json
    {
        PaletteContext palettes{ p.vertex_palette(), p.edge_palette(), true };
        Json j = Json::object();
        j["signature"] = signature_to_json(p.signature());
        j["vertex_palette"] = p.vertex_palette();
        j["edge_palette"] = p.edge_palette();
        j["patterns"] = Json::array();
        for (auto & f : p.patterns())
            j["patterns"].push_back(structure_to_json(f, &palettes));
        return j;
    }

    auto load_problem(const string & name_or_path) -> Problem
    {
        auto names = builtin_problem_names();
        if (std::find(names.begin(), names.end(), name_or_path) != names.end())
            return builtin_problem(name_or_path);
        return problem_from_json(read_json_file(name_or_path));
    }

    auto partition_from_json(const Json & j, const Structure & s) -> vector<size_t>
    {
        if (! j.is_object())
            fail("", "partition must map element names to part indices");
        vector<size_t> parts(s.size(), 0);
        vector<bool> seen(s.size(), false);
        for (auto & [name, part] : j.items()) {
            auto e = s.find_name(name);
            if (! e)
                fail(at("", name), "unknown element");
            if (! part.is_number_unsigned() || part.get<size_t>() == 0)
                fail(at("", name), "part indices must be positive integers");
            parts[*e] = part.get<size_t>() - 1;
            seen[*e] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            fail("", "partition does not cover every element");
        return parts;
    }

    auto partition_to_json(const vector<size_t> & parts, const Structure & s) -> Json
    {
        Json j = Json::object();
        for (Element e = 0 ; e < s.size() ; ++e)
            j[s.name(e)] = parts.at(e) + 1;
        return j;
    }

    auto read_text_file(const std::filesystem::path & p) -> string
    {
        std::ifstream f(p);
        if (! f)
            throw FormatError(fmt::format("cannot read '{}'", p.string()));
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    void write_text_file(const std::filesystem::path & p, const string & text)
    {
        std::ofstream f(p);
        if (! f)
            throw FormatError(fmt::format("cannot write '{}'", p.string()));
        f << text;
    }

    auto read_json_file(const std::filesystem::path & p) -> Json
    {
        auto text = read_text_file(p);
        try {
            return Json::parse(text);
        }
        catch (const Json::exception & e) {
            throw FormatError(fmt::format("'{}' is not valid JSON: {}", p.string(), e.what()));
        }
    }

    void write_json_file(const std::filesystem::path & p, const Json & j)
    {
        write_text_file(p, dump_canonical(j));
    }

    auto dump_canonical(const Json & j) -> string
    {
        return j.dump(2) + "\n";
    }
}
