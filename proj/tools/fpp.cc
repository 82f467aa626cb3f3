/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>
#include <fpp/enumerate.hh>
#include <fpp/generators.hh>
#include <fpp/hom.hh>
#include <fpp/io.hh>
#include <fpp/mmsnp.hh>
#include <fpp/problem.hh>
#include <fpp/products.hh>
#include <fpp/treedepth.hh>
#include <fpp/universal.hh>

#include <CLI11.hpp>

#include <fmt/core.h>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

using namespace fpp;

using std::optional;
using std::size_t;
using std::string;
using std::vector;

namespace
{
    enum Exit
    {
        yes = 0,
        no = 1,
        usage = 2,
        exhausted = 3
    };

    struct Global
    {
        std::uint64_t seed = 0;
        optional<std::uint64_t> cap;
        string out;
        string witness;
    };

    auto load_structure(const string & path) -> Structure
    {
        return structure_from_json(read_json_file(path));
    }

    auto palettes_of(const Problem & p) -> PaletteContext
    {
        return PaletteContext{ p.vertex_palette(), p.edge_palette(), true };
    }

    // An uncoloured input over the problem's signature.
    auto load_input(const string & path, const Problem & p) -> Structure
    {
        return align_signature(load_structure(path), p.signature());
    }

    auto load_coloured(const string & path, const Problem & p) -> Structure
    {
        auto palettes = palettes_of(p);
        auto j = read_json_file(path);
        if (! j.is_object() || ! j.contains("signature"))
            throw FormatError("/: structure needs a \"signature\"");
        auto sig = signature_from_json(j.at("signature"));
        return align_signature(structure_from_json(j, sig, &palettes), p.signature());
    }

    void emit(const Json & j, const string & path)
    {
        if (path.empty())
            std::cout << dump_canonical(j);
        else
            write_json_file(path, j);
    }

    auto names_json(const Structure & s, const Hom & h, const Structure & target) -> Json
    {
        Json j = Json::object();
        for (Element x = 0 ; x < s.size() ; ++x)
            j[s.name(x)] = target.name(h[x]);
        return j;
    }

    auto coordinate_name(const vector<Element> & coords, const Structure & base) -> string
    {
        string name = "(";
        for (size_t i = 0 ; i < coords.size() ; ++i)
            name += (i ? "," : "") + (coords[i] == star ? string("*") : base.name(coords[i]));
        return name + ")";
    }

    auto fpp_options(const Global & g) -> FppOptions
    {
        FppOptions o;
        if (g.cap)
            o.budget = *g.cap;
        return o;
    }

    auto hom_options(const Global & g, ColourMode colours) -> HomOptions
    {
        HomOptions o;
        o.colours = colours;
        if (g.cap)
            o.budget = *g.cap;
        return o;
    }

    // Input classes shared by gen and verify.
    struct InputClass
    {
        string name;
        size_t max_n = 6;
        size_t count = 0;
        double density = 0.3;
        std::uint64_t seed = 0;
    };

    struct Generated
    {
        Structure structure;
        Json stamp;
    };

    auto generate(const InputClass & cls) -> vector<Generated>
    {
        std::smatch m;
        vector<Generated> result;
        Rng rng(cls.seed);
        auto stamped = [&] (Structure s, Json stamp) {
            stamp["class"] = cls.name;
            result.push_back(Generated{ std::move(s), std::move(stamp) });
        };
        auto size_between = [&] (size_t lo) {
            return std::uniform_int_distribution<size_t>(lo, std::max(lo, cls.max_n))(rng);
        };

        if (std::regex_match(cls.name, m, std::regex("degree([0-9]+)"))) {
            size_t b = std::stoul(m[1]);
            vector<Structure> gs;
            if (cls.count == 0)
                gs = degree_bounded_graphs(b, cls.max_n);
            else
                for (size_t i = 0 ; i < cls.count ; ++i)
                    gs.push_back(random_degree_bounded_graph(rng, size_between(1), b));
            for (auto & g : gs) {
                if (! is_connected(g) || max_gaifman_degree(g) > b)
                    throw Error("generated graph is outside its class");
                stamped(g, Json{ { "max_degree", max_gaifman_degree(g) }, { "connected", true } });
            }
        }
        else if (std::regex_match(cls.name, m, std::regex("digraph-degree([0-9]+)"))) {
            size_t b = std::stoul(m[1]);
            EnumerateOptions o;
            o.signature = digraph_signature();
            o.max_size = cls.max_n;
            o.max_degree = b;
            o.degree_measure = DegreeMeasure::tuples;
            for (auto & g : enumerate_structures(o)) {
                if (! is_connected(g) || max_degree(g) > b)
                    throw Error("generated digraph is outside its class");
                stamped(g, Json{ { "max_tuple_degree", max_degree(g) }, { "connected", true } });
            }
        }
        else if (std::regex_match(cls.name, m, std::regex("bounded-td-([0-9]+)"))) {
            size_t p = std::stoul(m[1]);
            for (size_t i = 0 ; i < std::max<size_t>(cls.count, 1) ; ++i) {
                auto sample = random_bounded_td(rng, digraph_signature(), size_between(1), p, cls.density);
                auto td = tree_depth(sample.structure).value;
                if (td > p)
                    throw Error("generated structure is outside its class");
                stamped(sample.structure, Json{ { "tree_depth", td } });
            }
        }
        else if (std::regex_match(cls.name, m, std::regex("ltd-([0-9]+)-([0-9]+)"))) {
            size_t p = std::stoul(m[1]), q = std::stoul(m[2]);
            for (size_t i = 0 ; i < std::max<size_t>(cls.count, 1) ; ++i) {
                auto sample = random_ltd_partitioned(rng, size_between(2), p, q, cls.density);
                if (! verify_ltd_partition(sample.structure, sample.parts, p))
                    throw Error("generated partition does not verify");
                stamped(sample.structure, Json{ { "p", p }, { "q", q },
                        { "partition", partition_to_json(sample.parts, sample.structure) } });
            }
        }
        else if (cls.name == "k-sparse-witness") {
            auto w = witness_gn(cls.max_n);
            if (! check_orientation(w.graph, 2, w.orientation))
                throw Error("witness orientation does not check");
            Json orientation = Json::array();
            for (auto [u, v] : w.orientation)
                orientation.push_back(Json::array({ w.graph.name(u), w.graph.name(v) }));
            Json special = Json::array();
            for (auto x : w.special)
                special.push_back(w.graph.name(x));
            stamped(w.graph, Json{ { "k", 2 }, { "orientation", orientation }, { "special", special } });
        }
        else if (cls.name == "random-digraph") {
            for (size_t i = 0 ; i < std::max<size_t>(cls.count, 1) ; ++i)
                stamped(random_digraph(rng, size_between(1), cls.density), Json{ { "density", cls.density } });
        }
        else
            throw FormatError(fmt::format("unknown class '{}'", cls.name));
        return result;
    }

    auto sidecar_path(const string & path) -> string
    {
        std::filesystem::path p(path);
        return (p.parent_path() / (p.stem().string() + ".provenance.json")).string();
    }

    void add_class_options(CLI::App * app, InputClass & cls)
    {
        app->add_option("--class", cls.name, "degreeB, digraph-degreeB, bounded-td-P, ltd-P-Q, k-sparse-witness or random-digraph")->required();
        app->add_option("--max-n", cls.max_n, "Largest structure size, or n for k-sparse-witness");
        app->add_option("--count", cls.count, "Number of sampled structures; 0 enumerates degree classes");
        app->add_option("--density", cls.density, "Tuple probability for sampled classes");
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{ "Forbidden patterns problems, universal templates and MMSNP" };
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "Seed for every randomised step");
    app.add_option("--cap", g.cap, "Search budget, or size cap for constructions");
    app.add_option("--out", g.out, "Output file");
    app.add_option("--witness", g.witness, "Witness file for decision verbs");

    std::map<CLI::App *, std::function<auto () -> int>> handlers;
    auto verb = [&] (const string & name, const string & help, std::function<auto () -> int> f) {
        auto * sub = app.add_subcommand(name, help);
        sub->fallthrough();
        handlers[sub] = std::move(f);
        return sub;
    };

    string source, target, problem_name, input, left, right, template_path;
    bool colours = false, implicit = false;
    size_t p_value = 0, q_value = 0, n_max = 4, degree = 2, k_value = 2;
    InputClass cls;

    auto * hom = verb("hom", "Homomorphism between two structures", [&] {
        auto a = load_structure(source), b = align_signature(load_structure(target), a.signature());
        auto h = find_hom(a, b, hom_options(g, colours ? ColourMode::preserve : ColourMode::ignore));
        if (! h) {
            fmt::print("NO\n");
            return no;
        }
        if (! check_hom(a, b, *h, colours ? ColourMode::preserve : ColourMode::ignore))
            throw Error("homomorphism failed its check");
        if (! g.witness.empty())
            emit(names_json(a, *h, b), g.witness);
        fmt::print("YES\n");
        return yes;
    });
    hom->add_option("--source", source)->required();
    hom->add_option("--target", target)->required();
    hom->add_flag("--colours", colours, "Preserve colours");

    auto * valid = verb("valid", "Validity of a coloured structure", [&] {
        auto p = load_problem(problem_name);
        auto s = load_coloured(input, p);
        if (auto v = find_violation(s, p)) {
            fmt::print("NO: pattern {} maps in\n", v->pattern + 1);
            if (! g.witness.empty())
                emit(names_json(p.patterns()[v->pattern], v->hom, s), g.witness);
            return no;
        }
        fmt::print("YES\n");
        return yes;
    });
    valid->add_option("--problem", problem_name)->required();
    valid->add_option("--input", input)->required();

    auto * decide = verb("decide", "Decide a forbidden patterns problem", [&] {
        auto p = load_problem(problem_name);
        auto s = load_input(input, p);
        auto c = decide_fpp(s, p, fpp_options(g));
        if (! c) {
            fmt::print("NO\n");
            return no;
        }
        if (! is_valid(*c, p) || ! c->uncoloured().same_as(s.uncoloured()))
            throw Error("colouring failed its check");
        if (! g.witness.empty()) {
            auto palettes = palettes_of(p);
            emit(structure_to_json(*c, &palettes), g.witness);
        }
        fmt::print("YES\n");
        return yes;
    });
    decide->add_option("--problem", problem_name)->required();
    decide->add_option("--input", input)->required();

    auto * core_verb = verb("core", "Core of a structure", [&] {
        auto s = load_structure(input);
        auto c = g.cap ? core(s, *g.cap) : core(s);
        if (! check_hom(s, c.core, c.retraction) || ! check_hom(c.core, s, c.inclusion))
            throw Error("core maps failed their check");
        fmt::print("core has {} of {} elements\n", c.core.size(), s.size());
        emit(structure_to_json(c.core), g.out);
        return yes;
    });
    core_verb->add_option("--input", input)->required();

    auto * td = verb("treedepth", "Exact tree-depth with a witness forest", [&] {
        auto s = load_structure(input);
        auto r = g.cap ? tree_depth(s, *g.cap) : tree_depth(s);
        if (! is_substructure_of(s, closure(r.witness, s.signature())) || r.witness.height() != r.value)
            throw Error("forest failed its check");
        fmt::print("{}\n", r.value);
        Json parents = Json::object();
        for (Element x = 0 ; x < s.size() ; ++x) {
            auto up = r.witness.parent(x);
            parents[s.name(x)] = up ? Json(s.name(*up)) : Json(nullptr);
        }
        auto path = ! g.witness.empty() ? g.witness : g.out;
        if (! path.empty())
            emit(Json{ { "parent", parents } }, path);
        return yes;
    });
    td->add_option("--input", input)->required();

    auto * prod = verb("product", "Classical product", [&] {
        auto a = load_structure(left), b = align_signature(load_structure(right), a.signature());
        auto r = product(a, b);
        vector<string> names;
        for (Element x = 0 ; x < a.size() ; ++x)
            for (Element y = 0 ; y < b.size() ; ++y)
                names.push_back("(" + a.name(x) + "," + b.name(y) + ")");
        emit(structure_to_json(r.with_names(names)), g.out);
        return yes;
    });
    prod->add_option("--left", left)->required();
    prod->add_option("--right", right)->required();

    auto * tprod = verb("tproduct", "Truncated product of a coloured structure", [&] {
        auto pr = load_problem(problem_name);
        auto s = load_coloured(input, pr);
        ProductOptions o;
        if (g.cap)
            o.element_cap = *g.cap;
        auto t = truncated_product(s, p_value, o);
        vector<string> names;
        for (auto & c : t.coords)
            names.push_back(coordinate_name(c, s));
        fmt::print("{} elements, {} tuples\n", t.carrier.size(), t.carrier.tuple_count());
        auto palettes = palettes_of(pr);
        emit(structure_to_json(t.carrier.with_names(names), &palettes), g.out);
        return yes;
    });
    tprod->add_option("--problem", problem_name)->required();
    tprod->add_option("--input", input)->required();
    tprod->add_option("--p", p_value)->required();

    auto * ubd = verb("universal-bd", "Bounded-degree universal template", [&] {
        auto p = load_problem(problem_name);
        Json side{ { "kind", implicit ? "bounded-degree-implicit" : "bounded-degree" },
            { "problem", problem_to_json(p) }, { "b", degree } };
        if (implicit) {
            BallTemplate t(p, degree);
            side["m"] = t.m();
            side["x"] = t.x();
            fmt::print("implicit template, m = {}, X = {}\n", t.m(), t.x());
            emit(side, g.out);
            return yes;
        }
        BoundedDegreeOptions o;
        if (g.cap)
            o.member_cap = *g.cap;
        side["member_cap"] = o.member_cap;
        auto t = bounded_degree_universal(p, degree, o);
        side["m"] = t.m;
        side["x"] = t.x;
        side["elements"] = t.carrier.size();
        side["tuples"] = t.carrier.tuple_count();
        side["members"] = t.members.size();
        Json provenance = Json::array();
        for (auto [label, member] : t.provenance)
            provenance.push_back(Json::array({ label, member }));
        side["provenance"] = provenance;
        fmt::print("{} elements, {} tuples, m = {}, X = {}\n", t.carrier.size(), t.carrier.tuple_count(), t.m, t.x);
        if (g.out.empty())
            throw FormatError("universal-bd needs --out");
        auto palettes = palettes_of(p);
        emit(structure_to_json(t.carrier, &palettes), g.out);
        emit(side, sidecar_path(g.out));
        return yes;
    });
    ubd->add_option("--problem", problem_name)->required();
    ubd->add_option("--degree", degree);
    ubd->add_flag("--implicit", implicit, "Write a description searched lazily instead of the carrier");

    auto * ultd = verb("universal-ltd", "Low tree-depth universal template", [&] {
        auto p = load_problem(problem_name);
        LowTdOptions o;
        if (g.cap)
            o.products.element_cap = *g.cap;
        auto t = low_td_universal(p, p_value, q_value, n_max, o);
        fmt::print("{} cores, {} elements, {} tuples\n", t.cores.size(), t.carrier.size(), t.carrier.tuple_count());
        if (g.out.empty())
            throw FormatError("universal-ltd needs --out");
        auto palettes = palettes_of(p);
        emit(structure_to_json(t.carrier, &palettes), g.out);
        emit(Json{ { "kind", "low-td" }, { "problem", problem_to_json(p) }, { "p", p_value }, { "q", q_value },
                { "n_max", n_max }, { "cores", t.cores.size() }, { "elements", t.carrier.size() } }, sidecar_path(g.out));
        return yes;
    });
    ultd->add_option("--problem", problem_name)->required();
    ultd->add_option("--p", p_value)->required();
    ultd->add_option("--q", q_value)->required();
    ultd->add_option("--n-max", n_max);

    auto * verify = verb("verify", "Compare a template with the problem on an input class", [&] {
        string side_path = sidecar_path(template_path);
        Json side = std::filesystem::exists(side_path) ? read_json_file(side_path) : read_json_file(template_path);
        if (! side.contains("kind"))
            throw FormatError(fmt::format("{}: template description needs \"kind\"", side_path));
        auto p = problem_from_json(side.at("problem"));
        auto kind = side.at("kind").get<string>();
        std::function<auto (const Structure &) -> optional<Hom>> to_template;

        optional<BoundedDegreeTemplate> bd;
        optional<BallTemplate> ball;
        Structure carrier;
        if (kind == "bounded-degree") {
            BoundedDegreeOptions o;
            o.member_cap = side.at("member_cap").get<size_t>();
            bd = bounded_degree_universal(p, side.at("b").get<size_t>(), o);
            auto palettes = palettes_of(p);
            auto loaded = structure_from_json(read_json_file(template_path), p.signature(), &palettes);
            if (! loaded.without_names().same_as(bd->carrier))
                throw FormatError(fmt::format("{}: carrier differs from the rebuilt template", template_path));
            to_template = [&] (const Structure & s) { return find_hom_to_template(s, *bd, g.cap.value_or(0)); };
        }
        else if (kind == "bounded-degree-implicit") {
            ball.emplace(p, side.at("b").get<size_t>());
            to_template = [&] (const Structure & s) -> optional<Hom> {
                auto h = ball->find_hom(s, g.cap.value_or(0));
                if (! h)
                    return std::nullopt;
                if (! ball->check_hom(s, *h))
                    throw Error("template homomorphism failed its check");
                // Implicit vertices have no numbering, so the checked map is
                // reported by its kernel: images numbered by first use.
                std::map<BallTemplate::Vertex, Element> number;
                Hom kernel;
                for (auto & v : *h)
                    kernel.push_back(number.emplace(v, number.size()).first->second);
                return kernel;
            };
        }
        else if (kind == "low-td") {
            auto palettes = palettes_of(p);
            carrier = structure_from_json(read_json_file(template_path), p.signature(), &palettes);
            to_template = [&] (const Structure & s) {
                return find_hom(s, carrier, hom_options(g, ColourMode::ignore));
            };
        }
        else
            throw FormatError(fmt::format("{}: unknown template kind '{}'", side_path, kind));

        cls.seed = g.seed;
        vector<Structure> inputs;
        for (auto & x : generate(cls))
            inputs.push_back(align_signature(x.structure, p.signature()));
        auto report = verify_duality(inputs, p, to_template, g.cap.value_or(default_fpp_budget));

        Json disagreements = Json::array();
        for (auto & d : report.disagreements)
            disagreements.push_back(Json{ { "input", structure_to_json(d.input) }, { "fpp", d.fpp }, { "hom", d.hom } });
        Json out{ { "cases", report.cases }, { "agreements", report.agreements }, { "exhausted", report.exhausted },
            { "disagreements", disagreements } };
        fmt::print("{} cases, {} agreements, {} disagreements, {} exhausted\n",
                report.cases, report.agreements, report.disagreements.size(), report.exhausted);
        if (! g.out.empty())
            emit(out, g.out);
        if (! report.disagreements.empty())
            return no;
        return report.exhausted ? exhausted : yes;
    });
    verify->add_option("--template", template_path)->required();
    add_class_options(verify, cls);

    auto * compile = verb("mmsnp-compile", "Compile primitive MMSNP sentences to problems", [&] {
        auto sentences = parse_disjunction(read_text_file(input));
        for (size_t i = 0 ; i < sentences.size() ; ++i) {
            auto report = is_primitive(sentences[i]);
            for (auto & d : report.diagnostics)
                fmt::print(stderr, "sentence {}: {}\n", i + 1, d);
            if (! report.primitive)
                return int(usage);
            auto p = sentence_to_problem(sentences[i]);
            fmt::print("sentence {}: {} vertex colours, {} tuple colours, {} patterns\n", i + 1,
                    p.vertex_palette().size(), p.edge_palette().size(), p.patterns().size());
            string path = g.out;
            if (! path.empty() && sentences.size() > 1) {
                std::filesystem::path o(path);
                path = (o.parent_path() / fmt::format("{}-{}{}", o.stem().string(), i + 1, o.extension().string())).string();
            }
            emit(problem_to_json(p), path);
        }
        return int(yes);
    });
    compile->add_option("--input", input)->required();

    auto * decompile = verb("mmsnp-decompile", "Write a problem as a primitive MMSNP sentence", [&] {
        auto text = render(problem_to_sentence(load_problem(problem_name))) + "\n";
        if (g.out.empty())
            std::cout << text;
        else
            write_text_file(g.out, text);
        return yes;
    });
    decompile->add_option("--problem", problem_name)->required();

    auto * encode = verb("encode-fpp2", "Encode arc colours as vertex colours over <T, R>", [&] {
        auto e = encode_fpp2(load_problem(problem_name));
        fmt::print("m = {}, {} patterns\n", e.m, e.problem.patterns().size());
        emit(problem_to_json(e.problem), g.out);
        return yes;
    });
    encode->add_option("--problem", problem_name)->required();

    auto * gen = verb("gen", "Generate structures of a class", [&] {
        cls.seed = g.seed;
        auto all = generate(cls);
        if (! g.out.empty())
            std::filesystem::create_directories(g.out);
        for (size_t i = 0 ; i < all.size() ; ++i) {
            auto j = structure_to_json(all[i].structure);
            j["stamp"] = all[i].stamp;
            if (g.out.empty())
                std::cout << dump_canonical(j);
            else
                write_json_file(std::filesystem::path(g.out) / fmt::format("{:04}.json", i + 1), j);
        }
        fmt::print(stderr, "{} structures\n", all.size());
        return yes;
    });
    add_class_options(gen, cls);

    auto * sparse = verb("sparse", "Uniform k-sparsity with an orientation witness", [&] {
        auto s = load_structure(input);
        auto o = sparse_orientation(s, k_value);
        if (! o) {
            fmt::print("NO\n");
            return no;
        }
        if (! check_orientation(s, k_value, *o))
            throw Error("orientation failed its check");
        if (! g.witness.empty()) {
            Json arcs = Json::array();
            for (auto [u, v] : *o)
                arcs.push_back(Json::array({ s.name(u), s.name(v) }));
            emit(arcs, g.witness);
        }
        fmt::print("YES\n");
        return yes;
    });
    sparse->add_option("--input", input)->required();
    sparse->add_option("--k", k_value);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e);
        return usage;
    }

    try {
        for (auto & [sub, f] : handlers)
            if (sub->parsed())
                return f();
    }
    catch (const BudgetExceeded & e) {
        fmt::print(stderr, "budget exceeded: {}\n", e.what());
        return exhausted;
    }
    catch (const LabellingFailure & e) {
        fmt::print(stderr, "cap exceeded: {}\n", e.what());
        return exhausted;
    }
    catch (const Error & e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return usage;
    }
    catch (const Json::exception & e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return usage;
    }
    return usage;
}
