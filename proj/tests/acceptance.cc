/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <fpp/canonical.hh>
#include <fpp/enumerate.hh>
#include <fpp/generators.hh>
#include <fpp/io.hh>
#include <fpp/mmsnp.hh>
#include <fpp/products.hh>
#include <fpp/treedepth.hh>
#include <fpp/universal.hh>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

using namespace fpp;

using std::size_t;
using std::string;
using std::vector;

namespace
{
    struct Outcome
    {
        bool pass;
        string detail;
    };

    // Counts checks, keeping the first failure for the report.
    struct Tally
    {
        size_t checks = 0, failures = 0;
        string first;

        void check(bool ok, const string & what)
        {
            ++checks;
            if (! ok && failures++ == 0)
                first = what;
        }

        auto outcome(const string & summary) const -> Outcome
        {
            std::ostringstream s;
            s << summary << ", " << checks - failures << "/" << checks << " checks";
            if (failures)
                s << ", first failure: " << first;
            return Outcome{ failures == 0, s.str() };
        }
    };

    auto clique(size_t n) -> Structure
    {
        vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i < n ; ++i)
            for (Element j = i + 1 ; j < n ; ++j)
                e.emplace_back(i, j);
        return encode_graph(n, e);
    }

    auto path(size_t n) -> Structure
    {
        vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i + 1 < n ; ++i)
            e.emplace_back(i, i + 1);
        return encode_graph(n, e);
    }

    auto cycle(size_t n) -> Structure
    {
        vector<std::pair<Element, Element>> e;
        for (Element i = 0 ; i < n ; ++i)
            e.emplace_back(i, (i + 1) % n);
        return encode_graph(n, e);
    }

    auto triangle_free() -> Problem
    {
        return Problem(digraph_signature(), { "0" }, { "0" }, { symmetric_triangle(0, 0, 0) });
    }

    auto mono_directed_path(size_t arcs) -> Problem
    {
        vector<Structure> patterns;
        for (Colour c = 0 ; c < 2 ; ++c) {
            StructureBuilder b(digraph_signature(), arcs + 1);
            for (Element x = 0 ; x <= arcs ; ++x)
                b.set_colour(x, c);
            for (Element x = 0 ; x < arcs ; ++x)
                b.add(0, { x, x + 1 });
            patterns.push_back(b.build());
        }
        return Problem(digraph_signature(), { "a", "b" }, { "0" }, patterns);
    }

    auto decides(const Structure & s, const Problem & p) -> bool
    {
        return decide_fpp(s, p).has_value();
    }

    auto digraphs(size_t max_n, bool connected, std::optional<size_t> max_degree = std::nullopt) -> vector<Structure>
    {
        EnumerateOptions o;
        o.signature = digraph_signature();
        o.max_size = max_n;
        o.connected = connected;
        o.max_degree = max_degree;
        o.degree_measure = DegreeMeasure::tuples;
        return enumerate_structures(o);
    }

    auto random_coloured(Rng & rng, size_t n, double density) -> Structure
    {
        std::bernoulli_distribution coin(density), colour(0.5);
        StructureBuilder b(digraph_signature(), n);
        for (Element x = 0 ; x < n ; ++x)
            b.set_colour(x, colour(rng));
        for (Element x = 0 ; x < n ; ++x)
            for (Element y = 0 ; y < n ; ++y)
                if (x != y && coin(rng))
                    b.add(0, { x, y });
        return b.build();
    }

    auto random_graph(Rng & rng, size_t n, double density) -> Structure
    {
        std::bernoulli_distribution coin(density);
        vector<std::pair<Element, Element>> e;
        for (Element x = 0 ; x < n ; ++x)
            for (Element y = x + 1 ; y < n ; ++y)
                if (coin(rng))
                    e.emplace_back(x, y);
        return encode_graph(n, e);
    }

    auto bounded_degree_duality() -> Outcome
    {
        auto start = std::chrono::steady_clock::now();
        Tally t;
        auto u = bounded_degree_universal(triangle_free(), 2);
        t.check(u.x == 5, "X is " + std::to_string(u.x));
        auto graphs = degree_bounded_graphs(2, 8);
        for (auto & g : graphs) {
            bool free = ! find_hom(clique(3), g);
            auto h = find_hom_to_template(g, u);
            t.check(free == h.has_value(), "disagreement on a graph with " + std::to_string(g.size()) + " vertices");
            if (h)
                t.check(check_hom(g, u.carrier, *h, ColourMode::ignore), "witness is not a homomorphism");
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        t.check(seconds < 60, "took " + std::to_string(seconds) + " s");
        return t.outcome(std::to_string(graphs.size()) + " graphs, |U| = " + std::to_string(u.carrier.size()));
    }

    auto coloured_bounded_degree_duality() -> Outcome
    {
        auto start = std::chrono::steady_clock::now();
        Tally t;
        auto p = mono_directed_path(2);
        BallTemplate u(p, 2);
        t.check(u.m() == 2 && u.x() == 7, "m = " + std::to_string(u.m()) + ", X = " + std::to_string(u.x()));
        auto inputs = digraphs(7, true, 2);
        size_t yes = 0;
        for (auto & g : inputs) {
            bool fpp = decides(g, p);
            auto h = u.find_hom(g);
            yes += fpp;
            t.check(fpp == h.has_value(), "disagreement on a digraph with " + std::to_string(g.size()) + " vertices");
            if (h)
                t.check(u.check_hom(g, *h), "witness is not a homomorphism");
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        t.check(seconds < 300, "took " + std::to_string(seconds) + " s");
        return t.outcome(std::to_string(inputs.size()) + " digraphs, " + std::to_string(yes) + " yes");
    }

    auto ball_lemma() -> Outcome
    {
        Tally t;
        auto u = bounded_degree_universal(triangle_free(), 2);
        auto failures = ball_lemma_failures(u);
        for (Element w = 0 ; w < u.carrier.size() ; ++w)
            t.check(std::find(failures.begin(), failures.end(), w) == failures.end(),
                    "element " + std::to_string(w) + " of the triangle-free template");

        // The implicit template is checked on the vertices it has explored.
        BallTemplate b(mono_directed_path(2), 2);
        size_t explored = 0;
        for (auto & r : b.root_vertices()) {
            t.check(b.is_vertex(r) && b.ball_lemma_holds(r), "a root of the implicit template");
            if (++explored == 200)
                break;
        }
        return t.outcome(std::to_string(u.carrier.size()) + " materialised elements, " + std::to_string(explored) + " implicit vertices");
    }

    auto truncated_product_lemmas() -> Outcome
    {
        Tally t;
        Rng rng(401);
        auto p = mono_directed_path(1);
        size_t valid = 0;
        while (valid < 100) {
            auto cs = random_coloured(rng, 1 + rng() % 5, 0.3);
            if (! is_valid(cs, p))
                continue;
            ++valid;
            auto tp = truncated_product(cs, 3);
            t.check(is_valid(tp.carrier, p), "product of a valid structure is not valid");
        }

        auto base = clique(3);
        size_t instances = 0;
        while (instances < 100) {
            size_t n = 3 + rng() % 5, q = 3;
            auto s = random_graph(rng, n, 0.4);
            vector<size_t> parts(n);
            for (auto & x : parts)
                x = rng() % q;
            vector<Hom> partial(q, Hom(n, 0));
            bool ok = true;
            for (size_t k = 0 ; k < q && ok ; ++k) {
                vector<Element> rest;
                for (Element x = 0 ; x < n ; ++x)
                    if (parts[x] != k)
                        rest.push_back(x);
                auto sub = induced(s, rest);
                auto h = find_hom(sub.structure, base);
                if (! h)
                    ok = false;
                else
                    for (size_t j = 0 ; j < rest.size() ; ++j)
                        partial[k][rest[j]] = (*h)[j];
            }
            if (! ok)
                continue;
            ++instances;
            auto tp = truncated_product(base, q);
            t.check(check_hom(s, tp.carrier, assemble_partial_homs(s, parts, partial, tp)), "assembled map is not a homomorphism");
        }
        return t.outcome("100 valid structures, 100 partitioned instances");
    }

    auto low_td_duality() -> Outcome
    {
        Tally t;
        Rng rng(501);
        auto p = mono_directed_path(1);
        auto u = low_td_universal(p, 3, 4, 4);
        size_t yes = 0;
        for (int i = 0 ; i < 200 ; ++i) {
            auto sample = random_ltd_partitioned(rng, 3 + i % 6, 3, 4, 0.4);
            t.check(verify_ltd_partition(sample.structure, sample.parts, 3), "partition does not verify");
            bool fpp = decides(sample.structure, p);
            yes += fpp;
            auto h = find_hom(sample.structure, u.carrier, HomOptions{ ColourMode::ignore });
            t.check(fpp == h.has_value(), "disagreement on sample " + std::to_string(i));
        }
        return t.outcome("200 structures, " + std::to_string(yes) + " yes, |U| = " + std::to_string(u.carrier.size()));
    }

    auto all_rooted_trees(size_t n) -> vector<RootedForest>
    {
        vector<RootedForest> result;
        vector<Element> p(n, 0);
        while (true) {
            for (Element root = 0 ; root < n ; ++root) {
                vector<std::optional<Element>> parent(n);
                bool ok = p[root] == 0;
                for (Element x = 0 ; x < n && ok ; ++x)
                    if (x != root) {
                        ok = p[x] != x;
                        parent[x] = p[x];
                    }
                for (Element x = 0 ; x < n && ok ; ++x) {
                    size_t steps = 0;
                    for (auto y = parent[x] ; y && ok ; y = parent[*y])
                        ok = ++steps <= n;
                }
                if (ok)
                    result.push_back(RootedForest{ parent });
            }
            size_t i = 0;
            while (i < n && ++p[i] == n)
                p[i++] = 0;
            if (i == n)
                break;
        }
        return result;
    }

    auto tree_depth_checks() -> Outcome
    {
        Tally t;
        EnumerateOptions o;
        o.signature = digraph_signature();
        o.graphs = true;
        o.max_size = 5;
        size_t pairs = 0;
        vector<vector<RootedForest>> trees(6);
        for (size_t n = 1 ; n <= 5 ; ++n)
            trees[n] = all_rooted_trees(n);
        for (auto & g : enumerate_structures(o))
            for (auto & y : trees[g.size()]) {
                ++pairs;
                t.check(is_elimination_tree(g, y) == is_substructure_of(g, closure(y, g.signature())),
                        "elimination tree and closure containment differ");
            }

        Rng rng(601);
        Signature ternary{ { Symbol{ "R", 3 } } };
        for (int i = 0 ; i < 100 ; ++i) {
            auto sample = random_bounded_td(rng, ternary, 1 + i % 6, 1 + i % 4, 0.3);
            auto td = tree_depth(sample.structure);
            t.check(td.value == tree_depth(gaifman(sample.structure)).value, "Gaifman graph has another tree-depth");
            t.check(is_substructure_of(sample.structure, closure(td.witness, ternary)) && td.witness.height() == td.value,
                    "tree-depth witness");
        }

        t.check(tree_depth(path(4)).value == 3, "td(P4)");
        t.check(tree_depth(clique(4)).value == 4, "td(K4)");
        t.check(tree_depth(path(7)).value == 3, "td(P7)");
        return t.outcome(std::to_string(pairs) + " graph and tree pairs, 100 ternary structures");
    }

    auto core_checks() -> Outcome
    {
        Tally t;
        EnumerateOptions o;
        o.signature = digraph_signature();
        o.graphs = true;
        o.connected = false;
        o.vertex_colours = 2;
        o.max_size = 5;
        auto all = enumerate_structures(o);
        Rng rng(701);
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(std::min<size_t>(all.size(), 500));
        for (auto & s : all) {
            auto c = core(s);
            t.check(check_hom(s, c.core, c.retraction), "retraction is not a homomorphism");
            t.check(check_hom(c.core, s, c.inclusion), "inclusion is not a homomorphism");
            for (auto & h : enumerate_homs(c.core, c.core)) {
                std::set<Element> image(h.begin(), h.end());
                t.check(image.size() == c.core.size(), "core has a proper retract");
            }
            t.check(is_isomorphic(core(c.core).core, c.core), "core is not idempotent");
        }
        return t.outcome(std::to_string(all.size()) + " coloured graphs");
    }

    auto ramsey_checks() -> Outcome
    {
        Tally t;
        auto enmt = builtin_problem("edge-no-mono-tri");
        auto vnmt = builtin_problem("vertex-no-mono-tri");
        auto tftt = builtin_problem("tri-free-tri");
        t.check(decides(clique(5), enmt), "edge-no-mono-tri on K5");
        t.check(! decides(clique(6), enmt), "edge-no-mono-tri on K6");
        t.check(decides(clique(4), vnmt), "vertex-no-mono-tri on K4");
        t.check(! decides(clique(5), vnmt), "vertex-no-mono-tri on K5");
        t.check(decides(cycle(5), tftt), "tri-free-tri on C5");
        t.check(decides(cycle(7), tftt), "tri-free-tri on C7");
        t.check(! decides(clique(3), tftt), "tri-free-tri on K3");
        for (auto & [p, s] : { std::pair{ &enmt, clique(5) }, std::pair{ &vnmt, clique(4) }, std::pair{ &tftt, cycle(5) } })
            if (auto c = decide_fpp(s, *p))
                t.check(is_valid(*c, *p), "colouring is not valid");
        return t.outcome("7 instances");
    }

    auto mmsnp_round_trips() -> Outcome
    {
        Tally t;
        auto inputs = digraphs(4, false);
        for (auto & name : builtin_problem_names()) {
            auto p = builtin_problem(name);
            auto back = sentence_to_problem(problem_to_sentence(p), p.signature());
            for (auto & g : inputs)
                t.check(decides(g, p) == decides(g, back), name + " changes its answer");
        }

        size_t files = 0;
        for (auto & entry : std::filesystem::directory_iterator(FPP_DATA_DIR)) {
            if (entry.path().extension() != ".mmsnp")
                continue;
            ++files;
            auto text = read_text_file(entry.path().string());
            while (! text.empty() && text.back() == '\n')
                text.pop_back();
            auto s = parse_sentence(text);
            t.check(render(s) == text, entry.path().filename().string() + " does not render back");
            t.check(parse_sentence(render(s)) == s, entry.path().filename().string() + " does not parse back");
        }
        return t.outcome(std::to_string(inputs.size()) + " digraphs, " + std::to_string(files) + " sentence files");
    }

    auto encoding_agreement() -> Outcome
    {
        Tally t;
        auto p = builtin_problem("edge-no-mono-tri");
        auto enc = encode_fpp2(p);
        Rng rng(1001);
        size_t yes = 0;
        for (int i = 0 ; i < 100 ; ++i) {
            auto a = random_tr_structure(rng, 1 + i % 5, 0.5, 0.1);
            bool encoded = decides(a, enc.problem);
            yes += encoded;
            t.check(encoded == decides(interpret_tr(a), p), "disagreement on sample " + std::to_string(i));
        }
        return t.outcome("100 structures, " + std::to_string(yes) + " encoded yes");
    }

    auto witness_family() -> Outcome
    {
        Tally t;
        for (size_t n = 3 ; n <= 5 ; ++n) {
            auto w = witness_gn(n);
            t.check(! find_hom(clique(3), w.graph), "G" + std::to_string(n) + " has a triangle");
            t.check(is_uniformly_k_sparse(w.graph, 2), "G" + std::to_string(n) + " is not 2-sparse");
            t.check(check_orientation(w.graph, 2, w.orientation), "G" + std::to_string(n) + " orientation");
        }

        auto g3 = witness_gn(3);
        Rng rng(1101);
        size_t targets = 0, homs = 0;
        while (targets < 50) {
            // G3 has odd cycles, so each target gets an odd cycle of its own.
            size_t n = 5 + rng() % 6, length = 5 + 2 * (rng() % ((n - 3) / 2));
            vector<Element> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            std::bernoulli_distribution coin(0.2);
            vector<std::pair<Element, Element>> e;
            for (size_t i = 0 ; i < length ; ++i)
                e.emplace_back(order[i], order[(i + 1) % length]);
            for (Element x = 0 ; x < n ; ++x)
                for (Element y = x + 1 ; y < n ; ++y)
                    if (coin(rng))
                        e.emplace_back(x, y);
            auto target = encode_graph(n, e);
            if (find_hom(clique(3), target))
                continue;
            ++targets;
            for_each_hom(g3.graph, target, [&] (const Hom & h) {
                    ++homs;
                    std::set<Element> images;
                    for (auto s : g3.special)
                        images.insert(h[s]);
                    t.check(images.size() == g3.special.size(), "a hom identifies special vertices");
                    return true;
                    });
        }
        t.check(homs > 0, "no homomorphism from G3 into any target");
        return t.outcome("50 targets, " + std::to_string(homs) + " homomorphisms");
    }
}

auto main() -> int
{
    const vector<std::function<auto () -> Outcome>> criteria{
        bounded_degree_duality, coloured_bounded_degree_duality, ball_lemma, truncated_product_lemmas,
        low_td_duality, tree_depth_checks, core_checks, ramsey_checks, mmsnp_round_trips,
        encoding_agreement, witness_family
    };

    bool all = true;
    for (size_t i = 0 ; i < criteria.size() ; ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        }
        catch (const std::exception & e) {
            o = Outcome{ false, string("exception: ") + e.what() };
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && o.pass;
        std::cout << "criterion " << std::setw(2) << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " ("
            << std::fixed << std::setprecision(1) << seconds << " s) " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
