/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <doctest.h>

#include <fpp/enumerate.hh>
#include <fpp/generators.hh>
#include <fpp/mmsnp.hh>

#include "helpers.hh"

using namespace fpp;
using namespace fpp::testing;

namespace
{
    const char * const vnmt =
        "exists M. forall x,y,z. !(E(x,y)&E(y,z)&E(z,x)&M(x)&M(y)&M(z)) & !(E(x,y)&E(y,z)&E(z,x)&!M(x)&!M(y)&!M(z))";

    auto small_digraphs() -> const std::vector<Structure> &
    {
        static const auto result = [] {
            EnumerateOptions o;
            o.signature = digraph_signature();
            o.max_size = 4;
            return enumerate_structures(o);
        }();
        return result;
    }

    auto decides(const Structure & s, const Problem & p) -> bool
    {
        return decide_fpp(s, p).has_value();
    }

    void check_same_problem(const Problem & a, const Problem & b, bool nontrivial = true)
    {
        std::size_t yes = 0;
        for (auto & g : small_digraphs()) {
            bool x = decides(g, a);
            CHECK(x == decides(g, b));
            yes += x;
        }
        if (nontrivial) {
            CHECK(yes > 0);
            CHECK(yes < small_digraphs().size());
        }
    }

    // The digraph on the first n elements, the rest being isolated.
    auto leading(const Structure & s, std::size_t n) -> Structure
    {
        std::vector<Element> first;
        for (Element x = 0 ; x < s.size() ; ++x) {
            if (x < n)
                first.push_back(x);
            else
                CHECK(s.incident(x).empty());
        }
        return induced(s, first).structure;
    }

    auto literal(bool positive, const std::string & predicate, const std::string & arg) -> std::string
    {
        return (positive ? "" : "!") + predicate + "(" + arg + ")";
    }

    // Both arcs of every edge, every vertex assignment spelled out.
    auto enmt_sentence() -> std::string
    {
        std::vector<std::string> conjuncts;
        const std::vector<std::string> arcs{ "E(x,y)", "E(y,x)", "E(y,z)", "E(z,y)", "E(z,x)", "E(x,z)" };
        for (int v = 0 ; v < 8 ; ++v) {
            std::string vertices = literal(v & 1, "M", "x") + "&" + literal(v & 2, "M", "y") + "&" + literal(v & 4, "M", "z");
            for (bool mono : { false, true }) {
                std::string c = "!(";
                for (auto & a : arcs)
                    c += a + "&";
                c += vertices;
                for (auto & a : arcs)
                    c += "&" + literal(mono, "M", a);
                conjuncts.push_back(c + ")");
            }
            if (v < 4) {
                std::string two = literal(v & 1, "M", "x") + "&" + literal(v & 2, "M", "y");
                conjuncts.push_back("!(E(x,y)&E(y,x)&" + two + "&M(E(x,y))&!M(E(y,x)))");
            }
        }
        std::string s = "exists M. forall x,y,z. ";
        for (std::size_t i = 0 ; i < conjuncts.size() ; ++i)
            s += (i ? " & " : "") + conjuncts[i];
        return s;
    }
}

TEST_CASE("vertex no mono triangle sentence")
{
    auto s = parse_sentence(vnmt);
    CHECK(s.monadic == std::vector<std::string>{ "M" });
    CHECK(s.variables == std::vector<std::string>{ "x", "y", "z" });
    REQUIRE(s.conjuncts.size() == 2);
    CHECK(s.conjuncts[0].alpha.size() == 3);
    CHECK(s.conjuncts[0].beta.size() == 3);
    CHECK(s.dialect == Dialect::mmsnp1);
    CHECK(render(s) == vnmt);
    CHECK(parse_sentence(render(s)) == s);
    CHECK(is_primitive(s).primitive);
}

TEST_CASE("parse errors")
{
    auto error_of = [] (const std::string & text) -> std::string {
        try {
            parse_sentence(text);
        }
        catch (const ParseError & e) {
            return e.what();
        }
        return "";
    };

    CHECK(error_of("exists M. forall x,y. !(E(x,y)&x=y)").find("equality") != std::string::npos);
    CHECK(error_of("exists M. forall x,y. !(E(x,y)&x!=y)").find("equality") != std::string::npos);
    CHECK(error_of("exists M. forall x,y. !(!E(x,y)&M(x))").find("monotone") != std::string::npos);
    CHECK(error_of("exists M. forall x. !(E(x,y))").find("'y'") != std::string::npos);
    CHECK(error_of("exists M. forall x,y. !(E(x,y)&E(x))").find("arities") != std::string::npos);
    CHECK(error_of("exists M. forall x,y. !(E(x,x)&M(E(x,y)))").find("needs that atom") != std::string::npos);
    CHECK(error_of("exists M,M. forall x. !(M(x))").find("twice") != std::string::npos);
    CHECK(error_of("exists M. forall x. !(M(x)) extra").find("after the sentence") != std::string::npos);

    try {
        parse_sentence("exists M. forall x,y.\n  !(E(x,y) & x = y)");
        FAIL("no error");
    }
    catch (const ParseError & e) {
        CHECK(e.line == 2);
        CHECK(e.column == 16);
    }
}

TEST_CASE("primitivity")
{
    auto s = parse_sentence(vnmt);
    CHECK(is_primitive(s).primitive);

    auto dropped = parse_sentence(
            "exists M. forall x,y,z. !(E(x,y)&E(y,z)&E(z,x)&M(x)&M(z)) & !(E(x,y)&E(y,z)&E(z,x)&!M(x)&!M(y)&!M(z))");
    auto r = is_primitive(dropped);
    CHECK(! r.primitive);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].find("conjunct 1") != std::string::npos);
    CHECK(r.diagnostics[0].find("variable y") != std::string::npos);

    auto both = parse_sentence("exists M. forall x. !(E(x,x)&M(x)&!M(x))");
    CHECK(! is_primitive(both).primitive);

    auto apart = parse_sentence("exists . forall x,y,z,w. !(E(x,y)&E(z,w))");
    auto a = is_primitive(apart);
    CHECK(! a.primitive);
    CHECK(a.diagnostics[0].find("not connected") != std::string::npos);

    auto lonely = parse_sentence("exists M. forall x,y. !(E(x,x)&M(x)&M(y)&M(E(x,x)))");
    CHECK(lonely.dialect == Dialect::mmsnp2);
    auto l = is_primitive(lonely);
    CHECK(! l.primitive);
    CHECK(l.diagnostics.size() == 1);

    auto edge = parse_sentence("exists M. forall x,y. !(E(x,y)&M(x)&M(y))");
    CHECK(is_primitive(edge).primitive);
    auto edge2 = parse_sentence("exists M. forall x,y. !(E(x,y)&M(x)&M(y)&M(E(x,y)))");
    CHECK(is_primitive(edge2).primitive);
    auto edge3 = parse_sentence("exists M. forall x,y. !(E(x,y)&E(y,x)&M(x)&M(y)&M(E(x,y)))");
    CHECK(! is_primitive(edge3).primitive);

    CHECK_THROWS_AS(sentence_to_problem(dropped), FormatError);
}

TEST_CASE("compiled vertex no mono triangle agrees with the builtin")
{
    auto p = sentence_to_problem(parse_sentence(vnmt));
    CHECK(p.vertex_palette().size() == 2);
    CHECK(p.edge_palette().size() == 1);
    CHECK(p.patterns().size() == 2);
    for (auto & f : p.patterns())
        CHECK(is_connected(f));
    check_same_problem(p, builtin_problem("vertex-no-mono-tri"));
}

TEST_CASE("compiled edge no mono triangle agrees with the builtin")
{
    auto s = parse_sentence(enmt_sentence());
    CHECK(s.dialect == Dialect::mmsnp2);
    CHECK(is_primitive(s).primitive);
    CHECK(parse_sentence(render(s)) == s);
    auto p = sentence_to_problem(s);
    CHECK(p.edge_palette().size() == 2);
    check_same_problem(p, builtin_problem("edge-no-mono-tri"));
}

TEST_CASE("round trips through sentences")
{
    for (auto & name : builtin_problem_names()) {
        CAPTURE(name);
        auto p = builtin_problem(name);
        auto s = problem_to_sentence(p);
        CHECK(is_primitive(s).primitive);
        CHECK(parse_sentence(render(s)) == s);
        check_same_problem(sentence_to_problem(s, p.signature()), p);
    }
}

TEST_CASE("predicate counts")
{
    auto one = Problem(digraph_signature(), { "0" }, { "0" }, { symmetric_triangle(0, 0, 0) });
    auto s = problem_to_sentence(one);
    CHECK(s.monadic.empty());
    CHECK(s.conjuncts.size() == 1);
    CHECK(s.conjuncts[0].alpha.size() == 6);
    CHECK(s.conjuncts[0].beta.empty());
    check_same_problem(sentence_to_problem(s), one);

    auto three = builtin_problem("tri-free-tri");
    auto t = problem_to_sentence(three);
    CHECK(t.monadic.size() == 2);
    // Patterns using colour 0 get a conjunct for each of its two assignments.
    std::size_t expected = 0;
    for (auto & f : three.patterns()) {
        std::size_t k = 1;
        for (Element x = 0 ; x < f.size() ; ++x)
            k *= f.vertex_colour(x) == 0 ? 2 : 1;
        expected += k;
    }
    CHECK(t.conjuncts.size() == expected);
    auto back = sentence_to_problem(t);
    CHECK(back.vertex_palette().size() == 4);

    StructureBuilder lone(digraph_signature(), 1);
    lone.set_colour(0, 1);
    auto isolated = Problem(digraph_signature(), { "a", "b" }, { "0" }, { lone.build() });
    auto i = problem_to_sentence(isolated);
    CHECK(render(i) == "exists M1. forall x1. !(M1(x1))");
    check_same_problem(sentence_to_problem(i, digraph_signature()), isolated, false);

    auto blank = Problem(digraph_signature(), { "0" }, { "0" }, { StructureBuilder(digraph_signature(), 1).build() });
    CHECK_THROWS_AS(problem_to_sentence(blank), FormatError);
}

TEST_CASE("zero conjuncts")
{
    auto s = parse_sentence("exists M. forall x. true");
    CHECK(s.conjuncts.empty());
    CHECK(render(s) == "exists M. forall x. true");
    auto p = sentence_to_problem(s, digraph_signature());
    CHECK(p.patterns().empty());
    CHECK(decides(clique(4), p));
}

TEST_CASE("disjunctions")
{
    auto d = parse_disjunction(std::string(vnmt) + " | exists . forall x. !(E(x,x))");
    REQUIRE(d.size() == 2);
    CHECK(d[0] == parse_sentence(vnmt));
    CHECK(d[1].monadic.empty());
    CHECK_THROWS_AS(parse_disjunction("exists . forall x. !(E(x,x)) |"), ParseError);
}

TEST_CASE("encoding arc colours as vertex colours")
{
    auto p = builtin_problem("edge-no-mono-tri");
    auto enc = encode_fpp2(p);
    CHECK(enc.m == 1);
    CHECK(enc.problem.signature() == tr_signature());
    CHECK(enc.problem.vertex_palette().size() == 2);

    StructureBuilder nothing(tr_signature(), 3);
    nothing.add(0, { 1 });
    auto empty = interpret_tr(nothing.build());
    CHECK(empty.size() == 3);
    CHECK(empty.tuple_count() == 0);

    for (auto & g : small_digraphs()) {
        auto a = encode_tr(g);
        CHECK(a.size() == g.size() + g.tuple_count());
        CHECK(leading(interpret_tr(a), g.size()).same_as(g));
    }

    std::size_t yes = 0;
    for (std::size_t n = 3 ; n <= 6 ; ++n) {
        auto k = clique(n);
        bool y = decides(k, p);
        CHECK(decides(encode_tr(k), enc.problem) == y);
        yes += y;
    }
    CHECK(yes == 3);

    auto three = Problem(digraph_signature(), { "0" }, { "a", "b", "c" }, { symmetric_edge(0, 0, 0, 0) });
    auto e3 = encode_fpp2(three);
    CHECK(e3.m == 2);
    CHECK(e3.problem.vertex_palette().size() == 4);
    CHECK(decides(encode_tr(cycle(5)), e3.problem) == decides(cycle(5), three));

    CHECK_THROWS_AS(encode_fpp2(builtin_problem("vertex-no-mono-tri")), FormatError);
}

TEST_CASE("yes instances of the encoding interpret to yes instances")
{
    auto p = builtin_problem("edge-no-mono-tri");
    auto enc = encode_fpp2(p);
    Rng rng(7);
    std::size_t yes = 0, no = 0;
    for (int i = 0 ; i < 100 ; ++i) {
        auto a = random_tr_structure(rng, 3 + i % 3, 0.5, 0.1);
        if (decides(a, enc.problem)) {
            CHECK(decides(interpret_tr(a), p));
            ++yes;
        }
        else
            ++no;
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

TEST_CASE("a shared arc witness forces one colour")
{
    // One e witnesses all six arcs of a symmetric triangle, so the arcs
    // cannot be coloured apart, while the interpreted triangle can be.
    StructureBuilder b(tr_signature(), 4);
    b.add(0, { 3 });
    for (Element x = 0 ; x < 3 ; ++x)
        for (Element y = 0 ; y < 3 ; ++y)
            if (x != y)
                b.add(1, { x, 3, y });
    auto a = b.build();
    auto p = builtin_problem("edge-no-mono-tri");
    CHECK(leading(interpret_tr(a), 3).same_as(clique(3)));
    CHECK(decides(interpret_tr(a), p));
    CHECK(! decides(a, encode_fpp2(p).problem));
}
