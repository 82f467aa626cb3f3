/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_MMSNP_HH
#define FPP_MMSNP_HH

#include <fpp/problem.hh>
#include <fpp/structure.hh>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpp
{
    enum class Dialect
    {
        mmsnp1,
        mmsnp2
    };

    struct Atom
    {
        std::string relation;
        std::vector<std::string> args;

        auto operator<=> (const Atom &) const = default;
    };

    // M(x), or M(R(x1, ..., xn)) when atom is set.
    struct MonadicLiteral
    {
        bool positive = true;
        std::string predicate;
        std::string variable;
        std::optional<Atom> atom;

        auto operator<=> (const MonadicLiteral &) const = default;
    };

    struct NegatedConjunct
    {
        std::vector<Atom> alpha;
        std::vector<MonadicLiteral> beta;

        auto operator<=> (const NegatedConjunct &) const = default;
    };

    struct Sentence
    {
        std::vector<std::string> monadic;
        std::vector<std::string> variables;
        std::vector<NegatedConjunct> conjuncts;
        Dialect dialect = Dialect::mmsnp1;

        auto operator== (const Sentence &) const -> bool = default;
    };

    class ParseError : public FormatError
    {
        public:
            std::size_t line, column;

            ParseError(const std::string & message, std::size_t line, std::size_t column);
    };

    // exists M1,...,Mk. forall x1,...,xn. !(...) & ... & !(...)
    // The body "true" stands for no conjuncts.
    auto parse_sentence(std::string_view text) -> Sentence;

    // Primitive sentences separated by "|".
    auto parse_disjunction(std::string_view text) -> std::vector<Sentence>;

    auto render(const Sentence & s) -> std::string;

    struct PrimitivityReport
    {
        bool primitive = true;
        std::vector<std::string> diagnostics;
    };

    auto is_primitive(const Sentence & s) -> PrimitivityReport;

    // Relation symbols in order of first use.
    auto sentence_signature(const Sentence & s) -> Signature;

    // Colours are the complete assignments to the monadic predicates, the
    // bit j of a colour giving predicate j. Tuples are coloured the same
    // way in MMSNP2 and have a single colour otherwise.
    auto sentence_to_problem(const Sentence & s, const std::optional<Signature> & signature = std::nullopt) -> Problem;

    // Uses ceil(log2 k) predicates, k the larger palette; assignments past
    // the palette stand for its first colour.
    auto problem_to_sentence(const Problem & p) -> Sentence;

    // The signature <T/1, R/3>.
    auto tr_signature() -> Signature;

    struct Fpp2Encoding
    {
        Problem problem;
        std::size_t m = 0;
    };

    // An arc-coloured problem over {E/2} as a vertex-coloured problem over
    // <T, R>: an arc x -> y of colour a becomes T(e), R(x, e, y) with e
    // coloured a. Colours past the arc palette are forbidden on T.
    auto encode_fpp2(const Problem & p) -> Fpp2Encoding;

    // E(x, y) iff T(e) and R(x, e, y) for some e.
    auto interpret_tr(const Structure & a) -> Structure;

    // A digraph over <T, R> with a fresh e for each arc, placed after the
    // vertices.
    auto encode_tr(const Structure & g) -> Structure;
}

#endif
