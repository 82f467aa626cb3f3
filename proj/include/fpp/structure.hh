/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_STRUCTURE_HH
#define FPP_STRUCTURE_HH

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpp
{
    using Element = std::uint32_t;
    using SymbolId = std::uint32_t;
    using Colour = std::uint32_t;

    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    // Malformed input or a violated precondition. The CLI maps this to exit 2.
    class FormatError : public Error
    {
        public:
            using Error::Error;
    };

    // A configured cap or search budget was hit. The CLI maps this to exit 3.
    class BudgetExceeded : public Error
    {
        public:
            using Error::Error;
    };

    struct Symbol
    {
        std::string name;
        unsigned arity = 0;

        auto operator== (const Symbol &) const -> bool = default;
    };

    class Signature
    {
        private:
            std::vector<Symbol> _symbols;

        public:
            Signature() = default;
            explicit Signature(std::vector<Symbol> symbols);

            auto size() const -> std::size_t { return _symbols.size(); }
            auto symbol(SymbolId s) const -> const Symbol & { return _symbols.at(s); }
            auto symbols() const -> const std::vector<Symbol> & { return _symbols; }
            auto find(std::string_view name) const -> std::optional<SymbolId>;
            auto max_arity() const -> unsigned;

            auto operator== (const Signature &) const -> bool = default;
    };

    // The signature {E/2}.
    auto digraph_signature() -> Signature;

    struct TupleRef
    {
        SymbolId symbol;
        std::uint32_t index;

        auto operator== (const TupleRef &) const -> bool = default;
        auto operator<=> (const TupleRef &) const = default;
    };

    // Tuples of one relation, stored flat and sorted lexicographically.
    class Relation
    {
        friend class StructureBuilder;
        friend class Structure;

        private:
            unsigned _arity = 0;
            std::vector<Element> _flat;
            std::vector<Colour> _colours;

        public:
            explicit Relation(unsigned arity = 0) : _arity(arity) { }

            auto arity() const -> unsigned { return _arity; }
            auto size() const -> std::size_t { return _colours.size(); }
            auto tuple(std::size_t i) const -> std::span<const Element>
            {
                return { _flat.data() + i * _arity, _arity };
            }
            auto colour(std::size_t i) const -> Colour { return _colours[i]; }
            auto find(std::span<const Element> t) const -> std::optional<std::uint32_t>;
    };

    // A finite coloured relational structure. Elements are 0..size()-1. An
    // uncoloured structure is one whose colours are all zero, i.e. coloured
    // over singleton palettes.
    class Structure
    {
        friend class StructureBuilder;

        private:
            Signature _signature;
            std::size_t _size = 0;
            std::vector<Relation> _relations;
            std::vector<Colour> _vertex_colours;
            std::vector<std::vector<TupleRef>> _incident;
            std::vector<std::string> _names;

        public:
            Structure() = default;

            auto signature() const -> const Signature & { return _signature; }
            auto size() const -> std::size_t { return _size; }
            auto relation(SymbolId s) const -> const Relation & { return _relations[s]; }
            auto tuple(TupleRef r) const -> std::span<const Element> { return _relations[r.symbol].tuple(r.index); }
            auto tuple_colour(TupleRef r) const -> Colour { return _relations[r.symbol].colour(r.index); }
            auto vertex_colour(Element e) const -> Colour { return _vertex_colours[e]; }
            auto vertex_colours() const -> const std::vector<Colour> & { return _vertex_colours; }
            auto holds(SymbolId s, std::span<const Element> t) const -> bool { return _relations[s].find(t).has_value(); }
            auto find_tuple(SymbolId s, std::span<const Element> t) const -> std::optional<TupleRef>;

            // Distinct tuples mentioning e, each listed once.
            auto incident(Element e) const -> const std::vector<TupleRef> & { return _incident[e]; }
            auto tuple_count() const -> std::size_t;
            auto all_tuples() const -> std::vector<TupleRef>;

            auto name(Element e) const -> std::string;
            auto has_names() const -> bool { return ! _names.empty(); }
            auto names() const -> const std::vector<std::string> & { return _names; }
            auto find_name(std::string_view n) const -> std::optional<Element>;

            auto is_uncoloured() const -> bool;

            // Same structure with every colour reset to zero.
            auto uncoloured() const -> Structure;
            auto with_names(std::vector<std::string> names) const -> Structure;
            auto without_names() const -> Structure;

            // Exact equality of labelled structures (names ignored).
            auto same_as(const Structure & other) const -> bool;
    };

    class StructureBuilder
    {
        private:
            Signature _signature;
            std::size_t _size;
            std::vector<Colour> _vertex_colours;
            struct Pending
            {
                SymbolId symbol;
                std::vector<Element> tuple;
                Colour colour;
            };
            std::vector<Pending> _pending;
            std::vector<std::string> _names;

        public:
            StructureBuilder(Signature sig, std::size_t size);

            auto size() const -> std::size_t { return _size; }
            auto add_element(Colour c = 0) -> Element;
            void set_colour(Element e, Colour c);
            void set_names(std::vector<std::string> names);

            // Adding the same tuple twice is harmless unless the colours differ.
            void add(SymbolId s, std::span<const Element> t, Colour c = 0);
            void add(SymbolId s, std::initializer_list<Element> t, Colour c = 0)
            {
                add(s, std::span<const Element>(t.begin(), t.size()), c);
            }

            auto build() const -> Structure;
    };

    struct Substructure
    {
        Structure structure;
        // origin[i] is the element of the parent that became element i.
        std::vector<Element> origin;
    };

    struct TupleOccurrence
    {
        SymbolId symbol;
        std::vector<Element> elements;

        auto operator<=> (const TupleOccurrence &) const = default;
    };

    auto tuple_set(const Structure & s) -> std::vector<TupleOccurrence>;

    // Neighbour lists of the Gaifman graph, sorted, without self-loops.
    auto gaifman_adjacency(const Structure & s) -> std::vector<std::vector<Element>>;
    auto gaifman(const Structure & s) -> Structure;

    auto induced(const Structure & s, std::span<const Element> subset) -> Substructure;
    auto components(const Structure & s) -> std::vector<Substructure>;
    auto is_connected(const Structure & s) -> bool;
    auto disjoint_union(const Structure & a, const Structure & b) -> Structure;

    // Number of distinct tuples x occurs in.
    auto degree(const Structure & s, Element x) -> std::size_t;
    auto max_degree(const Structure & s) -> std::size_t;
    auto max_gaifman_degree(const Structure & s) -> std::size_t;

    // Breadth-first distances in the Gaifman graph; unreachable is SIZE_MAX.
    auto distances_from(const Structure & s, Element x) -> std::vector<std::size_t>;
    auto diameter(const Structure & s) -> std::size_t;

    // Elements at Gaifman distance at most r from x, induced.
    auto ball(const Structure & s, Element x, std::size_t r) -> Substructure;

    // Symmetric closure of an edge list as a structure over {E/2}.
    auto encode_graph(std::size_t n, std::span<const std::pair<Element, Element>> edges) -> Structure;
    auto encode_digraph(std::size_t n, std::span<const std::pair<Element, Element>> arcs) -> Structure;
    // Edges {u,v} with u <= v present in either direction.
    auto decode_graph(const Structure & s) -> std::vector<std::pair<Element, Element>>;
}

#endif
