/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_UNIVERSAL_HH
#define FPP_UNIVERSAL_HH

#include <fpp/canonical.hh>
#include <fpp/hom.hh>
#include <fpp/problem.hh>
#include <fpp/products.hh>
#include <fpp/structure.hh>

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fpp
{
    // 1 + sum over j = 0..m of b (b - 1)^j.
    auto x_param(std::size_t b, std::size_t m) -> std::size_t;

    // Ball radius used by the bounded-degree construction: the largest
    // pattern diameter, but at least 1 so that tuple colours are fixed by
    // the compared balls.
    auto template_radius(const Problem & p) -> std::size_t;

    // A coloured structure whose element i carries the label labels[i].
    // Labels are strictly increasing.
    struct Member
    {
        Structure structure;
        std::vector<Element> labels;

        auto index_of(Element label) const -> std::optional<Element>;
        auto key() const -> Code;
    };

    // Member built from a structure and any injective labelling.
    auto make_member(const Structure & s, const std::vector<Element> & labels) -> Member;

    // Induced ball of the given radius around a label, as a member.
    auto member_ball(const Member & s, Element label, std::size_t radius) -> Member;

    class LabellingFailure : public Error
    {
        public:
            using Error::Error;
    };

    struct BoundedDegreeOptions
    {
        // Members are limited to Gaifman degree at most b.
        bool restrict_degree = true;
        std::size_t member_cap = 500'000;
        std::size_t tuple_cap = 20'000'000;
        std::size_t enumeration_budget = 5'000'000;
    };

    struct BoundedDegreeTemplate
    {
        Problem problem;
        std::size_t b = 0, m = 0, x = 0;
        Structure carrier;
        std::vector<Member> members;
        // Element w of the carrier is (provenance[w].first, members[provenance[w].second]).
        std::vector<std::pair<Element, std::size_t>> provenance;
        std::unordered_map<Code, std::size_t, CodeHash> member_index;
        // One element per orbit of the label permutations.
        std::vector<Element> representatives;
        // Sends (v, S) to (v, radius-(m+1) ball of v in S); a retraction.
        Hom retraction;

        auto element(Element label, std::size_t member) const -> std::optional<Element>;
    };

    // Elements are pairs (label, member) over every connected valid member
    // whose labels lie in 0..X-1. A tuple holds when every member involved
    // contains it with one colour and they all agree, label for label, on
    // the radius-m balls around its labels.
    auto bounded_degree_universal(const Problem & p, std::size_t b, const BoundedDegreeOptions & options = {})
        -> BoundedDegreeTemplate;

    struct BallMap
    {
        Substructure ball;
        // Reads the label of each ball element inside the member of the centre.
        std::optional<Hom> map;
    };

    auto template_ball(const BoundedDegreeTemplate & t, Element u, std::size_t radius) -> BallMap;

    // Elements whose radius-m ball fails to map onto their member by labels.
    auto ball_lemma_failures(const BoundedDegreeTemplate & t) -> std::vector<Element>;

    // A labelling in 0..x-1 that is injective on every ball of the given radius.
    auto ball_injective_labelling(const Structure & g, std::size_t radius, std::size_t x) -> std::vector<Element>;

    // Sends each element to (its label, its labelled radius-(m+1) ball).
    // coloured_g is a valid colouring of the input.
    auto embed_into_universal(const Structure & coloured_g, const BoundedDegreeTemplate & t) -> Hom;

    // One element per orbit of the label permutations, which act on the
    // template as automorphisms since members carry every injective labelling.
    auto label_orbit_representatives(const BoundedDegreeTemplate & t) -> std::vector<Element>;

    // Uncoloured homomorphism into the carrier. The search stays inside the
    // image of the retraction, and one element of each component of g goes
    // to an orbit representative.
    auto find_hom_to_template(const Structure & g, const BoundedDegreeTemplate & t, std::uint64_t budget = 0)
        -> std::optional<Hom>;

    // The same construction searched implicitly, over members that are
    // radius-(m+1) balls around their own label. This template is an induced
    // substructure of the materialised one and receives a homomorphism from
    // it, so both have the same homomorphism preimages.
    class BallTemplate
    {
        public:
            struct Vertex
            {
                Element label;
                std::size_t member;

                auto operator<=> (const Vertex &) const = default;
            };

        private:
            Problem _problem;
            std::size_t _b, _m, _x;
            bool _restrict_degree;
            std::deque<Member> _members;
            std::unordered_map<Code, std::size_t, CodeHash> _index;
            std::map<std::pair<std::size_t, Element>, std::size_t> _ball_ids;
            std::unordered_map<Code, std::size_t, CodeHash> _ball_codes;
            std::map<std::pair<std::size_t, Element>, std::vector<std::size_t>> _extensions;
            std::optional<std::vector<Vertex>> _roots;
            std::map<Vertex, std::vector<Vertex>> _neighbours;
            std::map<std::pair<Vertex, std::vector<std::uint64_t>>, std::vector<Vertex>> _compatible;

            struct KeyHash
            {
                auto operator() (const std::vector<std::uint64_t> & k) const -> std::size_t;
            };
            std::unordered_map<std::vector<std::uint64_t>, std::optional<Colour>, KeyHash> _tuple_colours;

            auto uncached_tuple_colour(SymbolId s, const std::vector<Vertex> & vs) -> std::optional<Colour>;

            auto intern(Member m) -> std::size_t;
            auto ball_id(std::size_t member, Element label) -> std::size_t;
            auto roots() -> const std::vector<Vertex> &;

        public:
            BallTemplate(Problem p, std::size_t b, bool restrict_degree = true);

            auto b() const -> std::size_t { return _b; }
            auto m() const -> std::size_t { return _m; }
            auto x() const -> std::size_t { return _x; }
            auto problem() const -> const Problem & { return _problem; }
            auto member(std::size_t i) const -> const Member & { return _members.at(i); }
            auto member_id(const Member & m) -> std::size_t { return intern(m); }

            // Rooted balls around label whose radius-m ball is the ball of
            // that label in the given member.
            auto extensions(std::size_t member, Element label) -> const std::vector<std::size_t> &;

            // Independent checks straight from the definitions.
            auto is_vertex(Vertex v) const -> bool;
            auto tuple_colour(SymbolId s, const std::vector<Vertex> & vs) -> std::optional<Colour>;
            // Vertices sharing some tuple with v are among these.
            auto neighbours(Vertex v) -> const std::vector<Vertex> &;
            auto vertex_colour(Vertex v) const -> Colour;

            auto find_hom(const Structure & g, std::uint64_t budget = 0) -> std::optional<std::vector<Vertex>>;
            auto check_hom(const Structure & g, const std::vector<Vertex> & h,
                    ColourMode colours = ColourMode::ignore) -> bool;

            // Sends each element to (its label, its labelled radius-(m+1)
            // ball). coloured_g is a valid colouring of the input.
            auto embed(const Structure & coloured_g) -> std::vector<Vertex>;

            // The explored radius-r ball around v, with its vertices.
            auto ball(Vertex v, std::size_t radius) -> std::pair<Structure, std::vector<Vertex>>;
            // Whether the radius-m ball around v maps onto its member by labels.
            auto ball_lemma_holds(Vertex v) -> bool;

            auto root_vertices() -> const std::vector<Vertex> & { return roots(); }
    };

    // Connected coloured structures of at most n_max elements and tree-depth
    // at most p, valid for the problem, reduced to cores and deduplicated.
    auto enumerate_valid_cores(const Problem & p, std::size_t td_bound, std::size_t n_max,
            std::size_t budget = 5'000'000) -> std::vector<Structure>;

    struct LowTdOptions
    {
        // Replace the union of cores by its core, which has the same
        // homomorphism preimages and keeps the products small.
        bool reduce_base = true;
        ProductOptions products;
        std::size_t enumeration_budget = 5'000'000;
    };

    struct LowTdTemplate
    {
        std::size_t p = 0, q = 0;
        std::vector<Structure> cores;
        Structure base;
        std::vector<TruncatedProduct> stages;
        Structure carrier;
    };

    auto low_td_universal(const Problem & problem, std::size_t p, std::size_t q, std::size_t n_max,
            const LowTdOptions & options = {}) -> LowTdTemplate;

    struct Disagreement
    {
        Structure input;
        bool fpp;
        bool hom;
        std::optional<Structure> colouring;
        std::optional<Hom> witness;
    };

    struct DualityReport
    {
        std::size_t cases = 0;
        std::size_t agreements = 0;
        std::size_t exhausted = 0;
        std::vector<Disagreement> disagreements;
    };

    // Compares the problem against homomorphism to the given template on
    // each input. Inputs whose search spends its budget are counted as
    // exhausted rather than answered.
    auto verify_duality(const std::vector<Structure> & inputs, const Problem & p,
            const std::function<auto (const Structure &) -> std::optional<Hom>> & hom_to_template,
            std::uint64_t budget = default_fpp_budget) -> DualityReport;

    struct WitnessGraph
    {
        Structure graph;
        std::vector<Element> special;
        // One arc per edge, leaving special vertices; in-degree at most 2.
        std::vector<std::pair<Element, Element>> orientation;
    };

    // n special vertices, each pair joined by its own path with three edges.
    auto witness_gn(std::size_t n) -> WitnessGraph;
}

#endif
