/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_PROBLEM_HH
#define FPP_PROBLEM_HH

#include <fpp/hom.hh>
#include <fpp/structure.hh>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpp
{
    using Palette = std::vector<std::string>;

    // Connected coloured structures that may not map into a valid colouring.
    class Problem
    {
        private:
            Signature _signature;
            Palette _vertex_palette, _edge_palette;
            std::vector<Structure> _patterns;

        public:
            Problem() = default;

            // Checks connectivity and palettes, and drops isomorphic duplicates.
            Problem(Signature sig, Palette vertex_palette, Palette edge_palette, std::vector<Structure> patterns);

            auto signature() const -> const Signature & { return _signature; }
            auto vertex_palette() const -> const Palette & { return _vertex_palette; }
            auto edge_palette() const -> const Palette & { return _edge_palette; }
            auto patterns() const -> const std::vector<Structure> & { return _patterns; }
    };

    auto builtin_problem(std::string_view name) -> Problem;
    auto builtin_problem_names() -> std::vector<std::string>;

    // Symmetric triangle and digon over {E/2}.
    auto symmetric_triangle(Colour v0, Colour v1, Colour v2, Colour edges = 0) -> Structure;
    auto symmetric_edge(Colour v0, Colour v1, Colour forward, Colour backward) -> Structure;

    auto is_valid(const Structure & cs, const Problem & p) -> bool;

    struct Violation
    {
        std::size_t pattern;
        Hom hom;
    };

    auto find_violation(const Structure & cs, const Problem & p) -> std::optional<Violation>;

    inline constexpr std::uint64_t default_fpp_budget = 50'000'000;

    struct FppOptions
    {
        std::uint64_t budget = default_fpp_budget;
    };

    // A colouring of s that is valid for p, if one exists.
    auto decide_fpp(const Structure & s, const Problem & p, const FppOptions & options = {}) -> std::optional<Structure>;

    struct ProblemParams
    {
        std::size_t m = 0;
        std::size_t p = 0;
    };

    auto params(const Problem & p) -> ProblemParams;

    // Copy of s carrying the given colours.
    auto recoloured(const Structure & s, const std::vector<Colour> & vertex_colours,
            const std::vector<Colour> & tuple_colours) -> Structure;
}

#endif
