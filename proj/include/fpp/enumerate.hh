/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_ENUMERATE_HH
#define FPP_ENUMERATE_HH

#include <fpp/structure.hh>

#include <functional>
#include <optional>
#include <vector>

namespace fpp
{
    enum class DegreeMeasure
    {
        tuples,
        gaifman
    };

    auto degree_under(const Structure & s, Element x, DegreeMeasure measure) -> std::size_t;
    auto max_degree_under(const Structure & s, DegreeMeasure measure) -> std::size_t;

    inline constexpr std::size_t default_enumeration_candidates = 5'000'000;

    struct EnumerateOptions
    {
        Signature signature;
        Colour vertex_colours = 1;
        Colour tuple_colours = 1;
        std::size_t max_size = 1;
        // Loopless symmetric graphs over a single binary symbol; both arcs of
        // an edge carry the same colour.
        bool graphs = false;
        bool connected = true;
        std::optional<std::size_t> max_degree;
        DegreeMeasure degree_measure = DegreeMeasure::tuples;
        // Must be closed under induced substructures; used to prune growth.
        std::function<bool (const Structure &)> keep;
        std::size_t budget = default_enumeration_candidates;
    };

    // Every coloured structure with 1..max_size elements satisfying the
    // options, one per isomorphism class, in canonical labelling, ordered by
    // size and then by canonical code.
    auto enumerate_structures(const EnumerateOptions & options) -> std::vector<Structure>;
}

#endif
