/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_CANONICAL_HH
#define FPP_CANONICAL_HH

#include <fpp/structure.hh>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fpp
{
    using Code = std::vector<std::uint32_t>;

    struct CodeHash
    {
        auto operator() (const Code & c) const -> std::size_t;
    };

    // Serialisation of a labelled structure: equal codes iff same_as().
    auto exact_code(const Structure & s) -> Code;

    // Serialisation under a relabelling; position[x] is the new index of x.
    auto code_under(const Structure & s, std::span<const Element> position) -> Code;

    struct CanonicalForm
    {
        Code code;
        // order[k] is the element placed at canonical position k.
        std::vector<Element> order;
    };

    inline constexpr std::size_t default_canonical_cap = 10;

    // Colour refinement followed by a search over individualisations for the
    // lexicographically smallest code. Pinned elements keep their listed
    // order at the front and are never permuted.
    auto canonical_form(const Structure & s, std::span<const Element> pinned = {},
            std::size_t cap = default_canonical_cap) -> CanonicalForm;

    auto is_isomorphic(const Structure & a, const Structure & b,
            std::size_t cap = default_canonical_cap) -> bool;

    // Relabels s so element order[k] becomes k.
    auto permuted(const Structure & s, std::span<const Element> order) -> Structure;
}

#endif
