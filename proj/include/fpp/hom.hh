/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_HOM_HH
#define FPP_HOM_HH

#include <fpp/structure.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fpp
{
    using Hom = std::vector<Element>;

    enum class ColourMode
    {
        preserve,
        ignore
    };

    struct HomOptions
    {
        ColourMode colours = ColourMode::preserve;

        // Search nodes before BudgetExceeded is thrown; zero means no limit.
        std::uint64_t budget = 0;

        // Optional per-element candidate lists. Elements not covered, or with
        // an empty optional, may go anywhere.
        std::vector<std::optional<std::vector<Element>>> candidates;
    };

    auto check_hom(const Structure & a, const Structure & b, const Hom & h,
            ColourMode colours = ColourMode::preserve) -> bool;

    auto find_hom(const Structure & a, const Structure & b, const HomOptions & options = {}) -> std::optional<Hom>;

    // Calls f on each homomorphism until it returns false.
    void for_each_hom(const Structure & a, const Structure & b,
            const std::function<auto (const Hom &) -> bool> & f, const HomOptions & options = {});

    inline constexpr std::uint64_t default_enumeration_budget = 10'000'000;

    // With limit zero, refuses (BudgetExceeded) whenever |B|^|A| is above the
    // enumeration budget.
    auto enumerate_homs(const Structure & a, const Structure & b, std::size_t limit = 0,
            const HomOptions & options = {}) -> std::vector<Hom>;

    struct CoreResult
    {
        Structure core;
        // Elements of the input that the core consists of; this is the
        // inclusion map core -> input.
        std::vector<Element> inclusion;
        // A homomorphism input -> core.
        Hom retraction;
    };

    inline constexpr std::size_t default_core_cap = 64;

    auto core(const Structure & s, std::size_t cap = default_core_cap) -> CoreResult;
    auto is_core(const Structure & s, std::size_t cap = default_core_cap) -> bool;

    auto hom_equivalent(const Structure & a, const Structure & b) -> bool;
}

#endif
