/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_PRODUCTS_HH
#define FPP_PRODUCTS_HH

#include <fpp/hom.hh>
#include <fpp/structure.hh>

#include <limits>
#include <vector>

namespace fpp
{
    // Uncoloured classical product; colours of the inputs are ignored.
    auto product(const Structure & a, const Structure & b) -> Structure;

    inline constexpr Element star = std::numeric_limits<Element>::max();

    inline constexpr std::size_t default_product_cap = 200'000;
    inline constexpr std::size_t default_product_tuple_cap = 20'000'000;

    struct ProductOptions
    {
        std::size_t element_cap = default_product_cap;
        std::size_t tuple_cap = default_product_tuple_cap;
    };

    struct TruncatedProduct
    {
        std::size_t p = 0;
        Structure carrier;
        // coords[w] has length p with exactly one entry equal to star.
        std::vector<std::vector<Element>> coords;
        std::vector<std::size_t> star_index;

        auto find(const std::vector<Element> & c) const -> std::optional<Element>;
    };

    // Number of elements truncated_product(cs, p) would have.
    auto truncated_product_size(const Structure & cs, std::size_t p) -> std::size_t;

    // Elements are p-tuples with one star whose other entries share a vertex
    // colour. A tuple holds when, at every coordinate no entry has its star
    // in, the projected tuple holds in cs, all with one common colour. When
    // every coordinate carries some star there is nothing to project and the
    // tuple takes colour 0.
    auto truncated_product(const Structure & cs, std::size_t p, const ProductOptions & options = {}) -> TruncatedProduct;

    // Applies truncated products for indices from..to in turn. Each stage's
    // coordinates refer to the previous stage's elements. An empty range
    // leaves cs unchanged.
    auto iterated_truncated_product(const Structure & cs, std::size_t from, std::size_t to,
            const ProductOptions & options = {}) -> std::vector<TruncatedProduct>;

    struct Projection
    {
        Substructure domain;
        Hom map;
    };

    // Reads coordinate i0 (0-based) on the elements whose star is elsewhere.
    auto coordinate_projection(const TruncatedProduct & tp, std::size_t i0) -> Projection;

    // Coordinatewise assembly of partial homomorphisms: partial[i] maps the
    // elements outside part i into the base structure. parts are 0-based.
    auto assemble_partial_homs(const Structure & s, const std::vector<std::size_t> & parts,
            const std::vector<Hom> & partial, const TruncatedProduct & tp) -> Hom;
}

#endif
