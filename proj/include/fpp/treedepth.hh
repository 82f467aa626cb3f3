/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_TREEDEPTH_HH
#define FPP_TREEDEPTH_HH

#include <fpp/structure.hh>

#include <cstdint>
#include <optional>
#include <vector>

namespace fpp
{
    // A rooted forest whose nodes are 0..size()-1.
    class RootedForest
    {
        private:
            std::vector<std::optional<Element>> _parent;

        public:
            RootedForest() = default;

            // Rejects cycles and out-of-range parents.
            explicit RootedForest(std::vector<std::optional<Element>> parent);

            auto size() const -> std::size_t { return _parent.size(); }
            auto parent(Element x) const -> std::optional<Element> { return _parent[x]; }
            auto parents() const -> const std::vector<std::optional<Element>> & { return _parent; }
            auto roots() const -> std::vector<Element>;
            auto children(Element x) const -> std::vector<Element>;
            auto depth(Element x) const -> std::size_t;
            auto height() const -> std::size_t;
            auto is_ancestor(Element a, Element b) const -> bool;
            auto comparable(Element a, Element b) const -> bool { return is_ancestor(a, b) || is_ancestor(b, a); }
            // Nodes of the subtree rooted at x, x included.
            auto subtree(Element x) const -> std::vector<Element>;
    };

    // Every tuple whose elements form a chain under the ancestor order.
    auto closure(const RootedForest & f, const Signature & sig) -> Structure;

    // Tuple-wise containment, ignoring colours.
    auto is_substructure_of(const Structure & s, const Structure & t) -> bool;

    // Recursive check on components after removing the root: each component
    // must fall inside a single child subtree, which must in turn be an
    // elimination tree for the elements it holds.
    auto is_elimination_tree(const Structure & s, const RootedForest & y) -> bool;

    // The literal reading in which child subtrees and components correspond
    // one to one. Stricter than the above; the two differ e.g. on a star
    // arranged as a chain.
    auto is_strict_elimination_tree(const Structure & s, const RootedForest & y) -> bool;

    inline constexpr std::size_t default_tree_depth_cap = 12;

    struct TreeDepth
    {
        std::size_t value;
        RootedForest witness;
    };

    auto tree_depth(const Structure & s, std::size_t cap = default_tree_depth_cap) -> TreeDepth;

    // Parts are 0-based indices.
    using Partition = std::vector<std::size_t>;

    auto verify_ltd_partition(const Structure & s, const Partition & parts, std::size_t p,
            std::size_t cap = default_tree_depth_cap) -> bool;

    auto find_ltd_partition(const Structure & s, std::size_t p, std::size_t q,
            std::size_t cap = default_tree_depth_cap) -> std::optional<Partition>;

    struct Fraction
    {
        std::uint64_t numerator = 0, denominator = 1;

        auto operator== (const Fraction &) const -> bool = default;
        auto operator< (const Fraction & o) const -> bool
        {
            return numerator * o.denominator < o.numerator * denominator;
        }
    };

    inline constexpr std::size_t default_grad_cap = 8;

    // Families of disjoint connected parts of radius at most r; the value is
    // the best ratio of edges between parts to number of parts.
    auto grad(const Structure & g, std::size_t r, std::size_t cap = default_grad_cap) -> Fraction;

    using Orientation = std::vector<std::pair<Element, Element>>;

    // An orientation of the edges with every in-degree at most k, if any.
    auto sparse_orientation(const Structure & g, std::size_t k) -> std::optional<Orientation>;
    auto is_uniformly_k_sparse(const Structure & g, std::size_t k) -> bool;
    auto check_orientation(const Structure & g, std::size_t k, const Orientation & o) -> bool;
}

#endif
