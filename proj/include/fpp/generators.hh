/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef FPP_GENERATORS_HH
#define FPP_GENERATORS_HH

#include <fpp/structure.hh>
#include <fpp/treedepth.hh>

#include <random>
#include <vector>

namespace fpp
{
    using Rng = std::mt19937_64;

    // Every connected loopless graph with 1..max_n vertices and maximum
    // degree at most b, one per isomorphism class.
    auto degree_bounded_graphs(std::size_t b, std::size_t max_n) -> std::vector<Structure>;

    // A connected loopless graph on n vertices with maximum degree at most b,
    // grown as a random tree and then given random extra edges.
    auto random_degree_bounded_graph(Rng & rng, std::size_t n, std::size_t b) -> Structure;

    // Each arc independently with the given probability.
    auto random_digraph(Rng & rng, std::size_t n, double density, bool loops = false) -> Structure;

    struct TdSample
    {
        Structure structure;
        // Every tuple is a chain of this forest, whose height is at most the bound.
        RootedForest forest;
    };

    // A random forest of height at most td, then each chain tuple with the
    // given probability.
    auto random_bounded_td(Rng & rng, const Signature & sig, std::size_t n, std::size_t td, double density) -> TdSample;

    struct LtdSample
    {
        Structure structure;
        Partition parts;
    };

    // Elements are put into q random parts, and arcs are offered in random
    // order, each kept with the given probability if every union of at most
    // p parts still has tree-depth at most p.
    auto random_ltd_partitioned(Rng & rng, std::size_t n, std::size_t p, std::size_t q, double density) -> LtdSample;

    // T(e) with probability t_density, R(x, e, y) with probability r_density.
    auto random_tr_structure(Rng & rng, std::size_t n, double t_density, double r_density) -> Structure;
}

#endif
