#pragma once

#include <median/algebra.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace median {

using Map = std::vector<std::uint32_t>;

/// A surjective median-preserving map, stored as target positions indexed by
/// source positions.
struct Epimorphism {
    AlgebraPtr source;
    AlgebraPtr target;
    Map map;

    std::size_t operator()(std::size_t x) const { return map[x]; }

    static Epimorphism identity(const AlgebraPtr & m);

    friend bool operator==(const Epimorphism & a, const Epimorphism & b)
    {
        return *a.source == *b.source && *a.target == *b.target && a.map == b.map;
    }
};

bool same_algebra(const AlgebraPtr & a, const AlgebraPtr & b);

/// Exhaustive median-preservation test over all triples.
bool is_median_preserving(const MedianAlgebra & source, const MedianAlgebra & target, std::span<const std::uint32_t> map);
/// Exhaustive test of f([a,b]) ⊆ [f(a),f(b)].
bool is_convexity_preserving(const MedianAlgebra & source, const MedianAlgebra & target,
                             std::span<const std::uint32_t> map);
/// Median preservation via halfspace preimages: every coordinate of the target
/// must pull back to a halfspace of the source.  Linear in the carrier sizes.
bool pulls_back_halfspaces(const MedianAlgebra & source, const MedianAlgebra & target,
                           std::span<const std::uint32_t> map);

/// Accepts iff the map is surjective and median-preserving.  Up to
/// limits.check_points source points both the triple test and the (cp) test run
/// and must agree; larger sources use the halfspace-preimage test.
Epimorphism check_epimorphism(AlgebraPtr source, AlgebraPtr target, Map map, const Limits & limits = {});

/// All epimorphisms m ↠ n in lexicographic order of their maps.
std::vector<Epimorphism> enumerate_epis(const AlgebraPtr & m, const AlgebraPtr & n, const Limits & limits = {});

/// g ∘ f.
Epimorphism compose(const Epimorphism & g, const Epimorphism & f);

struct Pullback {
    AlgebraPtr apex;     // canonical form of {(x,y) : f(x) = g(y)}
    Epimorphism to_left;  // apex ↠ f.source
    Epimorphism to_right; // apex ↠ g.source
};

Pullback pullback(const Epimorphism & f, const Epimorphism & g);

std::optional<Epimorphism> find_isomorphism(const AlgebraPtr & m, const AlgebraPtr & n);
std::vector<Epimorphism> automorphisms(const AlgebraPtr & m);

/// The f′ with f = f′ ∘ h, when it exists.
std::optional<Epimorphism> factor_epimorphism(const Epimorphism & f, const Epimorphism & h);

/// Epimorphisms q : source ↠ target with q(x) ∈ allowed[x] (target positions), in
/// search order: one oriented source halfspace per target wall, walls and
/// halfspaces both in canonical order.  Stops after `limit` results.
std::vector<Epimorphism> search_lifts(const AlgebraPtr & source, const AlgebraPtr & target,
                                      const std::vector<Subset> & allowed, std::size_t limit);

/// First q : source ↠ f.source with f ∘ q = down, where down maps source positions
/// to f.target positions.
std::optional<Epimorphism> find_lift(const AlgebraPtr & source, std::span<const std::uint32_t> down,
                                     const Epimorphism & f);

/// All epimorphisms source ↠ target, found through halfspace choices; sorted by map.
std::vector<Epimorphism> epis_via_halfspaces(const AlgebraPtr & source, const AlgebraPtr & target);

} // namespace median
