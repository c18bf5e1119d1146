#pragma once

#include <median/algebra.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace median {

/// A maximal linked system on {0,...,ground-1}; members are bitmasks, sorted.
struct MaximalLinkedSystem {
    std::size_t ground = 0;
    std::vector<std::uint32_t> family;

    bool contains(std::uint32_t set) const;

    friend bool operator==(const MaximalLinkedSystem &, const MaximalLinkedSystem &) = default;
    friend auto operator<=>(const MaximalLinkedSystem &, const MaximalLinkedSystem &) = default;
};

bool is_linked(std::span<const std::uint32_t> family);
/// Linked, and every subset outside the family misses some member.
bool is_maximal_linked(std::size_t ground, std::span<const std::uint32_t> family);

/// Members lying in at least two of the three systems.
MaximalLinkedSystem mls_median(const MaximalLinkedSystem & x, const MaximalLinkedSystem & y,
                               const MaximalLinkedSystem & z);

/// All maximal linked systems on an n-set, sorted.  A maximal linked system picks
/// exactly one set from every complementary pair, pairwise intersecting.
std::vector<MaximalLinkedSystem> maximal_linked_systems(std::size_t n, const Limits & limits = {});

struct Superextension {
    MedianAlgebra algebra;                    // canonical
    std::vector<MaximalLinkedSystem> systems; // systems[i] is algebra.point(i)
};

/// λn as a median algebra, embedded by the coordinates A⁺ = {ξ : A ∈ ξ}.
Superextension superextension(std::size_t n, const Limits & limits = {});

struct TableEmbedding {
    MedianAlgebra algebra;             // canonical
    std::vector<std::size_t> position; // table element -> carrier position
};

/// Ingests a ternary operation on {0..n-1} given as table[(a*n+b)*n+c].  Checks
/// absorption and symmetry exhaustively, then embeds by the halfspaces of the
/// induced interval convexity and requires the embedding to be injective and
/// median-preserving.
TableEmbedding from_median_table(std::size_t n, std::span<const std::size_t> table, const Limits & limits = {});

} // namespace median
