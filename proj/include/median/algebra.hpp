#pragma once

#include <median/bitvec.hpp>
#include <median/error.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace median {

/// Size limits for the exhaustive parts of the library.
struct Limits {
    std::size_t check_points = 64;       // exhaustive triple checks of maps
    std::size_t enumeration_points = 16; // backtracking enumeration of epimorphisms
    std::size_t brute_force_points = 20; // subset enumeration (abstract tables)
    std::size_t superextension_ground = 5;
    std::size_t cover_points = 512;      // convex cover enumeration
};

/// A finite median algebra, stored as a median-closed set of distinct points of
/// {0,1}^dim sorted ascending.  Immutable once built.
class MedianAlgebra {
public:
    /// Checks every invariant and sorts the carrier.
    static MedianAlgebra validate(std::vector<Point> points, std::size_t dim);
    static MedianAlgebra validate(const std::vector<std::string> & points, std::size_t dim);

    /// Builds an algebra whose closure is already known (products, pullbacks,
    /// splits).  Sorts and deduplicates; the canonical flag is taken on trust.
    static MedianAlgebra assume_closed(std::vector<Point> points, std::size_t dim, bool canonical = false);

    static MedianAlgebra one_point();

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool canonical() const noexcept { return canonical_; }

    const std::vector<Point> & points() const noexcept { return points_; }
    const Point & point(std::size_t i) const { return points_[i]; }

    std::optional<std::size_t> find(const Point & p) const;
    /// Throws PointNotInCarrier.
    std::size_t index_of(const Point & p) const;

    /// Median of three carrier positions.
    std::size_t median(std::size_t a, std::size_t b, std::size_t c) const;
    /// Median of three points; all three must be members.
    Point median(const Point & a, const Point & b, const Point & c) const;

    Subset empty_set() const { return Subset(size()); }
    Subset full_set() const { return Subset::filled(size()); }

    /// Indicator of coordinate c over the carrier.
    Subset column(std::size_t c) const;

    friend bool operator==(const MedianAlgebra & a, const MedianAlgebra & b)
    {
        return a.dim_ == b.dim_ && a.points_ == b.points_ && a.canonical_ == b.canonical_;
    }

private:
    MedianAlgebra(std::size_t dim, std::vector<Point> points, bool canonical)
        : dim_(dim), points_(std::move(points)), canonical_(canonical)
    {
    }

    std::size_t dim_ = 0;
    std::vector<Point> points_;
    bool canonical_ = false;
};

using AlgebraPtr = std::shared_ptr<const MedianAlgebra>;

inline AlgebraPtr share(MedianAlgebra m) { return std::make_shared<const MedianAlgebra>(std::move(m)); }

/// An interval-closed set of carrier positions (possibly empty).
struct ConvexSet {
    Subset members;

    friend bool operator==(const ConvexSet &, const ConvexSet &) = default;
};

/// A complementary pair of convex sets.  side0 holds carrier position 0 whenever
/// the halfspace is proper.
struct Halfspace {
    Subset side0;
    Subset side1;

    bool proper() const { return side0.any() && side1.any(); }
    /// Whether the halfspace separates carrier positions a and b.
    bool separates(std::size_t a, std::size_t b) const { return side0.test(a) != side0.test(b); }

    friend bool operator==(const Halfspace &, const Halfspace &) = default;
};

/// Orients a bipartition so that side0 contains position 0.
Halfspace make_halfspace(const Subset & side);

/// {x : median(a,b,x) = x}.
ConvexSet interval(const MedianAlgebra & m, std::size_t a, std::size_t b);
ConvexSet interval(const MedianAlgebra & m, const Point & a, const Point & b);

bool is_convex(const MedianAlgebra & m, const Subset & s);
bool is_halfspace(const MedianAlgebra & m, const Subset & s);

/// Least interval-closed superset, by repeated pairwise interval closure.
ConvexSet convex_hull(const MedianAlgebra & m, const Subset & s);

/// All proper halfspaces, one per wall, in canonical order (side1 indicator
/// ascending).  Every halfspace of an embedded algebra is the trace of a
/// coordinate, so the walls are the distinct nonconstant columns.
std::vector<Halfspace> halfspaces(const MedianAlgebra & m);

/// The proper halfspaces in canonical order, both orientations: side0 of wall 0,
/// side1 of wall 0, side0 of wall 1, ...
std::vector<Subset> oriented_halfspaces(const MedianAlgebra & m);

struct Canonicalized {
    MedianAlgebra algebra;
    std::vector<std::size_t> relabel; // old carrier position -> new carrier position
};

/// Re-embeds with one coordinate per wall, oriented so the least input point is the
/// origin, with rows and columns both in ascending lexicographic order.
Canonicalized canonicalize(const MedianAlgebra & m);

struct Quotient {
    MedianAlgebra algebra;
    std::vector<std::size_t> map; // carrier position -> class position
};

/// x ~ y iff no member of the family separates them.  Members are given by one
/// side; each must be a halfspace of m (improper ones are allowed and inert).
Quotient quotient_by_halfspaces(const MedianAlgebra & m, const std::vector<Subset> & family);
Quotient quotient_by_halfspaces(const MedianAlgebra & m, const std::vector<Halfspace> & family);

/// First oriented halfspace H (canonical order) with b ⊆ H and a ∩ H = ∅.
Subset separate_convex(const MedianAlgebra & m, const Subset & a, const Subset & b);

/// Edges of the median graph: pairs whose interval is exactly the pair, i < j.
std::vector<std::pair<std::size_t, std::size_t>> median_graph_edges(const MedianAlgebra & m);

std::string render(const MedianAlgebra & m, const Subset & s);

} // namespace median
