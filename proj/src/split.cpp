#include <median/sequence.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace median {

SplitExtension split_extension(const AlgebraPtr & k, const Subset & a, const Subset & b)
{
    if (a.size() != k->size() || b.size() != k->size())
        fail(Errc::ShapeError, "subset size differs from carrier size");
    if (a.none() || b.none())
        fail(Errc::EmptySide, "both sides of a split must be nonempty");
    if (! is_convex(*k, a))
        fail(Errc::NotConvex, "first side is not convex", {render(*k, a)});
    if (! is_convex(*k, b))
        fail(Errc::NotConvex, "second side is not convex", {render(*k, b)});
    if ((a | b) != k->full_set())
        fail(Errc::NotCovering, "sides do not cover the carrier", {render(*k, ~(a | b))});

    std::vector<Point> pts;
    std::vector<std::uint32_t> base;
    for (std::size_t x = 0; x < k->size(); ++x)
        for (bool side : {false, true})
            if ((side ? b : a).test(x)) {
                Point p = k->point(x);
                p.push_back(side);
                pts.push_back(std::move(p));
                base.push_back(static_cast<std::uint32_t>(x));
            }
    // Rows of k are sorted and the appended bit breaks ties, so pts is sorted.
    auto algebra = share(MedianAlgebra::assume_closed(pts, k->dim() + 1));
    ensure(algebra->size() == pts.size(), "split produced duplicate points");
    return {algebra, {algebra, k, std::move(base)}};
}

std::vector<Subset> convex_sets(const MedianAlgebra & m)
{
    const auto sides = oriented_halfspaces(m);
    std::unordered_set<Subset, BitVecHash> seen{m.full_set()};
    std::deque<Subset> queue{m.full_set()};
    while (! queue.empty()) {
        Subset s = std::move(queue.front());
        queue.pop_front();
        for (auto & h : sides) {
            Subset t = s & h;
            if (t.any() && t != s && seen.insert(t).second)
                queue.push_back(std::move(t));
        }
    }
    std::vector<Subset> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SplitData> enumerate_convex_covers(const AlgebraPtr & k, const Limits & limits)
{
    if (k->size() > limits.cover_points)
        fail(Errc::BoundExceeded, "cover enumeration is limited to " + std::to_string(limits.cover_points) + " points");
    const auto sets = convex_sets(*k);
    std::vector<SplitData> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const Subset missing = ~sets[i];
        for (std::size_t j = i; j < sets.size(); ++j)
            if (missing.is_subset_of(sets[j]))
                out.push_back({k, {sets[i]}, {sets[j]}});
    }
    return out;
}

namespace {
    // Sorted rows of the distance matrix; equal for isomorphic algebras.
    std::vector<std::vector<std::size_t>> distance_profile(const MedianAlgebra & m)
    {
        std::vector<std::vector<std::size_t>> rows(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < m.size(); ++j)
                rows[i].push_back(m.point(i).distance(m.point(j)));
            std::sort(rows[i].begin(), rows[i].end());
        }
        std::sort(rows.begin(), rows.end());
        return rows;
    }
} // namespace

std::vector<AlgebraPtr> small_median_algebras(std::size_t max_points)
{
    if (max_points == 0)
        return {};
    std::vector<AlgebraPtr> found{share(MedianAlgebra::one_point())};
    std::map<std::vector<std::vector<std::size_t>>, std::vector<std::size_t>> buckets;
    buckets[distance_profile(*found[0])].push_back(0);

    for (std::size_t i = 0; i < found.size(); ++i) {
        const AlgebraPtr k = found[i];
        if (k->size() >= max_points)
            continue;
        for (auto & cover : enumerate_convex_covers(k)) {
            if (cover.a.members.count() + cover.b.members.count() > max_points)
                continue;
            auto grown = share(canonicalize(*split_extension(k, cover.a.members, cover.b.members).algebra).algebra);
            auto & bucket = buckets[distance_profile(*grown)];
            bool known = std::any_of(bucket.begin(), bucket.end(),
                                     [&](std::size_t b) { return find_isomorphism(found[b], grown).has_value(); });
            if (! known) {
                bucket.push_back(found.size());
                found.push_back(grown);
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const AlgebraPtr & a, const AlgebraPtr & b) {
        if (a->size() != b->size())
            return a->size() < b->size();
        if (a->dim() != b->dim())
            return a->dim() < b->dim();
        return a->points() < b->points();
    });
    return found;
}

} // namespace median
