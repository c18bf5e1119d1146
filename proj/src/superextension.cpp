#include <median/superextension.hpp>

#include <algorithm>
#include <bit>
#include <string>

namespace median {

bool MaximalLinkedSystem::contains(std::uint32_t set) const
{
    return std::binary_search(family.begin(), family.end(), set);
}

bool is_linked(std::span<const std::uint32_t> family)
{
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i; j < family.size(); ++j)
            if ((family[i] & family[j]) == 0)
                return false;
    return true;
}

bool is_maximal_linked(std::size_t ground, std::span<const std::uint32_t> family)
{
    if (! is_linked(family))
        return false;
    const std::uint32_t count = std::uint32_t{1} << ground;
    for (std::uint32_t a = 0; a < count; ++a) {
        if (std::find(family.begin(), family.end(), a) != family.end())
            continue;
        bool blocked = std::any_of(family.begin(), family.end(), [a](auto b) { return (a & b) == 0; });
        if (! blocked)
            return false;
    }
    return true;
}

MaximalLinkedSystem mls_median(const MaximalLinkedSystem & x, const MaximalLinkedSystem & y,
                               const MaximalLinkedSystem & z)
{
    if (x.ground != y.ground || x.ground != z.ground)
        fail(Errc::TypeMismatch, "systems live on different ground sets");
    MaximalLinkedSystem r{x.ground, {}};
    const std::uint32_t count = std::uint32_t{1} << x.ground;
    for (std::uint32_t a = 0; a < count; ++a) {
        int votes = int(x.contains(a)) + int(y.contains(a)) + int(z.contains(a));
        if (votes >= 2)
            r.family.push_back(a);
    }
    return r;
}

std::vector<MaximalLinkedSystem> maximal_linked_systems(std::size_t n, const Limits & limits)
{
    if (n == 0)
        fail(Errc::ShapeError, "ground set must be nonempty");
    if (n > limits.superextension_ground || n > 16)
        fail(Errc::GroundSizeTooLarge, "ground size " + std::to_string(n) + " exceeds the bound " +
                                           std::to_string(limits.superextension_ground));
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    // One representative per complementary pair: the side without element n-1.
    std::vector<std::uint32_t> reps;
    for (std::uint32_t a = 0; a <= full; ++a)
        if (! (a >> (n - 1) & 1U))
            reps.push_back(a);
    std::stable_sort(reps.begin(), reps.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });

    std::vector<MaximalLinkedSystem> out;
    std::vector<std::uint32_t> chosen;
    auto pick = [&](auto && self, std::size_t i) -> void {
        if (i == reps.size()) {
            MaximalLinkedSystem m{n, chosen};
            std::sort(m.family.begin(), m.family.end());
            out.push_back(std::move(m));
            return;
        }
        for (std::uint32_t s : {reps[i], full ^ reps[i]}) {
            if (s == 0)
                continue;
            if (std::any_of(chosen.begin(), chosen.end(), [s](auto c) { return (c & s) == 0; }))
                continue;
            chosen.push_back(s);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    pick(pick, 0);
    std::sort(out.begin(), out.end());
    return out;
}

Superextension superextension(std::size_t n, const Limits & limits)
{
    auto systems = maximal_linked_systems(n, limits);
    const std::size_t coords = std::size_t{1} << n;
    std::vector<Point> pts;
    for (auto & s : systems) {
        Point p(coords);
        for (auto a : s.family)
            p.set(a);
        pts.push_back(std::move(p));
    }
    auto raw = MedianAlgebra::validate(pts, coords);
    auto canon = canonicalize(raw);
    std::vector<MaximalLinkedSystem> ordered(systems.size());
    for (std::size_t i = 0; i < systems.size(); ++i)
        ordered[canon.relabel[raw.index_of(pts[i])]] = systems[i];
    return {std::move(canon.algebra), std::move(ordered)};
}

TableEmbedding from_median_table(std::size_t n, std::span<const std::size_t> table, const Limits & limits)
{
    if (n == 0)
        fail(Errc::EmptyCarrier, "the table has no elements");
    if (table.size() != n * n * n)
        fail(Errc::ShapeError, "table must have n^3 entries");
    if (n > limits.brute_force_points || n > 32)
        fail(Errc::BoundExceeded, "table too large for exhaustive halfspace search");
    auto m = [&](std::size_t a, std::size_t b, std::size_t c) { return table[(a * n + b) * n + c]; };
    auto triple = [](std::size_t a, std::size_t b, std::size_t c) {
        return std::vector<std::string>{std::to_string(a), std::to_string(b), std::to_string(c)};
    };
    for (auto v : table)
        if (v >= n)
            fail(Errc::ShapeError, "table value out of range", {std::to_string(v)});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (m(a, a, b) != a)
                fail(Errc::AxiomViolation, "absorption m(a,a,b)=a fails", triple(a, a, b));
            for (std::size_t c = 0; c < n; ++c)
                if (m(a, b, c) != m(b, a, c) || m(a, b, c) != m(a, c, b))
                    fail(Errc::AxiomViolation, "m is not symmetric", triple(a, b, c));
        }

    using Mask = std::uint32_t;
    std::vector<Mask> iv(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t x = 0; x < n; ++x)
                if (m(a, b, x) == x)
                    iv[a * n + b] |= Mask{1} << x;
    auto convex = [&](Mask s) {
        for (std::size_t a = 0; a < n; ++a) {
            if (! (s >> a & 1U))
                continue;
            for (std::size_t b = a; b < n; ++b)
                if ((s >> b & 1U) && (iv[a * n + b] & ~s))
                    return false;
        }
        return true;
    };
    const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    std::vector<Mask> walls; // side not containing element 0
    for (Mask side0 = 1; side0 < full; side0 += 2)
        if (convex(side0) && convex(full & ~side0))
            walls.push_back(full & ~side0);

    std::vector<Point> emb(n, Point(walls.size()));
    for (std::size_t w = 0; w < walls.size(); ++w)
        for (std::size_t x = 0; x < n; ++x)
            if (walls[w] >> x & 1U)
                emb[x].set(w);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (emb[a] == emb[b])
                fail(Errc::EmbeddingNotFaithful, "halfspaces do not separate two elements", triple(a, b, b));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            for (std::size_t c = b; c < n; ++c)
                if (BitVec::majority(emb[a], emb[b], emb[c]) != emb[m(a, b, c)])
                    fail(Errc::EmbeddingNotFaithful, "halfspace embedding does not carry m to majority",
                         triple(a, b, c));

    auto raw = MedianAlgebra::validate(emb, walls.size());
    auto canon = canonicalize(raw);
    std::vector<std::size_t> position(n);
    for (std::size_t x = 0; x < n; ++x)
        position[x] = canon.relabel[raw.index_of(emb[x])];
    return {std::move(canon.algebra), std::move(position)};
}

} // namespace median
