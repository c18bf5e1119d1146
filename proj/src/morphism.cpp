#include <median/morphism.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_set>

namespace median {

namespace {
    constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();

    std::vector<std::string> triple_witness(const MedianAlgebra & s, std::size_t a, std::size_t b, std::size_t c)
    {
        return {s.point(a).to_string(), s.point(b).to_string(), s.point(c).to_string()};
    }

    void check_shape(const MedianAlgebra & source, const MedianAlgebra & target, std::span<const std::uint32_t> map)
    {
        if (map.size() != source.size())
            fail(Errc::ShapeError, "map length " + std::to_string(map.size()) + " differs from source size " +
                                       std::to_string(source.size()));
        for (auto v : map)
            if (v >= target.size())
                fail(Errc::ShapeError, "map value out of range", {std::to_string(v)});
    }

    std::optional<std::size_t> missed_target(std::size_t target_size, std::span<const std::uint32_t> map)
    {
        std::vector<bool> hit(target_size, false);
        for (auto v : map)
            hit[v] = true;
        for (std::size_t y = 0; y < target_size; ++y)
            if (! hit[y])
                return y;
        return std::nullopt;
    }

    std::optional<std::tuple<std::size_t, std::size_t, std::size_t>>
    bad_triple(const MedianAlgebra & s, const MedianAlgebra & t, std::span<const std::uint32_t> map)
    {
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a; b < s.size(); ++b)
                for (std::size_t c = b; c < s.size(); ++c)
                    if (map[s.median(a, b, c)] != t.median(map[a], map[b], map[c]))
                        return std::tuple{a, b, c};
        return std::nullopt;
    }

    Subset coordinate_preimage(const MedianAlgebra & s, const MedianAlgebra & t, std::span<const std::uint32_t> map,
                               std::size_t j)
    {
        Subset pre(s.size());
        for (std::size_t x = 0; x < s.size(); ++x)
            if (t.point(map[x]).test(j))
                pre.set(x);
        return pre;
    }

    // A triple (a,b,x) with x in [a,b] on which the map fails, derived from a
    // coordinate whose preimage is not a halfspace.
    std::vector<std::string> witness_from_coordinates(const MedianAlgebra & s, const MedianAlgebra & t,
                                                      std::span<const std::uint32_t> map)
    {
        for (std::size_t j = 0; j < t.dim(); ++j) {
            Subset pre = coordinate_preimage(s, t, map, j);
            for (const Subset & side : {pre, ~pre}) {
                if (is_convex(s, side))
                    continue;
                auto members = side.indices();
                for (std::size_t i = 0; i < members.size(); ++i)
                    for (std::size_t k = i + 1; k < members.size(); ++k) {
                        Subset stray = interval(s, members[i], members[k]).members & ~side;
                        if (stray.any())
                            return triple_witness(s, members[i], members[k], stray.find_first());
                    }
            }
        }
        return {};
    }

    // Distance-preserving bijections between two canonical algebras, in
    // lexicographic order of the map, stopping after `limit`.
    std::vector<Map> isometries(const MedianAlgebra & a, const MedianAlgebra & b, std::size_t limit)
    {
        std::vector<Map> out;
        const std::size_t n = a.size();
        if (n != b.size() || a.dim() != b.dim())
            return out;
        auto degrees = [](const MedianAlgebra & m) {
            std::vector<std::size_t> deg(m.size(), 0);
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = 0; j < m.size(); ++j)
                    if (m.point(i).distance(m.point(j)) == 1)
                        ++deg[i];
            return deg;
        };
        const auto da = degrees(a);
        const auto db = degrees(b);
        {
            auto sa = da, sb = db;
            std::sort(sa.begin(), sa.end());
            std::sort(sb.begin(), sb.end());
            if (sa != sb)
                return out;
        }
        // Visit a in breadth-first order so each new vertex has an assigned neighbour.
        std::vector<std::size_t> order{0};
        std::vector<bool> seen(n, false);
        seen[0] = true;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (std::size_t v = 0; v < n; ++v)
                if (! seen[v] && a.point(order[h]).distance(a.point(v)) == 1) {
                    seen[v] = true;
                    order.push_back(v);
                }
        ensure(order.size() == n, "median graph is disconnected");

        Map phi(n, unset);
        std::vector<bool> used(n, false);
        auto extend = [&](auto && self, std::size_t depth) -> void {
            if (out.size() >= limit)
                return;
            if (depth == n) {
                out.push_back(phi);
                return;
            }
            const std::size_t v = order[depth];
            for (std::size_t w = 0; w < n; ++w) {
                if (used[w] || da[v] != db[w])
                    continue;
                bool ok = true;
                for (std::size_t d = 0; d < depth && ok; ++d) {
                    const std::size_t u = order[d];
                    ok = a.point(u).distance(a.point(v)) == b.point(phi[u]).distance(b.point(w));
                }
                if (! ok)
                    continue;
                phi[v] = static_cast<std::uint32_t>(w);
                used[w] = true;
                self(self, depth + 1);
                used[w] = false;
                phi[v] = unset;
            }
        };
        extend(extend, 0);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::size_t> inverse(const std::vector<std::size_t> & perm)
    {
        std::vector<std::size_t> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            inv[perm[i]] = i;
        return inv;
    }
} // namespace

Epimorphism Epimorphism::identity(const AlgebraPtr & m)
{
    Map map(m->size());
    std::iota(map.begin(), map.end(), 0U);
    return {m, m, std::move(map)};
}

bool same_algebra(const AlgebraPtr & a, const AlgebraPtr & b)
{
    return a == b || (a->dim() == b->dim() && a->points() == b->points());
}

bool is_median_preserving(const MedianAlgebra & source, const MedianAlgebra & target, std::span<const std::uint32_t> map)
{
    check_shape(source, target, map);
    return ! bad_triple(source, target, map).has_value();
}

bool is_convexity_preserving(const MedianAlgebra & source, const MedianAlgebra & target,
                             std::span<const std::uint32_t> map)
{
    check_shape(source, target, map);
    for (std::size_t a = 0; a < source.size(); ++a)
        for (std::size_t b = a; b < source.size(); ++b) {
            const Subset image_interval = interval(target, map[a], map[b]).members;
            bool inside = true;
            interval(source, a, b).members.for_each_set([&](std::size_t x) { inside = inside && image_interval.test(map[x]); });
            if (! inside)
                return false;
        }
    return true;
}

bool pulls_back_halfspaces(const MedianAlgebra & source, const MedianAlgebra & target,
                           std::span<const std::uint32_t> map)
{
    check_shape(source, target, map);
    std::unordered_set<Subset, BitVecHash> traces;
    traces.insert(source.empty_set());
    traces.insert(source.full_set());
    for (std::size_t c = 0; c < source.dim(); ++c) {
        Subset col = source.column(c);
        traces.insert(~col);
        traces.insert(std::move(col));
    }
    for (std::size_t j = 0; j < target.dim(); ++j)
        if (! traces.contains(coordinate_preimage(source, target, map, j)))
            return false;
    return true;
}

Epimorphism check_epimorphism(AlgebraPtr source, AlgebraPtr target, Map map, const Limits & limits)
{
    check_shape(*source, *target, map);
    if (auto y = missed_target(target->size(), map))
        fail(Errc::NotSurjective, "target point has no preimage", {target->point(*y).to_string()});

    if (source->size() <= limits.check_points) {
        auto bad = bad_triple(*source, *target, map);
        const bool cp = is_convexity_preserving(*source, *target, map);
        ensure(cp == ! bad.has_value(), "median preservation and (cp) disagree");
        if (bad) {
            auto [a, b, c] = *bad;
            fail(Errc::NotMedianPreserving, "map does not commute with the median",
                 triple_witness(*source, a, b, c));
        }
    }
    else if (! pulls_back_halfspaces(*source, *target, map)) {
        fail(Errc::NotMedianPreserving, "a target coordinate pulls back to a non-halfspace",
             witness_from_coordinates(*source, *target, map));
    }
    return {std::move(source), std::move(target), std::move(map)};
}

std::vector<Epimorphism> enumerate_epis(const AlgebraPtr & m, const AlgebraPtr & n, const Limits & limits)
{
    if (m->size() > limits.enumeration_points || n->size() > limits.enumeration_points)
        fail(Errc::BoundExceeded, "enumeration is limited to " + std::to_string(limits.enumeration_points) + " points");
    std::vector<Epimorphism> out;
    const std::size_t sm = m->size();
    const std::size_t sn = n->size();
    if (sn > sm)
        return out;

    // Each constraint map[med] = m(map[a],map[b],map[c]) is checked as soon as the
    // last of its four positions is assigned.
    struct Constraint {
        std::size_t a, b, c, med;
    };
    std::vector<std::vector<Constraint>> due(sm);
    for (std::size_t a = 0; a < sm; ++a)
        for (std::size_t b = a; b < sm; ++b)
            for (std::size_t c = b; c < sm; ++c) {
                if (a == b || b == c)
                    continue; // absorption holds in every algebra
                const std::size_t med = m->median(a, b, c);
                due[std::max(c, med)].push_back({a, b, c, med});
            }
    std::vector<std::uint32_t> med_n(sn * sn * sn);
    for (std::size_t a = 0; a < sn; ++a)
        for (std::size_t b = 0; b < sn; ++b)
            for (std::size_t c = 0; c < sn; ++c)
                med_n[(a * sn + b) * sn + c] = static_cast<std::uint32_t>(n->median(a, b, c));

    Map map(sm, unset);
    std::vector<std::size_t> hits(sn, 0);
    std::size_t covered = 0;
    auto extend = [&](auto && self, std::size_t i) -> void {
        if (i == sm) {
            out.push_back({m, n, map});
            return;
        }
        for (std::uint32_t v = 0; v < sn; ++v) {
            const std::size_t fresh = hits[v] == 0 ? 1 : 0;
            if (sn - covered - fresh > sm - i - 1)
                continue;
            map[i] = v;
            bool ok = true;
            for (auto & k : due[i]) {
                if (map[k.med] != med_n[(map[k.a] * sn + map[k.b]) * sn + map[k.c]]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                ++hits[v];
                covered += fresh;
                self(self, i + 1);
                covered -= fresh;
                --hits[v];
            }
            map[i] = unset;
        }
    };
    extend(extend, 0);
    return out;
}

Epimorphism compose(const Epimorphism & g, const Epimorphism & f)
{
    if (! same_algebra(f.target, g.source))
        fail(Errc::TypeMismatch, "target of the inner map differs from source of the outer map");
    Map map(f.map.size());
    for (std::size_t x = 0; x < map.size(); ++x)
        map[x] = g.map[f.map[x]];
    return {f.source, g.target, std::move(map)};
}

Pullback pullback(const Epimorphism & f, const Epimorphism & g)
{
    if (! same_algebra(f.target, g.target))
        fail(Errc::TypeMismatch, "pullback needs a common target");
    const MedianAlgebra & x = *f.source;
    const MedianAlgebra & y = *g.source;
    std::vector<std::vector<std::size_t>> over(f.target->size());
    for (std::size_t j = 0; j < y.size(); ++j)
        over[g.map[j]].push_back(j);

    std::vector<Point> pts;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j : over[f.map[i]]) {
            pts.push_back(x.point(i).concat(y.point(j)));
            pairs.emplace_back(i, j);
        }
    auto raw = MedianAlgebra::assume_closed(pts, x.dim() + y.dim());
    auto canon = canonicalize(raw);
    auto apex = share(std::move(canon.algebra));

    Map left(apex->size(), unset), right(apex->size(), unset);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const std::size_t w = canon.relabel[raw.index_of(pts[k])];
        left[w] = static_cast<std::uint32_t>(pairs[k].first);
        right[w] = static_cast<std::uint32_t>(pairs[k].second);
    }
    for (std::size_t w = 0; w < apex->size(); ++w)
        ensure(f.map[left[w]] == g.map[right[w]], "pullback square does not commute");
    ensure(! missed_target(x.size(), left) && ! missed_target(y.size(), right), "pullback projection not surjective");
    ensure(pulls_back_halfspaces(*apex, x, left) && pulls_back_halfspaces(*apex, y, right),
           "pullback projection not median-preserving");
    return {apex, {apex, f.source, std::move(left)}, {apex, g.source, std::move(right)}};
}

std::optional<Epimorphism> find_isomorphism(const AlgebraPtr & m, const AlgebraPtr & n)
{
    if (m->size() != n->size())
        return std::nullopt;
    auto cm = canonicalize(*m);
    auto cn = canonicalize(*n);
    Map phi;
    if (cm.algebra.points() == cn.algebra.points() && cm.algebra.dim() == cn.algebra.dim()) {
        phi.resize(m->size());
        std::iota(phi.begin(), phi.end(), 0U);
    }
    else {
        auto found = isometries(cm.algebra, cn.algebra, 1);
        if (found.empty())
            return std::nullopt;
        phi = std::move(found.front());
    }
    const auto back = inverse(cn.relabel);
    Map map(m->size());
    for (std::size_t x = 0; x < m->size(); ++x)
        map[x] = static_cast<std::uint32_t>(back[phi[cm.relabel[x]]]);
    ensure(pulls_back_halfspaces(*m, *n, map), "isomorphism is not median-preserving");
    return Epimorphism{m, n, std::move(map)};
}

std::vector<Epimorphism> automorphisms(const AlgebraPtr & m)
{
    auto cm = canonicalize(*m);
    const auto back = inverse(cm.relabel);
    std::vector<Epimorphism> out;
    for (auto & phi : isometries(cm.algebra, cm.algebra, std::numeric_limits<std::size_t>::max())) {
        Map map(m->size());
        for (std::size_t x = 0; x < m->size(); ++x)
            map[x] = static_cast<std::uint32_t>(back[phi[cm.relabel[x]]]);
        out.push_back({m, m, std::move(map)});
    }
    std::sort(out.begin(), out.end(), [](auto & a, auto & b) { return a.map < b.map; });
    return out;
}

std::optional<Epimorphism> factor_epimorphism(const Epimorphism & f, const Epimorphism & h)
{
    if (! same_algebra(f.source, h.source))
        fail(Errc::TypeMismatch, "factorization needs a common source");
    Map induced(h.target->size(), unset);
    for (std::size_t a = 0; a < f.map.size(); ++a) {
        auto & slot = induced[h.map[a]];
        if (slot == unset)
            slot = f.map[a];
        else if (slot != f.map[a])
            return std::nullopt;
    }
    ensure(std::find(induced.begin(), induced.end(), unset) == induced.end(), "h is not surjective");
    if (! pulls_back_halfspaces(*h.target, *f.target, induced))
        return std::nullopt;
    return Epimorphism{h.target, f.target, std::move(induced)};
}

std::vector<Epimorphism> search_lifts(const AlgebraPtr & source, const AlgebraPtr & target,
                                      const std::vector<Subset> & allowed, std::size_t limit)
{
    const std::size_t n = source->size();
    if (allowed.size() != n)
        fail(Errc::ShapeError, "one allowed set per source point is required");
    std::vector<Epimorphism> out;
    if (limit == 0 || target->size() > n)
        return out;

    auto canon = canonicalize(*target);
    const MedianAlgebra & t = canon.algebra;
    const std::size_t ts = t.size();
    const auto back = inverse(canon.relabel);

    std::vector<Subset> state(n, Subset(ts));
    for (std::size_t x = 0; x < n; ++x) {
        if (allowed[x].size() != target->size())
            fail(Errc::ShapeError, "allowed set size differs from target size");
        allowed[x].for_each_set([&](std::size_t y) { state[x].set(canon.relabel[y]); });
        if (state[x].none())
            return out;
    }

    const std::size_t k = t.dim();
    std::vector<std::array<Subset, 2>> coord(k);
    for (std::size_t j = 0; j < k; ++j) {
        coord[j][1] = t.column(j);
        coord[j][0] = ~coord[j][1];
    }
    const auto cands = oriented_halfspaces(*source);
    std::vector<bool> wall_used(cands.size() / 2, false);

    auto covers = [&](const std::vector<Subset> & s) {
        Subset u(ts);
        for (auto & v : s)
            u |= v;
        return u.all();
    };
    if (! covers(state))
        return out;

    auto emit = [&](const std::vector<Subset> & s) {
        Map map(n);
        for (std::size_t x = 0; x < n; ++x) {
            ensure(s[x].count() == 1, "lift leaf is not a function");
            map[x] = static_cast<std::uint32_t>(back[s[x].find_first()]);
        }
        ensure(pulls_back_halfspaces(*source, *target, map), "lift is not median-preserving");
        out.push_back({source, target, std::move(map)});
    };

    auto descend = [&](auto && self, std::size_t j, const std::vector<Subset> & s) -> void {
        if (out.size() >= limit)
            return;
        if (j == k) {
            emit(s);
            return;
        }
        std::vector<Subset> next(n);
        for (std::size_t c = 0; c < cands.size() && out.size() < limit; ++c) {
            if (wall_used[c / 2])
                continue;
            bool ok = true;
            for (std::size_t x = 0; x < n && ok; ++x) {
                next[x] = s[x] & coord[j][cands[c].test(x) ? 1 : 0];
                ok = next[x].any();
            }
            if (! ok || ! covers(next))
                continue;
            wall_used[c / 2] = true;
            self(self, j + 1, next);
            wall_used[c / 2] = false;
        }
    };
    descend(descend, 0, state);
    return out;
}

std::optional<Epimorphism> find_lift(const AlgebraPtr & source, std::span<const std::uint32_t> down,
                                     const Epimorphism & f)
{
    if (down.size() != source->size())
        fail(Errc::ShapeError, "down map length differs from source size");
    std::vector<Subset> fiber(f.target->size(), Subset(f.source->size()));
    for (std::size_t y = 0; y < f.map.size(); ++y)
        fiber[f.map[y]].set(y);
    std::vector<Subset> allowed;
    allowed.reserve(down.size());
    for (auto d : down) {
        if (d >= fiber.size())
            fail(Errc::ShapeError, "down map value out of range");
        allowed.push_back(fiber[d]);
    }
    auto found = search_lifts(source, f.source, allowed, 1);
    if (found.empty())
        return std::nullopt;
    return std::move(found.front());
}

std::vector<Epimorphism> epis_via_halfspaces(const AlgebraPtr & source, const AlgebraPtr & target)
{
    std::vector<Subset> allowed(source->size(), target->full_set());
    auto out = search_lifts(source, target, allowed, std::numeric_limits<std::size_t>::max());
    std::sort(out.begin(), out.end(), [](auto & a, auto & b) { return a.map < b.map; });
    return out;
}

} // namespace median
