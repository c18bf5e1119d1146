#include <median/algebra.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_set>

namespace median {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::EmptyCarrier: return "EmptyCarrier";
    case Errc::NotMedianClosed: return "NotMedianClosed";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::PointNotInCarrier: return "PointNotInCarrier";
    case Errc::NotConvex: return "NotConvex";
    case Errc::NotDisjoint: return "NotDisjoint";
    case Errc::NotHalfspace: return "NotHalfspace";
    case Errc::NotCovering: return "NotCovering";
    case Errc::EmptySide: return "EmptySide";
    case Errc::EmptySet: return "EmptySet";
    case Errc::GroundSizeTooLarge: return "GroundSizeTooLarge";
    case Errc::AxiomViolation: return "AxiomViolation";
    case Errc::EmbeddingNotFaithful: return "EmbeddingNotFaithful";
    case Errc::NotSurjective: return "NotSurjective";
    case Errc::NotMedianPreserving: return "NotMedianPreserving";
    case Errc::ShapeError: return "ShapeError";
    case Errc::BoundExceeded: return "BoundExceeded";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ResourceLimit: return "ResourceLimit";
    case Errc::NotLinked: return "NotLinked";
    case Errc::ParseError: return "ParseError";
    case Errc::UnsupportedSchema: return "UnsupportedSchema";
    case Errc::InternalInvariantViolation: return "InternalInvariantViolation";
    }
    return "Unknown";
}

namespace {

    // Reverse lexicographic scan over triples; returns the first triple whose
    // majority is missing.
    std::optional<std::array<std::size_t, 3>> find_open_triple(const std::vector<Point> & pts)
    {
        const std::size_t n = pts.size();
        for (std::size_t a = n; a-- > 0;)
            for (std::size_t b = a; b-- > 0;)
                for (std::size_t c = b; c-- > 0;) {
                    auto m = BitVec::majority(pts[a], pts[b], pts[c]);
                    if (! std::binary_search(pts.begin(), pts.end(), m))
                        return std::array{c, b, a};
                }
        return std::nullopt;
    }

    // Majority-closed Boolean relations are exactly those cut out by their binary
    // projections, and the network of binary projections is globally consistent.
    // So a backtrack-free walk over that network enumerates the closure; the set is
    // closed iff the walk produces nothing outside it.
    bool closed_by_binary_projections(const std::vector<Point> & pts, std::size_t dim)
    {
        const std::size_t n = pts.size();
        std::vector<BitVec> ones(dim, BitVec(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < dim; ++c)
                if (pts[i].test(c))
                    ones[c].set(i);
        std::vector<BitVec> zeros;
        zeros.reserve(dim);
        for (auto & o : ones)
            zeros.push_back(~o);

        // compat[2*c+v] = literals (2*d+w) compatible with x_c = v.
        std::vector<BitVec> compat(2 * dim, BitVec(2 * dim));
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                for (int v = 0; v < 2; ++v)
                    for (int w = 0; w < 2; ++w) {
                        const auto & sc = v ? ones[c] : zeros[c];
                        const auto & sd = w ? ones[d] : zeros[d];
                        if (sc.intersects(sd))
                            compat[2 * c + v].set(2 * d + w);
                    }

        std::size_t found = 0;
        bool escaped = false;
        Point current(dim);
        std::vector<BitVec> allowed(dim + 1, BitVec::filled(2 * dim));
        auto walk = [&](auto && self, std::size_t c) -> void {
            if (escaped || found > n)
                return;
            if (c == dim) {
                ++found;
                if (! std::binary_search(pts.begin(), pts.end(), current))
                    escaped = true;
                return;
            }
            for (int v = 0; v < 2; ++v) {
                if (! allowed[c].test(2 * c + v) || ! compat[2 * c + v].test(2 * c + v))
                    continue;
                current.set(c, v == 1);
                allowed[c + 1] = allowed[c];
                allowed[c + 1] &= compat[2 * c + v];
                self(self, c + 1);
            }
            current.reset(c);
        };
        walk(walk, 0);
        return ! escaped && found == n;
    }

    std::vector<std::string> strings_of(std::initializer_list<const Point *> ps)
    {
        std::vector<std::string> r;
        for (auto * p : ps)
            r.push_back(p->to_string());
        return r;
    }

} // namespace

MedianAlgebra MedianAlgebra::validate(std::vector<Point> points, std::size_t dim)
{
    if (points.empty())
        fail(Errc::EmptyCarrier, "the carrier must be nonempty");
    for (auto & p : points)
        if (p.size() != dim)
            fail(Errc::DimensionMismatch, "point length differs from dim", {p.to_string()});
    std::sort(points.begin(), points.end());
    if (auto it = std::adjacent_find(points.begin(), points.end()); it != points.end())
        fail(Errc::DuplicatePoint, "points must be distinct", {it->to_string()});

    bool closed = points.size() <= 64 ? ! find_open_triple(points).has_value()
                                      : closed_by_binary_projections(points, dim);
    if (! closed) {
        auto t = find_open_triple(points);
        ensure(t.has_value(), "closure tests disagree");
        auto & [a, b, c] = *t;
        auto m = BitVec::majority(points[a], points[b], points[c]);
        fail(Errc::NotMedianClosed, "majority of " + points[a].to_string() + "," + points[b].to_string() + "," +
                 points[c].to_string() + " is " + m.to_string() + ", which is not a member",
             strings_of({&points[a], &points[b], &points[c], &m}));
    }
    return MedianAlgebra(dim, std::move(points), false);
}

MedianAlgebra MedianAlgebra::validate(const std::vector<std::string> & points, std::size_t dim)
{
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (auto & s : points) {
        try {
            pts.push_back(Point::from_string(s));
        }
        catch (const std::invalid_argument & e) {
            fail(Errc::ParseError, e.what(), {s});
        }
    }
    return validate(std::move(pts), dim);
}

MedianAlgebra MedianAlgebra::assume_closed(std::vector<Point> points, std::size_t dim, bool canonical)
{
    ensure(! points.empty(), "assume_closed on an empty carrier");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return MedianAlgebra(dim, std::move(points), canonical);
}

MedianAlgebra MedianAlgebra::one_point() { return MedianAlgebra(0, {Point(0)}, true); }

std::optional<std::size_t> MedianAlgebra::find(const Point & p) const
{
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p)
        return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
}

std::size_t MedianAlgebra::index_of(const Point & p) const
{
    if (auto i = find(p))
        return *i;
    fail(Errc::PointNotInCarrier, "point is not a member of the carrier", {p.to_string()});
}

std::size_t MedianAlgebra::median(std::size_t a, std::size_t b, std::size_t c) const
{
    auto i = find(BitVec::majority(points_[a], points_[b], points_[c]));
    ensure(i.has_value(), "carrier is not median-closed");
    return *i;
}

Point MedianAlgebra::median(const Point & a, const Point & b, const Point & c) const
{
    return points_[median(index_of(a), index_of(b), index_of(c))];
}

Subset MedianAlgebra::column(std::size_t c) const
{
    Subset s(size());
    for (std::size_t i = 0; i < size(); ++i)
        if (points_[i].test(c))
            s.set(i);
    return s;
}

Halfspace make_halfspace(const Subset & side)
{
    if (side.size() > 0 && side.test(0))
        return {side, ~side};
    return {~side, side};
}

ConvexSet interval(const MedianAlgebra & m, std::size_t a, std::size_t b)
{
    const Point & pa = m.point(a);
    const Point agree = ~(pa ^ m.point(b));
    Subset s(m.size());
    for (std::size_t x = 0; x < m.size(); ++x)
        if (! ((m.point(x) ^ pa) & agree).any())
            s.set(x);
    return {s};
}

ConvexSet interval(const MedianAlgebra & m, const Point & a, const Point & b)
{
    return interval(m, m.index_of(a), m.index_of(b));
}

namespace {
    // Intersection of all coordinate halfspaces containing s.
    Subset trace_hull(const MedianAlgebra & m, const Subset & s)
    {
        Subset hull(m.size());
        if (s.none())
            return hull;
        Point all_and = Point::filled(m.dim());
        Point all_or(m.dim());
        s.for_each_set([&](std::size_t i) {
            all_and &= m.point(i);
            all_or |= m.point(i);
        });
        const Point fixed = ~(all_and ^ all_or);
        for (std::size_t x = 0; x < m.size(); ++x)
            if (! ((m.point(x) ^ all_and) & fixed).any())
                hull.set(x);
        return hull;
    }
} // namespace

bool is_convex(const MedianAlgebra & m, const Subset & s)
{
    if (s.size() != m.size())
        fail(Errc::ShapeError, "subset size differs from carrier size");
    return trace_hull(m, s) == s;
}

bool is_halfspace(const MedianAlgebra & m, const Subset & s) { return is_convex(m, s) && is_convex(m, ~s); }

ConvexSet convex_hull(const MedianAlgebra & m, const Subset & s)
{
    if (s.size() != m.size())
        fail(Errc::ShapeError, "subset size differs from carrier size");
    Subset hull = s;
    std::vector<std::size_t> queue = s.indices();
    std::vector<std::size_t> members = queue;
    while (! queue.empty()) {
        std::size_t x = queue.back();
        queue.pop_back();
        for (std::size_t k = 0; k < members.size(); ++k) {
            Subset fresh = interval(m, x, members[k]).members;
            fresh &= ~hull;
            if (fresh.none())
                continue;
            hull |= fresh;
            fresh.for_each_set([&](std::size_t i) {
                queue.push_back(i);
                members.push_back(i);
            });
        }
    }
    return {hull};
}

std::vector<Halfspace> halfspaces(const MedianAlgebra & m)
{
    std::vector<Subset> sides;
    std::unordered_set<Subset, BitVecHash> seen;
    for (std::size_t c = 0; c < m.dim(); ++c) {
        Subset col = m.column(c);
        if (col.none() || col.all())
            continue;
        if (col.test(0))
            col = ~col;
        if (seen.insert(col).second)
            sides.push_back(std::move(col));
    }
    std::sort(sides.begin(), sides.end());
    std::vector<Halfspace> out;
    out.reserve(sides.size());
    for (auto & s1 : sides)
        out.push_back({~s1, s1});
    return out;
}

std::vector<Subset> oriented_halfspaces(const MedianAlgebra & m)
{
    std::vector<Subset> out;
    for (auto & h : halfspaces(m)) {
        out.push_back(h.side0);
        out.push_back(h.side1);
    }
    return out;
}

Canonicalized canonicalize(const MedianAlgebra & m)
{
    const std::size_t n = m.size();
    std::vector<Subset> cols;
    for (auto & h : halfspaces(m))
        cols.push_back(h.side1);
    const std::size_t k = cols.size();

    // order[r] = input position currently sitting in row r.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Alternate row and column sorts.  Each sort can only decrease the row-major
    // reading of the matrix, so this reaches a doubly lexical fixed point.
    std::vector<Point> rows;
    for (std::size_t round = 0;; ++round) {
        ensure(round < 100000, "canonical ordering did not converge");
        rows.assign(n, Point(k));
        for (std::size_t c = 0; c < k; ++c)
            cols[c].for_each_set([&](std::size_t r) { rows[r].set(c); });

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return rows[a] < rows[b]; });
        bool moved = false;
        for (std::size_t r = 0; r < n; ++r)
            moved |= perm[r] != r;
        if (moved) {
            std::vector<std::size_t> next_order(n);
            std::vector<Point> next_rows(n);
            for (std::size_t r = 0; r < n; ++r) {
                next_order[r] = order[perm[r]];
                next_rows[r] = rows[perm[r]];
            }
            order = std::move(next_order);
            rows = std::move(next_rows);
            for (std::size_t c = 0; c < k; ++c) {
                Subset col(n);
                for (std::size_t r = 0; r < n; ++r)
                    if (rows[r].test(c))
                        col.set(r);
                cols[c] = std::move(col);
            }
        }
        if (std::is_sorted(cols.begin(), cols.end()))
            break;
        std::sort(cols.begin(), cols.end());
    }

    std::vector<std::size_t> relabel(n);
    for (std::size_t r = 0; r < n; ++r)
        relabel[order[r]] = r;
    return {MedianAlgebra::assume_closed(std::move(rows), k, true), std::move(relabel)};
}

Quotient quotient_by_halfspaces(const MedianAlgebra & m, const std::vector<Subset> & family)
{
    for (auto & s : family) {
        if (s.size() != m.size())
            fail(Errc::ShapeError, "halfspace size differs from carrier size");
        if (! is_halfspace(m, s))
            fail(Errc::NotHalfspace, "family member is not a halfspace", {render(m, s)});
    }
    std::vector<Point> sig(m.size(), Point(family.size()));
    for (std::size_t j = 0; j < family.size(); ++j)
        family[j].for_each_set([&](std::size_t x) { sig[x].set(j); });

    auto raw = MedianAlgebra::assume_closed(sig, family.size());
    auto canon = canonicalize(raw);
    std::vector<std::size_t> map(m.size());
    for (std::size_t x = 0; x < m.size(); ++x)
        map[x] = canon.relabel[raw.index_of(sig[x])];

    // The class median is well defined for halfspace families; confirm it.
    const auto & q = canon.algebra;
    if (m.size() <= 32) {
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = a; b < m.size(); ++b)
                for (std::size_t c = b; c < m.size(); ++c)
                    if (map[m.median(a, b, c)] != q.median(map[a], map[b], map[c]))
                        fail(Errc::InternalInvariantViolation, "quotient median is not well defined");
    }
    return {canon.algebra, std::move(map)};
}

Quotient quotient_by_halfspaces(const MedianAlgebra & m, const std::vector<Halfspace> & family)
{
    std::vector<Subset> sides;
    sides.reserve(family.size());
    for (auto & h : family) {
        if ((h.side0 | h.side1) != m.full_set() || h.side0.intersects(h.side1))
            fail(Errc::NotHalfspace, "halfspace sides must partition the carrier");
        sides.push_back(h.side1);
    }
    return quotient_by_halfspaces(m, sides);
}

Subset separate_convex(const MedianAlgebra & m, const Subset & a, const Subset & b)
{
    if (a.size() != m.size() || b.size() != m.size())
        fail(Errc::ShapeError, "subset size differs from carrier size");
    if (a.none() || b.none())
        fail(Errc::EmptySet, "both sets must be nonempty");
    if (! is_convex(m, a))
        fail(Errc::NotConvex, "first set is not convex", {render(m, a)});
    if (! is_convex(m, b))
        fail(Errc::NotConvex, "second set is not convex", {render(m, b)});
    if (a.intersects(b))
        fail(Errc::NotDisjoint, "sets intersect", {render(m, a & b)});
    for (auto & h : oriented_halfspaces(m))
        if (b.is_subset_of(h) && ! h.intersects(a))
            return h;
    fail(Errc::InternalInvariantViolation, "disjoint convex sets without a separating halfspace");
}

std::vector<std::pair<std::size_t, std::size_t>> median_graph_edges(const MedianAlgebra & m)
{
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (interval(m, i, j).members.count() == 2)
                edges.emplace_back(i, j);
    return edges;
}

std::string render(const MedianAlgebra & m, const Subset & s)
{
    std::string out = "{";
    bool first = true;
    s.for_each_set([&](std::size_t i) {
        if (! first)
            out += ",";
        first = false;
        out += m.point(i).to_string();
        if (m.dim() == 0)
            out += "ε";
    });
    return out + "}";
}

} // namespace median
