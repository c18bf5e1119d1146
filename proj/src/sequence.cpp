#include <median/sequence.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace median {

std::string to_string(EnumerationOrder order)
{
    return order == EnumerationOrder::canonical ? "canonical" : "reversed";
}

EnumerationOrder parse_order(const std::string & name)
{
    if (name == "canonical")
        return EnumerationOrder::canonical;
    if (name == "reversed")
        return EnumerationOrder::reversed;
    fail(Errc::ParseError, "unknown enumeration order", {name});
}

std::size_t default_stage_cap()
{
    if (const char * env = std::getenv("MEDIAN_FRAISSE_CAP")) {
        try {
            std::size_t used = 0;
            const std::string text(env);
            const unsigned long long v = std::stoull(text, &used);
            if (used == text.size() && v > 0)
                return static_cast<std::size_t>(v);
        }
        catch (const std::exception &) {
        }
        fail(Errc::ParseError, "MEDIAN_FRAISSE_CAP must be a positive integer", {env});
    }
    return 4096;
}

namespace {
    Map compose_maps(const Map & outer, const Map & inner)
    {
        Map r(inner.size());
        for (std::size_t x = 0; x < inner.size(); ++x)
            r[x] = outer[inner[x]];
        return r;
    }

    Subset preimage(const Map & map, const Subset & s)
    {
        Subset r(map.size());
        for (std::size_t x = 0; x < map.size(); ++x)
            if (s.test(map[x]))
                r.set(x);
        return r;
    }

    void check_stage_index(const InverseSequence & seq, std::size_t alpha)
    {
        if (alpha >= seq.length())
            fail(Errc::IndexOutOfRange, "stage " + std::to_string(alpha) + " does not exist");
    }

    void check_halfspace_of(const MedianAlgebra & m, const Subset & s)
    {
        if (s.size() != m.size())
            fail(Errc::ShapeError, "halfspace size differs from stage size");
        if (! is_halfspace(m, s))
            fail(Errc::NotHalfspace, "set is not a halfspace of the stage", {render(m, s)});
    }

    std::string exhausted(std::size_t alpha, std::size_t length)
    {
        return "no witness in stages " + std::to_string(alpha) + ".." + std::to_string(length - 1) +
               " of the built sequence";
    }
} // namespace

std::vector<CertificateEntry> saturation_tuples(const AlgebraPtr & k, std::size_t size_bound, EnumerationOrder order)
{
    const Limits limits;
    if (size_bound == 0 || size_bound > limits.enumeration_points)
        fail(Errc::BoundExceeded, "size bound must lie in 1.." + std::to_string(limits.enumeration_points));
    const auto catalog = small_median_algebras(size_bound);
    std::vector<CertificateEntry> out;
    for (const auto & m : catalog) {
        if (m->size() > k->size())
            continue;
        const auto ps = epis_via_halfspaces(k, m);
        if (ps.empty())
            continue;
        const auto aut_m = automorphisms(m);
        for (const auto & n : catalog) {
            // A one-point N is solved by the constant map from any L.
            if (n->size() < m->size() || n->size() == 1)
                continue;
            const auto fs = enumerate_epis(n, m);
            const auto aut_n = automorphisms(n);
            for (const auto & p : ps)
                for (const auto & f : fs) {
                    // Keep (p,f) only if it is least in its orbit under
                    // (α,β) ↦ (α∘p, α∘f∘β).
                    bool least = true;
                    for (const auto & a : aut_m) {
                        const Map ap = compose_maps(a.map, p.map);
                        if (ap > p.map)
                            continue;
                        for (const auto & b : aut_n) {
                            const Map afb = compose_maps(a.map, compose_maps(f.map, b.map));
                            if (std::tie(ap, afb) < std::tie(p.map, f.map)) {
                                least = false;
                                break;
                            }
                        }
                        if (! least)
                            break;
                    }
                    if (least)
                        out.push_back({m, n, p.map, f.map, 0, {}});
                }
        }
    }
    if (order == EnumerationOrder::reversed)
        std::reverse(out.begin(), out.end());
    return out;
}

SaturationResult saturation_step(const AlgebraPtr & k, const SaturationConfig & config)
{
    auto tuples = saturation_tuples(k, config.size_bound, config.order);

    std::vector<AlgebraPtr> tower{k};
    std::vector<Map> bonds; // bonds[i] : tower[i+1] -> tower[i]
    Map h(k->size());
    for (std::size_t x = 0; x < h.size(); ++x)
        h[x] = static_cast<std::uint32_t>(x);

    for (auto & t : tuples) {
        const AlgebraPtr & top = tower.back();
        const Map down = compose_maps(t.p, h);
        const Epimorphism f{t.n, t.m, t.f};
        if (auto q = find_lift(top, down, f)) {
            t.resolved_at = tower.size() - 1;
            t.q = std::move(q->map);
            continue;
        }
        auto pb = pullback(Epimorphism{top, t.m, down}, f);
        if (pb.apex->size() > config.cap)
            fail(Errc::ResourceLimit, "saturation tower stage has " + std::to_string(pb.apex->size()) +
                                          " points, above the cap " + std::to_string(config.cap),
                 {std::to_string(pb.apex->size())});
        h = compose_maps(h, pb.to_left.map);
        bonds.push_back(pb.to_left.map);
        tower.push_back(pb.apex);
        t.resolved_at = tower.size() - 1;
        t.q = pb.to_right.map;
    }

    // to_level[r] : top of the tower -> tower[r]
    const std::size_t top = tower.size() - 1;
    std::vector<Map> to_level(tower.size());
    to_level[top].resize(tower[top]->size());
    for (std::size_t x = 0; x < to_level[top].size(); ++x)
        to_level[top][x] = static_cast<std::uint32_t>(x);
    for (std::size_t r = top; r-- > 0;)
        to_level[r] = compose_maps(bonds[r], to_level[r + 1]);

    SaturationResult result{tower.back(), {tower.back(), k, h}, {}, {}};
    for (auto & a : tower)
        result.tower_sizes.push_back(a->size());
    for (auto & t : tuples) {
        t.q = compose_maps(t.q, to_level[t.resolved_at]);
        ensure(compose_maps(t.p, h) == compose_maps(t.f, t.q), "certificate lift does not commute");
        ensure(pulls_back_halfspaces(*result.algebra, *t.n, t.q), "certificate lift is not median-preserving");
    }
    result.certificate = std::move(tuples);
    return result;
}

void validate_sequence(const InverseSequence & seq)
{
    if (seq.stages.empty())
        fail(Errc::ShapeError, "sequence has no stages");
    if (seq.bonds.size() + 1 != seq.stages.size())
        fail(Errc::ShapeError, "a sequence needs exactly one bond per consecutive pair of stages");
    for (std::size_t i = 0; i < seq.bonds.size(); ++i) {
        const auto & b = seq.bonds[i];
        if (! same_algebra(b.source, seq.stages[i + 1]) || ! same_algebra(b.target, seq.stages[i]))
            fail(Errc::TypeMismatch, "bond " + std::to_string(i) + " does not connect stages " + std::to_string(i + 1) +
                                         " and " + std::to_string(i));
        check_epimorphism(b.source, b.target, b.map);
    }
}

InverseSequence build_fraisse(std::size_t levels, const SaturationConfig & config)
{
    if (levels == 0)
        fail(Errc::ShapeError, "a sequence needs at least one level");
    InverseSequence seq;
    seq.stages.push_back(share(MedianAlgebra::one_point()));
    seq.provenance.push_back({"initial", config.size_bound, config.order, {1}, {}});
    for (std::size_t i = 1; i < levels; ++i) {
        SaturationResult step;
        try {
            step = saturation_step(seq.stages.back(), config);
        }
        catch (const Error & e) {
            if (e.code() != Errc::ResourceLimit)
                throw;
            auto witness = e.witness();
            witness.insert(witness.begin(), std::to_string(i));
            fail(Errc::ResourceLimit, "building stage " + std::to_string(i) + ": " + e.detail(), witness);
        }
        seq.stages.push_back(step.algebra);
        seq.bonds.push_back(step.h);
        seq.provenance.push_back(
            {"saturation", config.size_bound, config.order, std::move(step.tower_sizes), std::move(step.certificate)});
    }
    return seq;
}

Epimorphism composite_projection(const InverseSequence & seq, std::size_t alpha, std::size_t beta)
{
    if (alpha > beta || beta >= seq.length())
        fail(Errc::IndexOutOfRange, "need alpha <= beta < length",
             {std::to_string(alpha), std::to_string(beta), std::to_string(seq.length())});
    Epimorphism p = Epimorphism::identity(seq.stages[beta]);
    for (std::size_t i = beta; i > alpha; --i)
        p = compose(seq.bonds[i - 1], p);
    return p;
}

ExtensionResult check_extension_property(const InverseSequence & seq, const Epimorphism & f, std::size_t alpha)
{
    check_stage_index(seq, alpha);
    if (! same_algebra(f.target, seq.stages[alpha]))
        fail(Errc::TypeMismatch, "f must map onto stage " + std::to_string(alpha));
    for (std::size_t beta = alpha + 1; beta < seq.length(); ++beta) {
        const auto p = composite_projection(seq, alpha, beta);
        if (auto g = find_lift(seq.stages[beta], p.map, f)) {
            ensure(compose(f, *g).map == p.map, "extension witness does not commute");
            return {beta, std::move(g), "witness at stage " + std::to_string(beta)};
        }
    }
    return {std::nullopt, std::nullopt, alpha + 1 < seq.length() ? exhausted(alpha + 1, seq.length())
                                                                 : "no stage after " + std::to_string(alpha)};
}

HalfspaceResult check_m1(const InverseSequence & seq, std::size_t alpha, const std::vector<Subset> & fa,
                         const std::vector<Subset> & fb)
{
    check_stage_index(seq, alpha);
    const auto & base = *seq.stages[alpha];
    for (auto & s : fa)
        check_halfspace_of(base, s);
    for (auto & s : fb)
        check_halfspace_of(base, s);
    for (auto & a : fa)
        for (auto & b : fb)
            if (a.intersects(b))
                fail(Errc::NotDisjoint, "a member of the first family meets a member of the second",
                     {render(base, a), render(base, b)});

    for (std::size_t beta = alpha; beta < seq.length(); ++beta) {
        const auto & stage = *seq.stages[beta];
        const auto p = composite_projection(seq, alpha, beta);
        Subset inside(stage.size()), outside(stage.size());
        for (auto & a : fa)
            inside |= preimage(p.map, a);
        for (auto & b : fb)
            outside |= preimage(p.map, b);
        auto candidates = oriented_halfspaces(stage);
        candidates.push_back(stage.empty_set());
        candidates.push_back(stage.full_set());
        for (auto & c : candidates)
            if (inside.is_subset_of(c) && ! c.intersects(outside))
                return {beta, {c}, "witness at stage " + std::to_string(beta)};
    }
    return {std::nullopt, {}, exhausted(alpha, seq.length())};
}

HalfspaceResult check_m2(const InverseSequence & seq, std::size_t alpha, const std::vector<Subset> & fa)
{
    check_stage_index(seq, alpha);
    const auto & base = *seq.stages[alpha];
    for (auto & s : fa)
        check_halfspace_of(base, s);
    for (std::size_t i = 0; i < fa.size(); ++i)
        for (std::size_t j = i; j < fa.size(); ++j)
            if (! fa[i].intersects(fa[j]))
                fail(Errc::NotLinked, "family members do not intersect", {render(base, fa[i]), render(base, fa[j])});

    for (std::size_t beta = alpha; beta < seq.length(); ++beta) {
        const auto & stage = *seq.stages[beta];
        const auto p = composite_projection(seq, alpha, beta);
        Subset common = stage.full_set();
        for (auto & a : fa)
            common &= preimage(p.map, a);
        auto candidates = oriented_halfspaces(stage);
        candidates.push_back(stage.full_set());
        for (auto & c : candidates)
            if (c.any() && c.is_subset_of(common))
                return {beta, {c}, "witness at stage " + std::to_string(beta)};
    }
    return {std::nullopt, {}, exhausted(alpha, seq.length())};
}

HalfspaceResult check_m3(const InverseSequence & seq, std::size_t alpha, const Subset & a)
{
    check_stage_index(seq, alpha);
    const auto & base = *seq.stages[alpha];
    check_halfspace_of(base, a);
    if (a.none() || a.all())
        fail(Errc::NotHalfspace, "M3 needs a proper halfspace", {render(base, a)});

    for (std::size_t beta = alpha; beta < seq.length(); ++beta) {
        const auto & stage = *seq.stages[beta];
        const Subset pulled = preimage(composite_projection(seq, alpha, beta).map, a);
        std::vector<Subset> inside;
        for (auto & c : oriented_halfspaces(stage))
            if (c.is_subset_of(pulled))
                inside.push_back(c);
        for (std::size_t i = 0; i < inside.size(); ++i)
            for (std::size_t j = i + 1; j < inside.size(); ++j)
                if (! inside[i].intersects(inside[j]))
                    return {beta, {inside[i], inside[j]}, "witness at stage " + std::to_string(beta)};
    }
    return {std::nullopt, {}, exhausted(alpha, seq.length())};
}

Interleaving back_and_forth(const InverseSequence & seq_p, const InverseSequence & seq_q)
{
    if (seq_p.stages.empty() || seq_q.stages.empty())
        fail(Errc::ShapeError, "both sequences need a first stage");
    if (seq_p.stages[0]->size() != 1 || seq_q.stages[0]->size() != 1)
        fail(Errc::ShapeError, "both sequences must start at the one-point algebra");

    Interleaving out;
    out.alphas.push_back(0);
    out.betas.push_back(0);
    out.back.push_back({seq_q.stages[0], seq_p.stages[0], {0}});

    while (true) {
        const std::size_t alpha = out.alphas.back();
        const std::size_t beta = out.betas.back();
        auto forth = check_extension_property(seq_p, out.back.back(), alpha);
        if (! forth.found()) {
            out.stuck_side = "P";
            out.stuck_stage = alpha;
            break;
        }
        ensure(compose(out.back.back(), *forth.g).map == composite_projection(seq_p, alpha, *forth.beta).map,
               "forth triangle does not commute");
        out.alphas.push_back(*forth.beta);
        out.forth.push_back(*forth.g);

        auto back = check_extension_property(seq_q, out.forth.back(), beta);
        if (! back.found()) {
            out.stuck_side = "Q";
            out.stuck_stage = beta;
            break;
        }
        ensure(compose(out.forth.back(), *back.g).map == composite_projection(seq_q, beta, *back.beta).map,
               "back triangle does not commute");
        out.betas.push_back(*back.beta);
        out.back.push_back(*back.g);
        ++out.depth;
    }
    out.complete = out.alphas.back() + 1 == seq_p.length() && out.betas.back() + 1 == seq_q.length() &&
                   out.alphas.size() == out.betas.size();
    out.report = out.complete ? "interleaved through the last stage of both sequences"
                              : "stuck extending side " + out.stuck_side + " past stage " +
                                    std::to_string(out.stuck_stage);
    return out;
}

} // namespace median
