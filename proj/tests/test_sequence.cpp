#include "helpers.hpp"
#include "oracles.hpp"

#include <median/io.hpp>

#include <doctest.h>

using namespace median;
using testing::alg;
using testing::catalog;
using testing::error_of;
using testing::subset;

namespace {
const std::vector<std::string> square{"00", "01", "10", "11"};

SaturationConfig config(std::size_t bound, EnumerationOrder order = EnumerationOrder::canonical)
{
    SaturationConfig c;
    c.size_bound = bound;
    c.cap = 4096;
    c.order = order;
    return c;
}

const InverseSequence & seq_2_4()
{
    static const InverseSequence seq = build_fraisse(4, config(2));
    return seq;
}

const InverseSequence & seq_3_3()
{
    static const InverseSequence seq = build_fraisse(3, config(3));
    return seq;
}
} // namespace

TEST_CASE("split_extension")
{
    auto one = share(MedianAlgebra::one_point());
    auto s = split_extension(one, one->full_set(), one->full_set());
    CHECK(s.algebra->size() == 2);

    auto two = alg({"0", "1"});
    auto chain = split_extension(two, subset(*two, {"0"}), two->full_set());
    CHECK(oracle::strings_of(canonicalize(*chain.algebra).algebra) == std::vector<std::string>{"00", "01", "11"});
    CHECK(chain.proj.map == Map{0, 0, 1});

    auto sq = alg(square);
    CHECK(split_extension(sq, sq->full_set(), sq->full_set()).algebra->size() == 8);

    CHECK(error_of([&] { split_extension(sq, subset(*sq, {"00", "01"}), subset(*sq, {"00", "10"})); }) ==
          Errc::NotCovering);
    CHECK(error_of([&] { split_extension(sq, subset(*sq, {"00", "11"}), sq->full_set()); }) == Errc::NotConvex);
    CHECK(error_of([&] { split_extension(sq, sq->empty_set(), sq->full_set()); }) == Errc::EmptySide);
}

TEST_CASE("split fibers have two points exactly over the overlap")
{
    for (auto & k : catalog(6))
        for (auto & cover : enumerate_convex_covers(k)) {
            const Subset & a = cover.a.members;
            const Subset & b = cover.b.members;
            auto s = split_extension(k, a, b);
            CHECK(s.algebra->size() == a.count() + b.count());
            std::vector<std::size_t> fiber(k->size(), 0);
            for (auto v : s.proj.map)
                ++fiber[v];
            for (std::size_t x = 0; x < k->size(); ++x)
                CHECK(fiber[x] == ((a.test(x) && b.test(x)) ? 2U : 1U));
            // The split is median-closed and its projection an epimorphism.
            auto checked = MedianAlgebra::validate(s.algebra->points(), s.algebra->dim());
            CHECK(checked.size() == s.algebra->size());
            CHECK(is_median_preserving(*s.algebra, *k, s.proj.map));
        }
}

TEST_CASE("convex covers")
{
    CHECK(enumerate_convex_covers(share(MedianAlgebra::one_point())).size() == 1);
    auto two = alg({"0", "1"});
    auto covers = enumerate_convex_covers(two);
    CHECK(covers.size() == 4);

    for (auto & k : catalog(7)) {
        oracle::Small o(*k);
        const auto sets = o.convex_sets();
        std::size_t brute = 0;
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = i; j < sets.size(); ++j)
                brute += (sets[i] | sets[j]) == o.full();
        CHECK(enumerate_convex_covers(k).size() == brute);
    }
    std::vector<std::string> big;
    for (int i = 0; i <= 600; ++i)
        big.push_back(std::string(i, '1') + std::string(600 - i, '0'));
    CHECK(error_of([&] { enumerate_convex_covers(alg(big)); }) == Errc::BoundExceeded);
}

TEST_CASE("small_median_algebras")
{
    std::vector<std::size_t> count(8, 0);
    for (auto & m : catalog(7)) {
        ++count[m->size()];
        CHECK(m->canonical());
    }
    CHECK(count == std::vector<std::size_t>{0, 1, 1, 1, 3, 4, 11, 23});
}

TEST_CASE("saturation_step")
{
    auto one = share(MedianAlgebra::one_point());
    auto trivial = saturation_step(one, config(1));
    CHECK(trivial.algebra->size() == 1);
    CHECK(trivial.certificate.empty());

    auto two_bound = saturation_step(one, config(2));
    CHECK(two_bound.algebra->size() >= 2);
    CHECK(! epis_via_halfspaces(two_bound.algebra, alg({"0", "1"})).empty());

    // Over the 2-point algebra with bound 2: M, N ∈ {1-point, 2-point}, N nontrivial.
    auto two = alg({"0", "1"});
    auto s = saturation_step(two, config(2));
    std::size_t m1 = 0, m2 = 0;
    for (auto & c : s.certificate) {
        CHECK(c.n->size() == 2);
        (c.m->size() == 1 ? m1 : m2)++;
    }
    CHECK(m1 == 1); // K ↠ 1, 2 ↠ 1
    CHECK(m2 == 1); // K ↠ 2 up to Aut(2), N = 2 with f = id up to Aut(2)

    auto tiny = config(2);
    tiny.cap = 1;
    CHECK(error_of([&] { saturation_step(one, tiny); }) == Errc::ResourceLimit);
    CHECK(error_of([&] { saturation_step(one, config(0)); }) == Errc::BoundExceeded);
    CHECK(error_of([&] { saturation_step(one, config(17)); }) == Errc::BoundExceeded);
}

TEST_CASE("certificates commute and their lifts are epimorphisms")
{
    for (const InverseSequence * seq : {&seq_2_4(), &seq_3_3()})
        for (std::size_t i = 1; i < seq->length(); ++i) {
            const auto & h = seq->bonds[i - 1];
            const auto l = oracle::strings_of(*seq->stages[i]);
            for (auto & c : seq->provenance[i].certificate) {
                for (std::size_t x = 0; x < h.map.size(); ++x)
                    CHECK(c.p[h.map[x]] == c.f[c.q[x]]);
                CHECK(oracle::surjective(c.q, c.n->size()));
                CHECK(oracle::preserves_median(l, oracle::strings_of(*c.n), c.q));
            }
        }
}

TEST_CASE("saturated stages solve every lifting problem, checked by point backtracking")
{
    const auto & seq = seq_3_3();
    const auto & small = catalog(3);
    for (std::size_t i = 1; i < seq.length(); ++i) {
        const auto & k = seq.stages[i - 1];
        const auto & h = seq.bonds[i - 1];
        const auto l = oracle::strings_of(*seq.stages[i]);
        for (auto & m : small)
            for (auto & n : small) {
                if (m->size() > k->size())
                    continue;
                for (auto & p : epis_via_halfspaces(k, m))
                    for (auto & f : enumerate_epis(n, m)) {
                        Map down(h.map.size());
                        for (std::size_t x = 0; x < down.size(); ++x)
                            down[x] = p.map[h.map[x]];
                        CHECK(oracle::brute_lift(l, oracle::strings_of(*n), down, f.map).has_value());
                    }
            }
    }
}

TEST_CASE("build_fraisse")
{
    auto single = build_fraisse(1, config(2));
    CHECK(single.length() == 1);
    CHECK(single.stages[0]->size() == 1);
    CHECK(single.bonds.empty());

    const auto & s2 = seq_2_4();
    CHECK(s2.stages[1]->size() == 2);
    bool covers_two = false;
    for (auto & c : s2.provenance[1].certificate)
        covers_two = covers_two || (c.n->size() == 2 && c.m->size() == 1);
    CHECK(covers_two);

    // Stage 2 of the bound-3 sequence maps onto every median algebra with ≤ 3 points.
    for (auto & m : catalog(3))
        CHECK(! epis_via_halfspaces(seq_3_3().stages[2], m).empty());

    CHECK(error_of([] { build_fraisse(0, config(2)); }) == Errc::ShapeError);
    auto tiny = config(2);
    tiny.cap = 1;
    try {
        build_fraisse(2, tiny);
        FAIL("expected ResourceLimit");
    }
    catch (const Error & e) {
        CHECK(e.code() == Errc::ResourceLimit);
        CHECK(e.witness().front() == "1");
    }
}

TEST_CASE("build_fraisse is deterministic")
{
    auto a = io::dump(io::to_json(build_fraisse(3, config(3))));
    auto b = io::dump(io::to_json(build_fraisse(3, config(3))));
    CHECK(a == b);
}

TEST_CASE("composite_projection")
{
    const auto & seq = seq_3_3();
    CHECK(composite_projection(seq, 1, 1) == Epimorphism::identity(seq.stages[1]));
    auto to0 = composite_projection(seq, 0, 2);
    CHECK(std::all_of(to0.map.begin(), to0.map.end(), [](auto v) { return v == 0; }));
    auto two_steps = composite_projection(seq, 0, 2);
    CHECK(two_steps.map == compose(seq.bonds[0], seq.bonds[1]).map);
    CHECK(error_of([&] { composite_projection(seq, 2, 1); }) == Errc::IndexOutOfRange);
    CHECK(error_of([&] { composite_projection(seq, 0, 3); }) == Errc::IndexOutOfRange);
}

TEST_CASE("check_extension_property")
{
    const auto & seq = build_fraisse(2, config(2));
    auto two = alg({"0", "1"});
    auto f = check_epimorphism(two, seq.stages[0], {0, 0});
    auto r = check_extension_property(seq, f, 0);
    REQUIRE(r.found());
    CHECK(*r.beta == 1);
    CHECK(compose(f, *r.g).map == composite_projection(seq, 0, 1).map);

    auto id = Epimorphism::identity(seq.stages[1]);
    auto last = check_extension_property(seq, id, 1);
    CHECK(! last.found());

    const auto & seq3 = seq_3_3();
    auto id1 = Epimorphism::identity(seq3.stages[1]);
    auto step = check_extension_property(seq3, id1, 1);
    REQUIRE(step.found());
    CHECK(*step.beta == 2);

    // A 5-point chain is beyond the bound-2 certificate scope: reported, not thrown.
    auto chain = alg({"0000", "1000", "1100", "1110", "1111"});
    auto to_one = check_epimorphism(chain, seq_2_4().stages[0], Map(5, 0));
    auto beyond = check_extension_property(seq_2_4(), to_one, 0);
    CHECK(! beyond.found());
    CHECK(! beyond.report.empty());

    CHECK(error_of([&] { check_extension_property(seq, f, 1); }) == Errc::TypeMismatch);
}

TEST_CASE("M1, M2 and M3 along a sequence")
{
    const auto & seq = seq_3_3();
    const auto & s1 = *seq.stages[1];
    const auto sides = oriented_halfspaces(s1);

    auto m1 = check_m1(seq, 1, {sides[0]}, {sides[1]});
    REQUIRE(m1.found());
    CHECK(*m1.beta == 1);
    CHECK(m1.halfspaces[0] == sides[0]);
    CHECK(error_of([&] { check_m1(seq, 1, {sides[0]}, {sides[0]}); }) == Errc::NotDisjoint);

    auto m2 = check_m2(seq, 1, {s1.full_set()});
    REQUIRE(m2.found());
    CHECK(*m2.beta == 1);
    CHECK(m2.halfspaces[0] == sides[0]);
    auto m2_point = check_m2(seq, 0, {seq.stages[0]->full_set()});
    REQUIRE(m2_point.found());
    CHECK(m2_point.halfspaces[0].all());
    CHECK(error_of([&] { check_m2(seq, 1, {sides[0], sides[1]}); }) == Errc::NotLinked);

    // Halfspaces of stage 2 lying inside a pulled-back halfspace of stage 1 always
    // meet in this short sequence, so no witness exists yet.
    const auto & s2 = *seq.stages[2];
    const auto down = composite_projection(seq, 1, 2);
    for (auto & a : sides) {
        oracle::Small o(s2);
        std::uint32_t pre = 0;
        for (std::size_t x = 0; x < s2.size(); ++x)
            if (a.test(down.map[x]))
                pre |= std::uint32_t{1} << x;
        std::vector<std::uint32_t> inside;
        for (std::uint32_t h = 1; h <= o.full(); ++h)
            if (o.halfspace(h) && (h & ~pre) == 0 && h != o.full())
                inside.push_back(h);
        bool disjoint = false;
        for (auto x : inside)
            for (auto y : inside)
                disjoint = disjoint || (x & y) == 0;
        auto m3 = check_m3(seq, 1, a);
        CHECK(m3.found() == disjoint);
        CHECK(! m3.found());
        CHECK(! m3.report.empty());
    }

    // A star over the 2-point algebra: the leaves 100 and 010 are disjoint
    // halfspaces inside the preimage of 0.
    InverseSequence star;
    star.stages = {alg({"0", "1"}), alg({"000", "001", "010", "100"})};
    star.bonds = {check_epimorphism(star.stages[1], star.stages[0], Map{0, 1, 0, 0})};
    star.provenance.resize(2);
    const Subset zero = subset(*star.stages[0], {"0"});
    auto m3 = check_m3(star, 0, zero);
    REQUIRE(m3.found());
    CHECK(*m3.beta == 1);
    REQUIRE(m3.halfspaces.size() == 2);
    CHECK(! m3.halfspaces[0].intersects(m3.halfspaces[1]));
    for (auto & b : m3.halfspaces) {
        CHECK(is_halfspace(*star.stages[1], b));
        CHECK(b.any());
        b.for_each_set([&](std::size_t x) { CHECK(zero.test(star.bonds[0].map[x])); });
    }
    CHECK(! check_m3(star, 0, subset(*star.stages[0], {"1"})).found());
    CHECK(error_of([&] { check_m3(seq, 1, s1.full_set()); }) == Errc::NotHalfspace);
    CHECK(error_of([&] { check_m3(seq, 1, subset(s1, {s1.point(0).to_string(), s1.point(5).to_string()})); }) ==
          Errc::NotHalfspace);
}

TEST_CASE("back_and_forth")
{
    const auto & seq = seq_3_3();
    auto self = back_and_forth(seq, seq);
    CHECK(self.complete);
    CHECK(self.depth == 2);

    auto rev = build_fraisse(3, config(2, EnumerationOrder::reversed));
    auto can = build_fraisse(3, config(2));
    auto mixed = back_and_forth(can, rev);
    CHECK(mixed.depth >= 2);
    for (std::size_t k = 1; k <= mixed.depth; ++k) {
        const auto & h = mixed.forth[k - 1];
        const auto & j = mixed.back[k];
        CHECK(compose(mixed.back[k - 1], h).map ==
              composite_projection(can, mixed.alphas[k - 1], mixed.alphas[k]).map);
        CHECK(compose(h, j).map == composite_projection(rev, mixed.betas[k - 1], mixed.betas[k]).map);
    }

    auto truncated = build_fraisse(1, config(2));
    auto stuck = back_and_forth(can, truncated);
    CHECK(! stuck.complete);
    CHECK(stuck.forth.size() == 1);
    CHECK(stuck.depth == 0);
    CHECK(stuck.stuck_side == "Q");
    CHECK(stuck.stuck_stage == 0);
}
