#include <catch2/catch_amalgamated.hpp>

#include <motivic/base_group.hpp>
#include <motivic/zmodule.hpp>

#include <random>
#include <set>

using namespace motivic;

namespace {

GammaScalar gs1(const Rat& x) { return GammaScalar{x}; }
GammaScalar gs2(const Rat& x, const Rat& y) { return GammaScalar{x, y}; }

// Brute-force oracle: closure of the subgroup of (Q/Z)^k generated by gens,
// as a set of representatives in [0,1)^k.
std::set<GammaScalar> subgroup_closure(int k, const std::vector<GammaScalar>& gens) {
    auto reduce = [&](GammaScalar v) {
        for (auto& x : v) x -= Rat(rat_floor(x));
        return v;
    };
    std::set<GammaScalar> elems{gs_zero(k)};
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<GammaScalar> next = elems;
        for (const auto& e : elems)
            for (const auto& g : gens) {
                auto s = reduce(gs_add(e, g));
                if (next.insert(s).second) grew = true;
            }
        elems.swap(next);
        if (elems.size() > 4096) FAIL("oracle subgroup too large");
    }
    return elems;
}

} // namespace

TEST_CASE("lexicographic comparison") {
    CHECK(compare(gs2(1, 0), gs2(0, 5)) == Ordering::Greater);
    CHECK(compare(gs1(Rat(1, 2)), gs1(Rat(1, 2))) == Ordering::Equal);
    CHECK(compare(gs2(0, Rat(1, 2)), gs2(0, Rat(1, 3))) == Ordering::Greater);
    CHECK_THROWS_AS(compare(gs1(1), gs2(1, 1)), std::invalid_argument);
}

TEST_CASE("frac_int_split") {
    auto [f, z] = frac_int_split(gs1(Rat(7, 3)));
    CHECK(f == gs1(Rat(1, 3)));
    CHECK(z == gs1(2));

    auto [f2, z2] = frac_int_split(gs1(Rat(-1, 2)));
    CHECK(f2 == gs1(Rat(1, 2)));
    CHECK(z2 == gs1(-1));

    auto [f3, z3] = frac_int_split(gs1(4));
    CHECK(f3 == gs1(0));
    CHECK(z3 == gs1(4));

    auto [f4, z4] = frac_int_split(gs2(Rat(-5, 4), Rat(3, 2)));
    CHECK(f4 == gs2(Rat(3, 4), Rat(1, 2)));
    CHECK(z4 == gs2(-2, 1));
}

TEST_CASE("subgroup canonical k=1") {
    BaseGroup G(1);
    auto H = subgroup_canonical(G, {gs1(Rat(1, 2)), gs1(Rat(1, 3))});
    CHECK(H.order() == 6);
    REQUIRE(H.canonical_generators().size() == 1);
    CHECK(H.canonical_generators()[0] == gs1(Rat(1, 6)));

    auto T = subgroup_canonical(G, {});
    CHECK(T.is_trivial());
    CHECK(T.order() == 1);

    auto H2 = subgroup_canonical(G, {gs1(Rat(3, 4)), gs1(Rat(1, 2))});
    CHECK(H2.order() == 4);
    CHECK(H2.canonical_generators()[0] == gs1(Rat(1, 4)));
}

TEST_CASE("subgroup canonical matches closure oracle") {
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> num(-3, 3), den(1, 4), cnt(0, 3);
    for (int k = 1; k <= 2; ++k) {
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<GammaScalar> gens;
            int n = cnt(rng);
            for (int i = 0; i < n; ++i) {
                GammaScalar g(static_cast<size_t>(k));
                for (auto& x : g) x = Rat(num(rng), den(rng));
                gens.push_back(g);
            }
            auto H = subgroup_canonical(BaseGroup(k), gens);
            auto closure = subgroup_closure(k, gens);
            CHECK(H.order() == Int(closure.size()));
            for (const auto& e : closure) CHECK(H.module().contains(e));
        }
    }
}

TEST_CASE("subgroup canonical order independence and A-absorption") {
    BaseGroup G(2);
    std::vector<GammaScalar> a = {gs2(Rat(1, 2), Rat(1, 3)), gs2(0, Rat(1, 4))};
    std::vector<GammaScalar> b = {gs2(0, Rat(1, 4)), gs2(Rat(1, 2), Rat(1, 3))};
    CHECK(subgroup_canonical(G, a) == subgroup_canonical(G, b));

    auto with_int = a;
    with_int.push_back(gs2(3, -2)); // element of A changes nothing
    CHECK(subgroup_canonical(G, with_int) == subgroup_canonical(G, a));

    // idempotent: canonical generators regenerate the same subgroup
    auto H = subgroup_canonical(G, a);
    CHECK(subgroup_canonical(G, H.canonical_generators()) == H);
}

TEST_CASE("k=1 canonical subgroup is cyclic with lcm denominator") {
    BaseGroup G(1);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(1, 7), den(1, 6);
    for (int t = 0; t < 40; ++t) {
        std::vector<GammaScalar> gens;
        Int l = 1;
        for (int i = 0; i < 3; ++i) {
            Rat g(num(rng), den(rng));
            gens.push_back(gs1(g));
            l = ilcm(l, rat_den(g));
        }
        auto H = subgroup_canonical(G, gens);
        CHECK(H.exponent() == l);
        if (l > 1) {
            REQUIRE(H.canonical_generators().size() == 1);
            CHECK(H.canonical_generators()[0] == gs1(Rat(1, l)));
        }
    }
}

TEST_CASE("specialization order consistency") {
    auto s = Specialization::identity(2);
    CHECK(s.values[0] > s.values[1]);
    std::vector<GammaScalar> scalars = {gs2(1, 0), gs2(0, 1), gs2(1, -5), gs2(0, Rat(1, 2))};
    CHECK(s.order_consistent(scalars));

    Specialization bad;
    bad.values = {Rat(1), Rat(2)}; // gamma_1 < gamma_2 breaks lex order
    CHECK_FALSE(bad.order_consistent(scalars));
}
