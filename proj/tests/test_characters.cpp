#include <random>
#include <set>

#include "doctest.h"
#include "manin/characters.hpp"

using namespace manin;

TEST_CASE("char_group examples") {
    auto g = char_group(3, 2);
    REQUIRE(g.size() == 1);
    CHECK(g[0].gen == 2);
    CHECK(g[0].order == 6);

    auto h = char_group(2, 3);
    REQUIRE(h.size() == 2);
    CHECK(h[0].gen == 7);
    CHECK(h[0].order == 2);
    CHECK(h[1].gen == 5);
    CHECK(h[1].order == 2);

    auto f = char_group(5, 1);
    REQUIRE(f.size() == 1);
    CHECK(f[0].gen == 2);
    CHECK(f[0].order == 4);

    CHECK(char_group(2, 1).empty());
    CHECK(char_group(2, 2).size() == 1);
}

TEST_CASE("generators really generate") {
    for (long p : {2L, 3L, 5L, 7L})
        for (int n = 1; n <= 4; ++n) {
            long pn = ipow(p, n);
            std::set<long> seen;
            auto gens = char_group(p, n);
            if (gens.empty()) continue;
            long o0 = gens[0].order, o1 = gens.size() > 1 ? gens[1].order : 1;
            for (long i = 0; i < o0; ++i)
                for (long j = 0; j < o1; ++j) {
                    long x = 1;
                    for (long k = 0; k < i; ++k) x = x * gens[0].gen % pn;
                    if (gens.size() > 1)
                        for (long k = 0; k < j; ++k) x = x * gens[1].gen % pn;
                    seen.insert(x);
                }
            CHECK(static_cast<long>(seen.size()) == unit_group_order(p, n));
        }
}

TEST_CASE("conductors of the Q2 quadratic characters") {
    CHECK(conductor_exp(LocalChar::trivial(2, 3)) == 0);
    CHECK(conductor_exp(q2_quadratic("b2")) == 2);
    CHECK(conductor_exp(q2_quadratic("b3")) == 3);
    CHECK(conductor_exp(q2_quadratic("b2b3")) == 3);
    CHECK(conductor_exp(q2_quadratic("b0")) == 0);
    CHECK(q2_quadratic("b0").pi_sign() == -1);
    CHECK(q2_quadratic("b2").pi_sign() == 1);
    CHECK(q2_quadratic("b3").pi_sign() == 1);
    CHECK(q2_quadratic("1").is_trivial_on_units());
    for (auto& l : q2_labels()) CHECK(q2_label_of(q2_quadratic(l)) == l);
    CHECK_THROWS(q2_quadratic("b5"));
}

TEST_CASE("values of b2 and b3") {
    CycNum one(mpq_class(1)), m1(mpq_class(-1));
    CHECK(char_eval(q2_quadratic("b2"), -1) == m1);
    CHECK(char_eval(q2_quadratic("b2"), 5) == one);
    CHECK(char_eval(q2_quadratic("b3"), 5) == m1);
    CHECK(char_eval(q2_quadratic("b3"), -1) == one);
    CHECK(char_eval(q2_quadratic("b2b3"), 3) == one);
    CHECK(char_eval(LocalChar::trivial(5, 2), 1) == one);
    CHECK_THROWS(char_eval(q2_quadratic("b2"), 2));
}

TEST_CASE("b3 kills norms from Q2(sqrt 2), b2 kills norms from Q2(i)") {
    auto b2 = q2_quadratic("b2"), b3 = q2_quadratic("b3");
    for (long x = 0; x < 8; ++x)
        for (long y = 0; y < 8; ++y) {
            long n2 = x * x + y * y, n3 = x * x - 2 * y * y;
            if (n2 % 2) CHECK(b2.exponent(n2) == 0);
            if (mod_floor(n3, 2)) CHECK(b3.exponent(n3) == 0);
        }
}

TEST_CASE("X_{Q2,k} sets") {
    CHECK(chars_of_conductor(2, 1).empty());
    auto x2 = chars_of_conductor(2, 2);
    REQUIRE(x2.size() == 1);
    CHECK(x2[0] == q2_quadratic("b2"));
    auto x3 = chars_of_conductor(2, 3);
    REQUIRE(x3.size() == 2);
    std::set<std::string> labels;
    for (auto& c : x3) labels.insert(q2_label_of(c));
    CHECK(labels == std::set<std::string>{"b3", "b2b3"});
}

TEST_CASE("property: X_{<=k} sizes match the group order") {
    for (long p : {2L, 3L, 5L, 7L})
        for (int k = 0; k <= 4; ++k) {
            size_t total = 0;
            for (int a = 0; a <= k; ++a) total += chars_of_conductor(p, a).size();
            CHECK(static_cast<long>(total) == unit_group_order(p, k));
            CHECK(static_cast<long>(chars_upto(p, k).size()) == unit_group_order(p, k));
        }
}

TEST_CASE("property: multiplicativity, exhaustive at levels <= 4") {
    for (long p : {2L, 3L, 5L}) {
        for (int n = 1; n <= (p == 5 ? 3 : 4); ++n) {
            long pn = ipow(p, n);
            auto chars = chars_at_level(p, n);
            for (auto& c : chars) {
                CHECK(c.conductor() <= n);
                CHECK(LocalChar(p, n, c.images()).conductor() == c.conductor());
                long V = c.value_order();
                for (long u = 1; u < pn; ++u) {
                    if (u % p == 0) continue;
                    for (long v = 1; v < pn; v += (p == 5 ? 3 : 1)) {
                        if (v % p == 0) continue;
                        CHECK((c.exponent(u) + c.exponent(v)) % V == c.exponent(u * v % pn));
                    }
                }
            }
        }
    }
}

TEST_CASE("group laws") {
    std::mt19937 rng(3);
    for (long p : {2L, 3L, 5L}) {
        auto chars = chars_at_level(p, 3);
        std::uniform_int_distribution<size_t> pick(0, chars.size() - 1);
        for (int it = 0; it < 50; ++it) {
            auto a = chars[pick(rng)], b = chars[pick(rng)];
            auto ab = char_mul(a, b);
            CHECK(char_mul(ab, char_inv(b)) == a);
            CHECK(char_mul(a, b) == char_mul(b, a));
            long o = char_order(a);
            LocalChar x = LocalChar::trivial(p, 3);
            for (long i = 0; i < o; ++i) x = char_mul(x, a);
            CHECK(x == LocalChar::trivial(p, 3));
        }
    }
    // products of characters at different levels
    auto c = char_mul(q2_quadratic("b2").at_level(2), q2_quadratic("b3"));
    CHECK(c == q2_quadratic("b2b3"));
}

TEST_CASE("digit sums") {
    CHECK(digit_sum_s({3, 1, 0}) == 0);
    CHECK(digit_sum_s({3, 2, 5}) == 3);
    for (long p : {3L, 5L, 7L})
        for (int f = 1; f <= 2; ++f) {
            long q = ipow(p, f);
            CHECK(digit_sum_s({p, f, (q - 1) / 2}) == (p - 1) * f / 2);
        }
}

TEST_CASE("property: s(chi chi') relations for p in {3,5}, f <= 2") {
    for (long p : {3L, 5L})
        for (int f = 1; f <= 2; ++f) {
            long q = ipow(p, f);
            for (long a = 0; a < q - 1; ++a) {
                FiniteFieldChar x{p, f, a};
                long sx = digit_sum_s(x);
                CHECK(sx >= 0);
                CHECK(sx <= (p - 1) * f);
                CHECK((sx == 0) == x.is_trivial());
                for (long b = 0; b < q - 1; ++b) {
                    FiniteFieldChar y{p, f, b};
                    long s = digit_sum_s(ff_char_mul(x, y)), sy = digit_sum_s(y);
                    CHECK(mod_floor(s - sx - sy, p - 1) == 0);
                    CHECK(s <= sx + sy);
                }
            }
        }
}

TEST_CASE("property: restriction and norm on F_{p^2}/F_p") {
    for (long p : {3L, 5L, 7L}) {
        long q = p * p;
        for (long a = 0; a < q - 1; ++a) {
            FiniteFieldChar xi{p, 2, a};
            auto r = ff_restrict(xi, 1);
            CHECK(mod_floor(digit_sum_s(r) - digit_sum_s(xi), p - 1) == 0);
        }
        for (long a = 0; a < p - 1; ++a) {
            FiniteFieldChar chi{p, 1, a};
            auto n = ff_compose_norm(chi, 2);
            CHECK(mod_floor(digit_sum_s(n) - 2 * digit_sum_s(chi), p - 1) == 0);
        }
    }
}

TEST_CASE("level-one characters and the finite-field dictionary") {
    for (long p : {3L, 5L, 7L}) {
        auto F = FiniteField::get(p, 1);
        for (auto& c : chars_at_level(p, 1)) {
            auto ff = ff_char_from_local(c);
            // chi(x) and omega(x)^{-alpha} agree as roots of unity of order p - 1
            for (long x = 1; x < p; ++x) {
                long lhs = c.exponent(x) * ((p - 1) / c.value_order());
                CHECK(mod_floor(lhs, p - 1) == ff.exponent(x));
            }
        }
    }
}

TEST_CASE("psi_eval") {
    AdditiveChar s2{2, 1};
    CHECK(psi_eval(s2, mpq_class(1, 4)) == cyc_from_root(4, 1));
    CHECK(psi_eval(s2, mpq_class(5)) == CycNum(mpq_class(1)));
    CHECK(psi_eval(s2, mpq_class(1, 8)) == cyc_from_root(8, 1));
    CHECK(psi_eval(AdditiveChar{3, 2}, mpq_class(1, 9)) == cyc_from_root(9, 2));
    CHECK_THROWS(psi_eval(s2, mpq_class(1, 3)));
}
