#include <chrono>

#include "doctest.h"
#include "manin/gauss.hpp"
#include "manin/padic.hpp"

using namespace manin;

namespace {

CycNum Q(long n, long d = 1) { return CycNum(mpq_class(n, d)); }

// Independent oracle: average over units written out with psi_eval and char_eval.
CycNum naive_gauss(const LocalChar& chi, long x_val) {
    long p = chi.p();
    long m = std::max<long>(chi.level(), x_val < 0 ? -x_val : 0);
    if (m == 0) return Q(1);
    long pm = ipow(p, static_cast<int>(m));
    CycNum s;
    AdditiveChar psi{p, 1};
    mpq_class x = x_val >= 0 ? mpq_class(ipow(p, static_cast<int>(x_val))) : mpq_class(1, ipow(p, static_cast<int>(-x_val)));
    for (long y = 1; y < pm; ++y) {
        if (y % p == 0) continue;
        s = s + char_eval(chi, y) * psi_eval(psi, x * y);
    }
    return s * mpq_class(1, euler_phi(pm));
}

}  // namespace

TEST_CASE("gauss_bruteforce examples") {
    auto triv = LocalChar::trivial(3, 0);
    CHECK(gauss_bruteforce(triv, 0).value.to_cyc() == Q(1));
    CHECK(gauss_bruteforce(LocalChar::trivial(5, 1), -1).value.to_cyc() == Q(-1, 4));
    CHECK(gauss_bruteforce(q2_quadratic("b2"), -2).value.to_cyc() == cyc_from_root(4, 1));
    CHECK(gauss_bruteforce(q2_quadratic("b3"), -1).value.is_zero());
    CHECK(gauss_bruteforce(q2_quadratic("b3"), -1).valuation.is_inf());
    // G(1/8, b3) = 2^{-1/2}
    auto g = gauss_bruteforce(q2_quadratic("b3"), -3).value.to_cyc();
    CHECK(g * g == Q(1, 2));
    CHECK(gauss_bruteforce(q2_quadratic("b3"), -3).valuation == ExtRational(-1, 2));
}

TEST_CASE("bruteforce agrees with a naive oracle") {
    for (long p : {2L, 3L, 5L})
        for (int n = 0; n <= (p == 5 ? 2 : 3); ++n)
            for (auto& c : chars_at_level(p, n))
                for (long xv = (p == 2 ? -4 : -3); xv <= 1; ++xv) CHECK(gauss_sum(c, xv, 1) == naive_gauss(c, xv));
}

TEST_CASE("property: vanishing pattern and valuations of the case table") {
    for (long p : {2L, 3L, 5L})
        for (int n = 0; n <= (p == 5 ? 3 : 4); ++n)
            for (auto& c : chars_at_level(p, n)) {
                int a = c.conductor();
                for (long xv = -5; xv <= 1; ++xv) {
                    const CycNum& g = gauss_sum(c, xv, 1);
                    bool table_zero = (a == 0) ? (xv < -1) : (xv != -a);
                    CHECK(g.is_zero() == table_zero);
                    if (a == 0 && xv >= 0) CHECK(g == Q(1));
                    if (a == 0 && xv == -1) CHECK(g == CycNum(mpq_class(-1, p - 1)));
                }
            }
}

TEST_CASE("oracle valuations agree with the formula") {
    for (long p : {2L, 3L, 5L})
        for (int n = 1; n <= (p == 5 ? 2 : 3); ++n)
            for (auto& c : chars_of_conductor(p, n)) {
                auto bv = gauss_bruteforce(c, -n, true);
                CHECK(bv.valuation == gauss_valuation_formula(c, -n));
            }
}

TEST_CASE("finite_field_gauss examples") {
    CHECK(finite_field_gauss({3, 1, 0}) == Q(1));
    auto g3 = finite_field_gauss({3, 1, 1});
    CHECK(g3 * g3 == Q(-3));
    auto g5 = finite_field_gauss({5, 1, 2});
    CHECK(g5 * g5 == Q(5));
    for (long p : {2L, 3L, 5L, 7L})
        for (int f = 1; f <= 2; ++f) {
            long q = ipow(p, f);
            for (long a = 1; a < q - 1; ++a) {
                auto g = finite_field_gauss({p, f, a});
                CHECK(g * g.conj() == Q(q));
            }
        }
}

TEST_CASE("stickelberger examples") {
    CHECK(stickelberger_val({3, 1, 0}) == ExtRational(0));
    CHECK(stickelberger_val({3, 1, 1}) == ExtRational(1, 2));
    CHECK(valuation_of_cyc(3, finite_field_gauss({3, 1, 1})) == ExtRational(1, 2));
    CHECK(stickelberger_val({5, 1, 2}) == ExtRational(1, 2));
}

TEST_CASE("property: Stickelberger sweep") {
    auto t0 = std::chrono::steady_clock::now();
    for (long p : {2L, 3L, 5L, 7L})
        for (int f = 1; f <= 2; ++f) {
            long q = ipow(p, f);
            for (long a = 0; a < q - 1; ++a) {
                FiniteFieldChar chi{p, f, a};
                CHECK(valuation_of_cyc(p, finite_field_gauss(chi)) == stickelberger_val(chi));
            }
        }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(dt < 30.0);
}

TEST_CASE("eps_factor examples") {
    CHECK(eps_factor(LocalChar::trivial(5, 0)).to_cyc() == Q(1));
    CHECK(eps_factor(q2_quadratic("b0")).to_cyc() == Q(1));
    CHECK(eps_factor(q2_quadratic("b2")).to_cyc() == cyc_from_root(4, 1));
    CHECK(eps_factor(q2_quadratic("b3")).to_cyc() == Q(1));
    CHECK(eps_factor(q2_quadratic("b2b3")).to_cyc() == cyc_from_root(4, 1));
    // unramified twist: b0 b3 picks up (-1)^3
    CHECK(eps_factor(q2_quadratic("b0b3")).to_cyc() == Q(-1));
    CHECK(eps_factor(q2_quadratic("b0b2")).to_cyc() == cyc_from_root(4, 1));
}

TEST_CASE("eps_factor additive shift and s-dependence") {
    for (long p : {3L, 5L})
        for (auto& c : chars_of_conductor(p, 2)) {
            auto e1 = eps_factor(c);
            for (long a = 1; a < p; ++a) {
                auto ea = eps_factor(c, AdditiveChar{p, a});
                CHECK(ea.to_cyc() == e1.to_cyc() * char_eval(c, a));
            }
            auto es = eps_factor(c, AdditiveChar{p, 1}, mpq_class(3, 2));
            CHECK(es.to_cyc() * CycNum(mpq_class(p * p)) == e1.to_cyc());
        }
    CHECK_THROWS(eps_factor(q2_quadratic("b2"), AdditiveChar{2, 1}, mpq_class(2, 3)));
}

TEST_CASE("property: epsilon duality and unitarity") {
    for (long p : {2L, 3L, 5L})
        for (int a = 1; a <= 3; ++a)
            for (auto& c : chars_of_conductor(p, a)) {
                auto e = eps_factor(c).to_cyc();
                auto ei = eps_factor(char_inv(c)).to_cyc();
                CHECK(e * ei == char_eval(c, -1));
                auto mod2 = cyc_complex_embed(e * e.conj(), 40) - cyc_complex_embed(Q(1), 40);
                CHECK(mod2.abs_below_pow10(20));
            }
}

TEST_CASE("eps_valuation") {
    CHECK(eps_valuation(LocalChar::trivial(3, 0)) == ExtRational(0));
    for (long p : {3L, 5L, 7L})
        for (auto& c : chars_of_conductor(p, 1)) {
            auto ev = eps_valuation(c);
            CHECK(valuation_of_cyc(p, eps_factor(c).to_cyc()) == ev);
        }
    // quadratic, p = 5: both branches give 0
    for (auto& c : chars_of_conductor(5, 1))
        if (char_order(c) == 2) CHECK(eps_valuation(c) == ExtRational(0));
    for (auto& c : chars_of_conductor(3, 2)) CHECK(eps_valuation(c) == ExtRational(0));
}

TEST_CASE("a(chi) <= 1: integrality and unit away from p") {
    for (long p : {3L, 5L, 7L})
        for (auto& c : chars_at_level(p, 1)) {
            CycNum z = gauss_sum(c, -1, 1) * mpq_class(p - 1);
            CHECK(z.is_integral());
            // z * conj(z) is a power of p, so z is a unit away from p
            CycNum n = z * z.conj();
            REQUIRE(n.is_rational());
            mpz_class v = n.rational_value().get_num();
            while (v % p == 0) v /= p;
            CHECK(v == 1);
        }
}

TEST_CASE("find_u examples") {
    auto b2 = q2_quadratic("b2");
    long u = find_u(b2);
    CHECK(check_u(b2, AdditiveChar{2, 1}, u));
    for (long x : {0L, 1L}) CHECK(char_eval(b2, 1 + 2 * x) == psi_eval({2, 1}, mpq_class(u * x, 2)));

    for (auto& c : chars_of_conductor(3, 2))
        if (char_order(c) == 3) {
            long w = find_u(c);
            for (long x = 0; x < 3; ++x) CHECK(char_eval(c, 1 + 3 * x) == psi_eval({3, 1}, mpq_class(w * x, 3)));
        }
    auto b3 = q2_quadratic("b3");
    long w3 = find_u(b3);
    for (long x = 0; x < 2; ++x) CHECK(char_eval(b3, 1 + 4 * x) == psi_eval({2, 1}, mpq_class(w3 * x, 2)));
}

TEST_CASE("closed forms equal brute force, certificates hold") {
    for (long p : {2L, 3L, 5L})
        for (int a = 2; a <= 4; ++a)
            for (auto& c : chars_of_conductor(p, a)) {
                for (long sh : {1L, p - 1 == 1 ? 3L : p - 1}) {
                    AdditiveChar psi{p, sh};
                    auto cf = gauss_closed_form(c, psi);
                    auto bf = gauss_bruteforce(c, -a, psi);
                    CHECK(cf.value.to_cyc() == bf.value.to_cyc());
                    CHECK(cf.provenance == GaussProvenance::closed_form);
                    auto cert = root_of_unity_certificate(c, psi);
                    CHECK(cert.first >= 1);
                }
            }
    auto cb2 = root_of_unity_certificate(q2_quadratic("b2"));
    CHECK(cb2 == std::make_pair(2L, 1L));  // z = i, z^2 = -1
    auto cb3 = root_of_unity_certificate(q2_quadratic("b3"));
    CHECK(cb3 == std::make_pair(1L, 0L));  // z = 1
    CHECK_THROWS(find_u(LocalChar::trivial(3, 1)));
}
