#include <complex>
#include <numeric>
#include <random>

#include "doctest.h"
#include "manin/cyclotomic.hpp"

using namespace manin;

namespace {

CycNum Q(long n, long d = 1) { return CycNum(mpq_class(n, d)); }
CycNum z(long M, long j) { return cyc_from_root(M, j); }

// value of an element at zeta_M = exp(2 pi i / M), from its power-basis coordinates
std::complex<double> embed_d(const CycNum& a) {
    std::complex<double> s = 0;
    auto c = a.coeffs();
    for (size_t i = 0; i < c.size(); ++i) s += c[i].get_d() * std::polar(1.0, 2 * M_PI * double(i) / double(a.modulus()));
    return s;
}

std::vector<long> poly_mul(const std::vector<long>& a, const std::vector<long>& b) {
    std::vector<long> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

CycNum random_cyc(std::mt19937& rng, long M) {
    CycNum s(mpq_class(0), M);
    for (int i = 0; i < 4; ++i) s = s + z(M, rng() % M) * mpq_class(long(rng() % 9) - 4, 1 + long(rng() % 3));
    return s;
}

}  // namespace

TEST_CASE("integer utilities") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(125) == 100);
    for (long n = 1; n <= 300; ++n) {
        long c = 0;
        for (long k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
        CHECK(euler_phi(n) == c);
    }
    CHECK(lcm_long(4, 6) == 12);
    CHECK(mod_floor(-7, 3) == 2);
    CHECK(ipow(3, 4) == 81);
    CHECK(val_of(2, 96) == 5);
    CHECK(val_of(3, 96) == 1);
    CHECK(val_of(5, 96) == 0);
    CHECK(is_prime(2));
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
    CHECK(factorize(360) == std::vector<std::pair<long, int>>{{2, 3}, {3, 2}, {5, 1}});
    for (long n = 1; n <= 500; ++n) {
        long prod = 1;
        for (auto [p, e] : factorize(n)) {
            CHECK(is_prime(p));
            prod *= ipow(p, e);
        }
        CHECK(prod == n);
    }
}

TEST_CASE("ExtRational") {
    CHECK(ExtRational(2, 4) == ExtRational(1, 2));
    CHECK(ExtRational(-1, 2).str() == "-1/2");
    CHECK(ExtRational::infinity().str() == "inf");
    CHECK(ExtRational::parse("-3/6") == ExtRational(-1, 2));
    CHECK(ExtRational::parse("inf").is_inf());
    CHECK_THROWS(ExtRational::parse("1/x"));
    CHECK(ExtRational(1) + ExtRational::infinity() == ExtRational::infinity());
    CHECK(ExtRational(5) < ExtRational::infinity());
    CHECK_FALSE(ExtRational::infinity() < ExtRational::infinity());
    CHECK(min(ExtRational(3), ExtRational(-1, 3)) == ExtRational(-1, 3));
    CHECK(max(ExtRational(3), ExtRational::infinity()).is_inf());
    CHECK(ExtRational(3, 2) * mpq_class(2) == ExtRational(3));
    CHECK(-ExtRational(3, 2) == ExtRational(-3, 2));
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        ExtRational a(long(rng() % 41) - 20, 1 + long(rng() % 6)), b(long(rng() % 41) - 20, 1 + long(rng() % 6));
        CHECK(ExtRational::parse(a.str()) == a);
        CHECK((a < b) == (a.value() < b.value()));
        CHECK(a + b - b == a);
    }
}

TEST_CASE("cyc_from_root examples") {
    CHECK(z(1, 0) == Q(1));
    auto i = z(4, 1);
    CHECK(i.coeffs() == std::vector<mpq_class>{0, 1});
    CHECK(z(3, 1) + z(3, 2) == Q(-1));
    CHECK(z(5, 0) == Q(1));
    CHECK(z(6, -1) == z(6, 5));
    CHECK(z(6, 7) == z(6, 1));
    CHECK(z(12, 3) == i);
}

TEST_CASE("cyc_arith examples") {
    auto z8 = z(8, 1);
    CHECK(cyc_arith(z8, z8, CycOp::mul) == z(4, 1));
    auto i = z(4, 1);
    CHECK((Q(1) + i) * (Q(1) - i) == Q(2));
    auto g = z(8, 1) - z(8, 3) - z(8, 5) + z(8, 7);
    CHECK(g * g == Q(8));
    CHECK(cyc_arith(Q(1), i, CycOp::div) == -i);
    CHECK(cyc_arith(z(3, 1), z(4, 1), CycOp::sub) == z(3, 1) - z(4, 1));
    CHECK_THROWS(cyc_arith(i, Q(0), CycOp::div));
    CHECK_THROWS(Q(1) / CycNum(mpq_class(0), 7));
    // moduli combine through the lcm
    CHECK((z(3, 1) * z(4, 1)).modulus() % 12 == 0);
    CHECK(z(3, 1) * z(4, 1) == z(12, 7));
}

TEST_CASE("field axioms on random instances") {
    std::mt19937 rng(2024);
    for (int it = 0; it < 300; ++it) {
        long Ms[] = {3, 4, 5, 8, 9, 12, 15, 16, 20};
        long M1 = Ms[rng() % 9], M2 = Ms[rng() % 9], M3 = Ms[rng() % 9];
        auto a = random_cyc(rng, M1), b = random_cyc(rng, M2), c = random_cyc(rng, M3);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Q(0));
        if (!b.is_zero()) {
            CHECK((a / b) * b == a);
            CHECK(b * b.inverse() == Q(1));
        }
        CHECK(a.conj().conj() == a);
        CHECK((a * b).conj() == a.conj() * b.conj());
    }
}

TEST_CASE("power basis coordinates and integrality") {
    for (long M : {1L, 2L, 3L, 4L, 7L, 12L, 30L}) CHECK(CycNum(mpq_class(0), M).coeffs().size() == size_t(euler_phi(M)));
    CHECK(z(8, 3).is_integral());
    CHECK_FALSE((z(8, 3) * mpq_class(1, 2)).is_integral());
    CHECK((z(5, 1) * mpq_class(3, 7)).coeff(1) == mpq_class(3, 7));
    CHECK(Q(3, 4).is_rational());
    CHECK(Q(3, 4).rational_value() == mpq_class(3, 4));
    CHECK_FALSE(z(3, 1).is_rational());
    // sum of the primitive M-th roots of unity is the Moebius function
    for (long M = 1; M <= 40; ++M) {
        CycNum s;
        for (long j = 0; j < M; ++j)
            if (std::gcd(j, M) == 1) s = s + z(M, j);
        long mu = 1;
        for (auto [p, e] : factorize(M)) mu = e > 1 ? 0 : -mu;
        CHECK(s == Q(mu));
    }
}

TEST_CASE("galois action and powers") {
    CHECK(z(5, 1).galois(2) == z(5, 2));
    CHECK(z(8, 1).pow(8) == Q(1));
    CHECK(z(8, 1).pow(-1) == z(8, 7));
    CHECK((Q(1) + z(4, 1)).pow(4) == Q(-4));
    CHECK(z(7, 3).conj() == z(7, 4));
}

TEST_CASE("cyclotomic polynomials multiply to x^M - 1") {
    CHECK(cyclotomic_poly(4) == std::vector<long>{1, 0, 1});
    CHECK(cyclotomic_poly(6) == std::vector<long>{1, -1, 1});
    for (long M = 1; M <= 128; ++M) {
        std::vector<long> prod{1};
        for (long d = 1; d <= M; ++d)
            if (M % d == 0) prod = poly_mul(prod, cyclotomic_poly(d));
        std::vector<long> want(M + 1, 0);
        want[0] = -1;
        want[M] = 1;
        CHECK(prod == want);
        CHECK(long(cyclotomic_poly(M).size()) == euler_phi(M) + 1);
    }
}

TEST_CASE("roots of unity") {
    CHECK(cyc_is_root_of_unity(Q(1)) == std::make_pair(1L, 0L));
    CHECK(cyc_is_root_of_unity(-z(4, 1)) == std::make_pair(4L, 3L));
    CHECK_FALSE(cyc_is_root_of_unity(Q(2)));
    CHECK_FALSE(cyc_is_root_of_unity(Q(1) + z(4, 1)));
    CHECK_FALSE(cyc_is_root_of_unity((Q(3) + z(5, 1) * mpq_class(4)) / (Q(3) + z(5, 4) * mpq_class(4))));
    for (long M = 1; M <= 64; ++M)
        for (long j = 0; j < M; ++j) {
            auto r = cyc_is_root_of_unity(z(M, j));
            REQUIRE(r);
            CHECK(r->first == M / std::gcd(M, j));
            CHECK(z(r->first, r->second) == z(M, j));
        }
    // -zeta_M has order lcm(2, M) up to the M odd case
    for (long M : {3L, 5L, 9L}) CHECK(cyc_is_root_of_unity(-z(M, 1))->first == 2 * M);
}

TEST_CASE("complex embedding") {
    auto e = cyc_complex_embed(z(4, 1), 30);
    CHECK(std::abs(e.re_d()) < 1e-25);
    CHECK(e.im_d() == doctest::Approx(1.0));
    CHECK(cyc_complex_embed(z(3, 1) + z(3, 2), 30).re_d() == doctest::Approx(-1.0));
    auto g = (z(8, 1) - z(8, 3) - z(8, 5) + z(8, 7)) * mpq_class(1, 4);
    // g^2 = 8 fixes g / 4 = 1/sqrt 2
    CHECK(cyc_complex_embed(g, 30).re_d() == doctest::Approx(0.7071067811865476));
    CHECK(std::abs(cyc_complex_embed(g, 30).im_d()) < 1e-25);
    std::mt19937 rng(8);
    for (int it = 0; it < 100; ++it) {
        long M = std::vector<long>{5, 7, 8, 12, 20}[rng() % 5];
        auto a = random_cyc(rng, M), b = random_cyc(rng, M);
        auto ea = embed_d(a);
        CHECK(std::abs(std::complex<double>(cyc_complex_embed(a, 25).re_d(), cyc_complex_embed(a, 25).im_d()) - ea) < 1e-9);
        // arithmetic is respected to the requested precision
        int digits = 40;
        auto lhs = cyc_complex_embed(a * b, digits);
        auto rhs = cyc_complex_embed(a, digits) * cyc_complex_embed(b, digits);
        CHECK((lhs - rhs).abs_below_pow10(digits - 2));
        auto s = cyc_complex_embed(a + b, digits) - (cyc_complex_embed(a, digits) + cyc_complex_embed(b, digits));
        CHECK(s.abs_below_pow10(digits - 2));
    }
}

TEST_CASE("square roots of primes") {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        auto s = sqrt_prime_cyc(p);
        CHECK(s * s == Q(p));
        CHECK(cyc_complex_embed(s, 20).re_d() == doctest::Approx(std::sqrt(double(p))));
    }
    CHECK(sqrt_prime_power_cyc(3, 3) * sqrt_prime_power_cyc(3, 3) == Q(27));
    CHECK(sqrt_prime_power_cyc(2, 4) == Q(4));
}

TEST_CASE("ScaledCyclotomic") {
    auto i = z(4, 1);
    ScaledCyclotomic a(i, 2, mpq_class(-1, 2));  // i / sqrt 2
    CHECK(a.qexp() == mpq_class(1, 2));           // canonical exponent in {0, 1/2}
    CHECK(a.unit() == i * mpq_class(1, 2));
    CHECK(a.to_cyc() * a.to_cyc() == Q(-1, 2));
    CHECK(a * a == ScaledCyclotomic::from_cyc(Q(-1, 2)));
    CHECK(a.times_qpow(mpq_class(1, 2)) == ScaledCyclotomic::from_cyc(i));
    CHECK(a.pow(4) == ScaledCyclotomic::from_cyc(Q(1, 4)));
    CHECK((a / a).to_cyc() == Q(1));
    CHECK((a - a).is_zero());
    CHECK((a + a).to_cyc() == a.to_cyc() * mpq_class(2));
    CHECK(a.conj().to_cyc() == a.to_cyc().conj());
    CHECK(ScaledCyclotomic(Q(4), 2, mpq_class(1)) == ScaledCyclotomic(Q(1), 2, mpq_class(3)));
    CHECK(ScaledCyclotomic().is_zero());
    std::mt19937 rng(77);
    for (int it = 0; it < 100; ++it) {
        long qb = std::vector<long>{2, 3, 5, 9}[rng() % 4];
        auto u = random_cyc(rng, 8), w = random_cyc(rng, 12);
        if (u.is_zero() || w.is_zero()) continue;
        ScaledCyclotomic x(u, qb, mpq_class(long(rng() % 7) - 3, 2)), y(w, qb, mpq_class(long(rng() % 7) - 3, 2));
        CHECK((x * y).to_cyc() == x.to_cyc() * y.to_cyc());
        CHECK((x + y).to_cyc() == x.to_cyc() + y.to_cyc());
        CHECK((x / y).to_cyc() == x.to_cyc() / y.to_cyc());
    }
}
