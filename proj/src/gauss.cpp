#include "manin/gauss.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "manin/padic.hpp"

namespace manin {

namespace {

using GaussKey = std::tuple<long, int, std::vector<long>, long, long>;

CycNum compute_gauss(const LocalChar& chi, long x_val, long shift) {
    long p = chi.p();
    int n = chi.level();
    long depth = x_val < 0 ? -x_val : 0;
    long m = std::max<long>(n, depth);
    if (m == 0) return CycNum(mpq_class(1));
    long pm = ipow(p, static_cast<int>(m));
    long V = chi.value_order();
    long pd = ipow(p, static_cast<int>(depth));
    long L = lcm_long(V, pd);
    std::vector<long> counts(L, 0);
    long sv = L / V, sp = L / pd;
    for (long y = 1; y < pm; ++y) {
        if (y % p == 0) continue;
        long e = chi.exponent(y) * sv;
        if (depth > 0) e += mod_floor(shift * (y % pd), pd) * sp;
        counts[e % L] += 1;
    }
    return cyc_from_counts(L, counts, mpq_class(1, euler_phi(pm)));
}

}  // namespace

const CycNum& gauss_sum(const LocalChar& chi, long x_val, long shift) {
    static std::mutex mu;
    static std::map<GaussKey, std::shared_ptr<CycNum>> cache;
    GaussKey key{chi.p(), chi.level(), chi.images(), x_val, mod_floor(shift, ipow(chi.p(), 8))};
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto v = std::make_shared<CycNum>(compute_gauss(chi, x_val, shift));
    std::lock_guard<std::mutex> lk(mu);
    auto [it, ins] = cache.emplace(key, v);
    return *it->second;
}

ExtRational gauss_valuation_formula(const LocalChar& chi, long x_val) {
    int a = chi.conductor();
    if (a == 0) {
        if (x_val >= 0) return 0;
        if (x_val == -1) return 0;
        return ExtRational::infinity();
    }
    if (x_val != -a) return ExtRational::infinity();
    if (a == 1) {
        auto ff = ff_char_from_local(chi);
        return ExtRational(digit_sum_s(ff), chi.p() - 1);
    }
    return ExtRational(mpq_class(1) - mpq_class(a, 2));
}

GaussValue gauss_bruteforce(const LocalChar& chi, long x_val, const AdditiveChar& psi, bool oracle) {
    if (psi.p != chi.p()) throw std::invalid_argument("gauss: mismatched primes");
    CycNum g = gauss_sum(chi, x_val, psi.shift);
    ExtRational v = oracle ? valuation_of_cyc(chi.p(), g) : gauss_valuation_formula(chi, x_val);
    return {ScaledCyclotomic::from_cyc(g, chi.p()), v, GaussProvenance::bruteforce};
}

GaussValue gauss_bruteforce(const LocalChar& chi, long x_val, bool oracle) {
    return gauss_bruteforce(chi, x_val, AdditiveChar{chi.p(), 1}, oracle);
}

CycNum finite_field_gauss(const FiniteFieldChar& chi, long shift) {
    auto F = FiniteField::get(chi.p, chi.f);
    long q = F->q(), p = chi.p;
    long L = lcm_long(q - 1, p);
    std::vector<long> counts(L, 0);
    for (long a = 1; a < q; ++a) {
        long e = chi.exponent(a) * (L / (q - 1)) + mod_floor(shift * F->trace(a), p) * (L / p);
        counts[e % L] -= 1;
    }
    return cyc_from_counts(L, counts, mpq_class(1));
}

ExtRational stickelberger_val(const FiniteFieldChar& chi) { return ExtRational(digit_sum_s(chi), chi.p - 1); }

ScaledCyclotomic eps_factor(const LocalChar& chi, const AdditiveChar& psi, const mpq_class& s) {
    int a = chi.conductor();
    long p = chi.p();
    mpq_class shift = a * (s - mpq_class(1, 2));
    mpq_class twice = 2 * shift;
    twice.canonicalize();
    if (twice.get_den() != 1) throw std::invalid_argument("eps_factor: a(chi)(s - 1/2) must be a half-integer");
    ScaledCyclotomic unit_eps;
    if (a == 0) {
        unit_eps = ScaledCyclotomic::from_cyc(CycNum(mpq_class(1)), p);
    } else {
        LocalChar inv = char_inv(chi.unit_part());
        CycNum g = gauss_sum(inv, -a, psi.shift) * mpq_class(p - 1);
        unit_eps = ScaledCyclotomic(g, p, mpq_class(a, 2) - 1);
        if (chi.pi_sign() < 0 && a % 2) unit_eps = -unit_eps;
    }
    mpq_class h = -shift;
    return unit_eps.times_qpow(h);
}

ScaledCyclotomic eps_factor(const LocalChar& chi) { return eps_factor(chi, AdditiveChar{chi.p(), 1}); }

ExtRational eps_valuation(const LocalChar& chi, int f_res) {
    int a = chi.conductor();
    if (a == 0 || a > 1) return 0;
    LocalChar sq = char_mul(chi.unit_part(), chi.unit_part());
    if (sq.conductor() == 0) return 0;
    auto ff = ff_char_from_local(char_inv(chi.unit_part()));
    return ExtRational(mpq_class(-f_res, 2) + mpq_class(digit_sum_s(ff), chi.p() - 1));
}

namespace {

long inv_mod_l(long a, long m) {
    mpz_class r, A(mod_floor(a, m)), M(m);
    if (!mpz_invert(r.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t())) throw std::invalid_argument("not invertible");
    return r.get_si();
}

// psi(num / p^d) as an exponent of zeta_{p^d}
long psi_exp(long shift, long num, long pd) { return mod_floor((shift % pd) * mod_floor(num, pd) % pd, pd); }

// chi(w) == psi(num / p^d) compared inside Q(zeta_lcm)
bool same_root(const LocalChar& chi, long w, long num, long pd, long shift) {
    long V = chi.value_order();
    long L = lcm_long(V, pd);
    long lhs = chi.exponent(w) * (L / V) % L;
    long rhs = psi_exp(shift, num, pd) * (L / pd) % L;
    return lhs == rhs;
}

}  // namespace

bool check_u(const LocalChar& chi, const AdditiveChar& psi, long u) {
    int a = chi.conductor();
    long p = chi.p();
    if (a < 2) throw std::invalid_argument("find_u: needs a(chi) >= 2");
    LocalChar c = chi.at_level(a);
    long pa = ipow(p, a);
    if (a % 2 == 0) {
        int h = a / 2;
        long ph = ipow(p, h);
        for (long x = 0; x < ph; ++x)
            if (!same_root(c, mod_floor(1 + ph * x, pa), u * x, ph, psi.shift)) return false;
        return true;
    }
    int h = (a + 1) / 2, d = (a - 1) / 2;
    long ph = ipow(p, h), pd = ipow(p, d);
    for (long x = 0; x < pd; ++x)
        if (!same_root(c, mod_floor(1 + ph * x, pa), u * x, pd, psi.shift)) return false;
    if (p != 2) {
        // chi(1 + p^d x) = psi(u (x / p^h - x^2 / (2p))) for x mod p^h
        long inv2 = inv_mod_l(2, ph);
        for (long x = 0; x < ph; ++x) {
            long num = mod_floor(x - (x * x % ph) * inv2 % ph * pd, ph);
            num = mod_floor(u % ph * num, ph);
            if (!same_root(c, mod_floor(1 + pd * x, pa), num, ph, psi.shift)) return false;
        }
    }
    return true;
}

long find_u(const LocalChar& chi, const AdditiveChar& psi) {
    int a = chi.conductor();
    if (a < 2) throw std::invalid_argument("find_u: needs a(chi) >= 2");
    long p = chi.p();
    long m = ipow(p, (a + 1) / 2);
    for (long u = 1; u < m; ++u) {
        if (u % p == 0) continue;
        if (check_u(chi, psi, u)) return u;
    }
    throw std::logic_error("find_u: no unit satisfies the identity for " + chi.str());
}

long find_u(const LocalChar& chi) { return find_u(chi, AdditiveChar{chi.p(), 1}); }

GaussValue gauss_closed_form(const LocalChar& chi0, const AdditiveChar& psi) {
    int a = chi0.conductor();
    if (a < 2) throw std::invalid_argument("gauss_closed_form: needs a(chi) >= 2");
    long p = chi0.p();
    LocalChar chi = chi0.at_level(a);
    long u = find_u(chi, psi);
    long pa = ipow(p, a);
    long V = chi.value_order();
    long L = lcm_long(V, pa);
    // psi(-u / p^a)
    long base = psi_exp(psi.shift, -u, pa) * (L / pa);
    std::vector<long> counts(L, 0);
    mpq_class scale;
    if (a % 2 == 0) {
        long e = base + chi.exponent(mod_floor(-u, pa)) * (L / V);
        counts[mod_floor(e, L)] += 1;
        scale = mpq_class(1, 1) / mpq_class(p - 1);
        for (int i = 0; i < a / 2 - 1; ++i) scale /= p;  // q^{1 - a/2}
    } else {
        int d = (a - 1) / 2;
        long pd = ipow(p, d), ph = ipow(p, d + 1);
        for (long t = 0; t < p; ++t) {
            long w = mod_floor(-u - u * t % pa * pd, pa);
            long e = base + chi.exponent(w) * (L / V) + psi_exp(psi.shift, -u * t, ph) * (L / ph);
            counts[mod_floor(e, L)] += 1;
        }
        scale = mpq_class(1) / mpq_class(p - 1);
        for (int i = 0; i < d; ++i) scale /= p;
    }
    CycNum g = cyc_from_counts(L, counts, scale);
    return {ScaledCyclotomic::from_cyc(g, p), gauss_valuation_formula(chi0, -a), GaussProvenance::closed_form};
}

GaussValue gauss_closed_form(const LocalChar& chi) { return gauss_closed_form(chi, AdditiveChar{chi.p(), 1}); }

std::pair<long, long> root_of_unity_certificate(const LocalChar& chi, const AdditiveChar& psi) {
    int a = chi.conductor();
    if (a < 2) throw std::invalid_argument("root_of_unity_certificate: needs a(chi) >= 2");
    long p = chi.p();
    CycNum g = gauss_sum(chi, -a, psi.shift);
    // z^2 = q^{a-2} (q-1)^2 G^2
    mpq_class c = mpq_class(p - 1) * mpq_class(p - 1);
    for (int i = 0; i < a - 2; ++i) c *= p;
    CycNum z2 = g * g * c;
    auto r = cyc_is_root_of_unity(z2);
    if (!r) throw std::logic_error("root_of_unity_certificate: z^2 is not a root of unity for " + chi.str());
    return *r;
}

std::pair<long, long> root_of_unity_certificate(const LocalChar& chi) {
    return root_of_unity_certificate(chi, AdditiveChar{chi.p(), 1});
}

}  // namespace manin
