#include "manin/whittaker.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "manin/gauss.hpp"
#include "manin/padic.hpp"

namespace manin {

namespace {

using Laurent = std::map<long, CycNum>;

ScaledCyclotomic rat(long p, const mpq_class& r) { return ScaledCyclotomic::from_cyc(CycNum(r), p); }

bool same_units(const LocalChar& a, const LocalChar& b) {
    return char_mul(a.unit_part(), char_inv(b.unit_part())).conductor() == 0;
}

mpq_class sigma_of(const RepDescriptor& pi, const std::optional<ExtRational>& s) {
    if (s) return s->value();
    if (pi.sigma_val) return pi.sigma_val->value();
    return 0;
}

WhittakerVal zero_val(long p) {
    WhittakerVal w;
    w.exact = rat(p, 0);
    return w;
}

WhittakerVal exact_val(long p, const ScaledCyclotomic& x, bool ambiguous = false) {
    WhittakerVal w;
    w.exact = x;
    w.valuation = valuation_of_scaled(p, x);
    w.unit_ambiguous = ambiguous;
    return w;
}

WhittakerVal val_only(const ExtRational& v, bool lower) {
    WhittakerVal w;
    w.valuation = v;
    w.lower_bound = lower;
    return w;
}

bool in_chi_set(const LocalChar& chi, long p, int ell) {
    return chi.p() == p && chi.pi_sign() == 1 && chi.conductor() <= ell;
}

// Sum of terms known by valuation only (plus exact values where available).
WhittakerVal combine(long p, const std::vector<WhittakerVal>& terms0) {
    std::vector<WhittakerVal> terms;
    for (const auto& t : terms0)
        if (!t.is_zero()) terms.push_back(t);
    if (terms.empty()) return zero_val(p);
    if (terms.size() == 1) return terms[0];
    bool all_exact = std::all_of(terms.begin(), terms.end(),
                                 [](const WhittakerVal& w) { return w.exact && !w.unit_ambiguous; });
    if (all_exact) {
        ScaledCyclotomic s = rat(p, 0);
        for (const auto& t : terms) s = s + *t.exact;
        return s.is_zero() ? zero_val(p) : exact_val(p, s);
    }
    ExtRational m = ExtRational::infinity();
    for (const auto& t : terms) m = min(m, t.valuation);
    int at_min = 0;
    bool min_is_exact = false;
    for (const auto& t : terms)
        if (t.valuation == m) {
            ++at_min;
            min_is_exact = !t.lower_bound;
        }
    return val_only(m, !(at_min == 1 && min_is_exact));
}

// Terms c_i chi_i(v) with unknown signs s_i = +-1; all sign patterns enumerated.
WhittakerVal sign_enumeration(long p, const std::vector<ScaledCyclotomic>& terms) {
    if (terms.empty()) return zero_val(p);
    WhittakerVal w;
    size_t n = terms.size();
    ExtRational lo = ExtRational::infinity(), hi = ExtRational(-1000000);
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        ScaledCyclotomic s = rat(p, 0);
        for (size_t i = 0; i < n; ++i) s = (mask >> i & 1) ? s - terms[i] : s + terms[i];
        auto v = valuation_of_scaled(p, s);
        lo = min(lo, v);
        hi = max(hi, v);
        w.candidates.push_back(s);
    }
    w.valuation = lo;
    w.lower_bound = lo != hi;
    w.unit_ambiguous = true;
    if (n == 1) w.exact = terms[0];
    return w;
}

long count_conductor_exactly(long p, int ell) {
    if (ell <= 0) return 1;
    if (p == 2) return ell == 1 ? 0 : (ell == 2 ? 1 : ipow(2, ell - 2));
    if (ell == 1) return p - 2;
    return ipow(p, ell - 2) * (p - 1) * (p - 1);
}

// W(diag(p^r, 1))
CycNum diag_value(int a, long p, long r) {
    if (r < 0) return CycNum();
    if (a == 0) {
        // not needed: unramified pi never reaches here
        throw std::invalid_argument("diag_value: a = 0");
    }
    if (a == 1) return CycNum(mpq_class(1) / mpq_class(mpz_class(ipow(p, r))));
    return r == 0 ? CycNum(mpq_class(1)) : CycNum();
}

void add_to(Laurent& L, long e, const CycNum& c) {
    if (c.is_zero()) return;
    auto it = L.find(e);
    if (it == L.end()) L.emplace(e, c);
    else {
        it->second = it->second + c;
        if (it->second.is_zero()) L.erase(it);
    }
}

Laurent mul(const Laurent& A, const Laurent& B) {
    Laurent r;
    for (const auto& [ea, ca] : A)
        for (const auto& [eb, cb] : B) add_to(r, ea + eb, ca * cb);
    return r;
}

bool laurent_equal(const Laurent& A, const Laurent& B) {
    Laurent d = A;
    for (const auto& [e, c] : B) add_to(d, e, -c);
    return d.empty();
}

WhittakerVal coeff_type3(const RepDescriptor& pi, long t, int ell, const LocalChar& chi) {
    long p = pi.p;
    LocalChar chi_u = chi.unit_part(), mu_u = pi.mu.unit_part();
    ScaledCyclotomic G = ScaledCyclotomic::from_cyc(gauss_sum(char_inv(chi_u), -ell), p);
    ScaledCyclotomic c;
    if (same_units(chi_u, mu_u)) {
        if (t == -2) c = G.times_qpow(-1);
        else if (t >= -1) c = (G * rat(p, -(mpq_class(p) * p - 1))).times_qpow(-(t + 3));
        else return zero_val(p);
    } else {
        if (t != -2 * char_mul(chi_u, mu_u).conductor()) return zero_val(p);
        c = eps_factor(char_mul(char_inv(chi_u), mu_u)).pow(2) * G;
    }
    // an unramified quadratic twist contributes mu(p)^t
    if (pi.mu.pi_sign() < 0 && (t % 2 != 0)) c = -c;
    return c.is_zero() ? zero_val(p) : exact_val(p, c);
}

WhittakerVal coeff_type1a(const RepDescriptor& pi, long t, int ell, const LocalChar& chi) {
    long p = pi.p;
    int a = pi.a;
    if (chi.conductor() == 0) {
        if (ell == 1 && t == -a) return exact_val(p, rat(p, mpq_class(-1, p - 1)), true);
        return zero_val(p);
    }
    if (chi.conductor() != ell) return zero_val(p);
    auto tc = twist_conductor(pi, chi);
    int a0 = pi.a0 ? *pi.a0 : default_a0(pi);
    if (tc.exact && t != -tc.bound) return zero_val(p);
    if (!tc.exact && (t < -a || t > -a0)) return zero_val(p);
    mpq_class c1 = mpq_class(1, 2) + mpq_class(1, p - 1);
    if (a == 2) return val_only(ExtRational(mpq_class(-1) + c1), true);
    if (2 * ell < a) {
        if (ell == 1) return val_only(ExtRational(1, p - 1), true);
        return val_only(ExtRational(mpq_class(1) - mpq_class(ell, 2)), false);
    }
    return val_only(ExtRational(mpq_class(1) - mpq_class(a, 4)), !tc.exact);
}

WhittakerVal coeff_type4(const RepDescriptor& pi, long t, int ell, const LocalChar& chi) {
    long p = pi.p;
    mpq_class sv = sigma_of(pi, std::nullopt);
    LocalChar chi_u = chi.unit_part(), mu = pi.mu;
    LocalChar chi_inv = char_inv(chi_u);
    if (!same_units(chi_u, mu)) {
        if (t != -2 * char_mul(chi_u, mu).conductor()) return zero_val(p);
        auto G = ScaledCyclotomic::from_cyc(gauss_sum(chi_inv, -ell), p);
        auto c = eps_factor(char_mul(chi_inv, mu)).pow(2) * G;
        return c.is_zero() ? zero_val(p) : exact_val(p, c);
    }
    if (t < -2) return zero_val(p);
    if (t == -2) {
        auto c = ScaledCyclotomic::from_cyc(gauss_sum(chi_inv, -ell), p).times_qpow(-1);
        return c.is_zero() ? zero_val(p) : exact_val(p, c);
    }
    ExtRational vG = gauss_valuation_formula(chi_inv, -ell);
    if (vG.is_inf()) return zero_val(p);
    // q^{-sigma m} + q^{sigma m} - ...: the extreme terms have valuation -+ m sv and are unique
    mpq_class m = t + 2;
    mpq_class v = vG.value() - 2 - mpq_class(t, 2) - m * sv;
    if (t == -1) v = vG.value() - mpq_class(3, 2) - sv;
    return val_only(ExtRational(v), sv == 0);
}

WhittakerVal coeff_type5(const RepDescriptor& pi, long t, int ell, const LocalChar& chi) {
    long p = pi.p;
    mpq_class sv = sigma_of(pi, std::nullopt);
    LocalChar chi_u = chi.unit_part(), mu = pi.mu, mu_inv = char_inv(pi.mu);
    LocalChar chi_inv = char_inv(chi_u);
    auto monomial = [&](mpq_class v, long sigma_coeff) {
        long ac = sigma_coeff < 0 ? -sigma_coeff : sigma_coeff;
        return val_only(ExtRational(v - ac * sv), ac != 0 && sv != 0);
    };
    bool is_mu = same_units(chi_u, mu), is_mu_inv = same_units(chi_u, mu_inv);
    if (is_mu || is_mu_inv) {
        LocalChar m1 = is_mu ? mu : mu_inv;  // mu^{+-1}
        LocalChar m2 = char_mul(char_inv(m1), char_inv(m1));  // mu^{-+2}
        int a2 = m2.conductor();
        mpq_class base = eps_valuation(m2).value() + eps_valuation(m1).value();
        if (t == -a2 - 1) return monomial(base - mpq_class(ell - 1, 2), a2 - 1);
        if (t >= -a2) return monomial(base - mpq_class(t + ell + a2, 2), t + 2 * a2);
        return zero_val(p);
    }
    int ap = char_mul(chi_u, mu).conductor(), am = char_mul(chi_u, mu_inv).conductor();
    if (t != -ap - am) return zero_val(p);
    ExtRational vG = gauss_valuation_formula(chi_inv, -ell);
    if (vG.is_inf()) return zero_val(p);
    LocalChar e1 = char_mul(chi_inv, mu_inv), e2 = char_mul(chi_inv, mu);
    if (am == ap && ipow(p, std::max(am, ell)) <= 1024) {
        // no power of q^sigma: the value itself is available
        auto c = eps_factor(e1) * eps_factor(e2) * ScaledCyclotomic::from_cyc(gauss_sum(chi_inv, -ell), p);
        return c.is_zero() ? zero_val(p) : exact_val(p, c);
    }
    mpq_class v = eps_valuation(e1).value() + eps_valuation(e2).value() + vG.value();
    return monomial(v, am - ap);
}

}  // namespace

ExtRational valuation_of_scaled(long p, const ScaledCyclotomic& x) {
    if (x.is_zero()) return ExtRational::infinity();
    ExtRational v = valuation_of_cyc(p, x.unit());
    if (x.qexp() == 0 || x.qbase() == 1) return v;
    long f = 0;
    for (long q = x.qbase(); q > 1; q /= p) {
        if (q % p) throw std::invalid_argument("valuation_of_scaled: qbase is not a power of p");
        ++f;
    }
    return v + ExtRational(mpq_class(x.qexp() * f));
}

CosetIndex CosetIndex::canonical(long p, int a, long t, int ell, long v) {
    if (ell < 0 || ell > a) throw std::invalid_argument("coset: ell out of range");
    if (v % p == 0) throw std::invalid_argument("coset: v must be a unit");
    int m = std::min(ell, a - ell);
    CosetIndex c;
    c.t = t;
    c.ell = ell;
    c.v = m == 0 ? 1 : mod_floor(v, ipow(p, m));
    return c;
}

std::pair<long, int> atkin_lehner_reflect(long t, int ell, int a) {
    if (ell < 0 || ell > a) throw std::invalid_argument("reflect: ell out of range");
    return {t + 2 * ell - a, a - ell};
}

WhittakerVal boundary_value(int a, long p, long t, int ell) {
    if (a < 1) throw std::invalid_argument("boundary_value: a must be >= 1");
    if (ell != 0 && ell != a) throw std::invalid_argument("boundary_value: ell must be 0 or a");
    if (a == 1) {
        long h = 1 + t + ell;
        if (t + ell < -1) return zero_val(p);
        return exact_val(p, ScaledCyclotomic(CycNum(mpq_class(1)), p, mpq_class(-h)), true);
    }
    if (t + ell == -a) return exact_val(p, rat(p, 1), true);
    return zero_val(p);
}

WhittakerVal boundary_value(const RepDescriptor& pi, long t, int ell) { return boundary_value(pi.a, pi.p, t, ell); }

bool is_vanishing(const RepDescriptor& pi, int a0, long t, int ell) {
    int a = pi.a;
    if (ell < 0 || ell > a) throw std::invalid_argument("is_vanishing: ell out of range");
    if (a == 1) return boundary_value(pi, t, ell).is_zero();
    long M = std::max(a, 2 * ell);
    bool sc = is_supercuspidal(pi.kind);
    bool half = 2 * ell == a;
    if (t < -M) return true;
    if (t > -M && !half) return true;
    if (sc && t > -a0) return true;
    if (pi.p != 2 && sc && t != -M) return true;
    if (pi.p == 2 && half) {
        switch (pi.kind) {
            case RepKind::Type1a:
            case RepKind::Type1b:
                if (a0 <= a - 1 && t <= -a) return true;
                if (a0 <= a - 2 && t <= -a + 1) return true;
                break;
            case RepKind::Type3:
            case RepKind::Type4:
                if (t <= -a + 1) return true;
                break;
            case RepKind::Type5:
                if (t <= -a + 2) return true;
                break;
            default: break;
        }
    }
    return false;
}

bool is_vanishing(const RepDescriptor& pi, long t, int ell) {
    return is_vanishing(pi, pi.a0 ? *pi.a0 : default_a0(pi), t, ell);
}

WhittakerVal coeff_c(const RepDescriptor& pi, long t, int ell, const LocalChar& chi) {
    if (!in_chi_set(chi, pi.p, ell)) throw std::invalid_argument("coeff_c: chi must lie in X_{<= l}");
    switch (pi.kind) {
        case RepKind::Type3:
            if (ell < 0 || ell > pi.a) throw std::invalid_argument("coeff_c: ell out of range");
            return coeff_type3(pi, t, ell, chi);
        case RepKind::Type1a:
        case RepKind::Type4:
        case RepKind::Type5:
            if (ell < 1 || 2 * ell > pi.a) throw std::invalid_argument("coeff_c: need 1 <= l <= a/2");
            if (pi.kind == RepKind::Type1a) return coeff_type1a(pi, t, ell, chi);
            if (pi.kind == RepKind::Type4) return coeff_type4(pi, t, ell, chi);
            return coeff_type5(pi, t, ell, chi);
        default: throw std::invalid_argument("coeff_c: no closed form for " + kind_name(pi.kind));
    }
}

namespace {

WhittakerVal assemble_type1b(const RepDescriptor& pi, long t, int ell, long v) {
    long p = 2;
    std::vector<ScaledCyclotomic> terms;
    if (ell == 1 && t == -pi.a) terms.push_back(rat(p, -1));
    if (ell >= 2) {
        for (const auto& chi : chars_of_conductor(2, ell)) {
            if (t != -twist_conductor(pi, chi).bound) continue;
            auto c = eps_factor(chi).times_qpow(mpq_class(1) - mpq_class(ell, 2)) *
                     ScaledCyclotomic::from_cyc(char_eval(chi, v), p);
            terms.push_back(c);
        }
    }
    return sign_enumeration(p, terms);
}

WhittakerVal assemble_type1a(const RepDescriptor& pi, long t, int ell, long v) {
    long p = pi.p;
    int a = pi.a;
    if (is_vanishing(pi, t, ell)) return zero_val(p);
    bool a0_known = pi.a0.has_value();
    if (p == 2 && ell == 3 && ((2 * ell < a && t == -a) || (a == 6 && t == -5))) {
        std::vector<ScaledCyclotomic> terms;
        for (const auto& chi : chars_of_conductor(2, 3))
            terms.push_back(eps_factor(chi).times_qpow(mpq_class(-1, 2)) *
                            ScaledCyclotomic::from_cyc(char_eval(chi, v), p));
        auto w = sign_enumeration(p, terms);
        if (a == 6 && !a0_known) w.lower_bound = true;
        return w;
    }
    if (p == 2 && a == 8 && ell == 4 && t == -7) return val_only(ExtRational(0), !a0_known);
    std::vector<WhittakerVal> terms;
    terms.push_back(coeff_type1a(pi, t, ell, LocalChar::trivial(p, ell)));
    // X_l as one class: the valuation rows are uniform over it, the twist conductors may not be
    long n = count_conductor_exactly(p, ell);
    mpq_class c1 = mpq_class(1, 2) + mpq_class(1, p - 1);
    if (n > 0) {
        if (a == 2) {
            if (t == -2) terms.push_back(val_only(ExtRational(c1 - 1), true));
        } else if (2 * ell < a) {
            if (t == -a) {
                if (ell == 1) terms.push_back(val_only(ExtRational(1, p - 1), true));
                else terms.push_back(val_only(ExtRational(1 - mpq_class(ell, 2)), n > 1));
            }
        } else {
            terms.push_back(val_only(ExtRational(1 - mpq_class(a, 4)), true));
        }
    }
    return combine(p, terms);
}

WhittakerVal assemble_sum(const RepDescriptor& pi, long t, int ell, long v) {
    std::vector<WhittakerVal> terms;
    for (const auto& chi : chars_upto(pi.p, ell)) {
        auto c = coeff_c(pi, t, ell, chi);
        if (c.is_zero()) continue;
        if (c.exact) c.exact = *c.exact * ScaledCyclotomic::from_cyc(char_eval(chi, v), pi.p);
        terms.push_back(c);
    }
    return combine(pi.p, terms);
}

}  // namespace

WhittakerVal assemble_W(const RepDescriptor& pi, long t, int ell, long v) {
    int a = pi.a;
    if (ell < 0 || ell > a) throw std::invalid_argument("assemble_W: ell out of range");
    if (v % pi.p == 0) throw std::invalid_argument("assemble_W: v must be a unit");
    if (pi.kind == RepKind::Type3) return assemble_sum(pi, t, ell, v);
    if (ell == 0 || ell == a) return boundary_value(pi, t, ell);
    if (2 * ell > a) {
        auto [t2, l2] = atkin_lehner_reflect(t, ell, a);
        auto w = assemble_W(pi, t2, l2, v);
        if (!w.is_zero()) {
            w.exact.reset();
            w.candidates.clear();
            w.unit_ambiguous = true;
        }
        return w;
    }
    switch (pi.kind) {
        case RepKind::Type1a: return assemble_type1a(pi, t, ell, v);
        case RepKind::Type1b: return assemble_type1b(pi, t, ell, v);
        case RepKind::Type4:
        case RepKind::Type5: return assemble_sum(pi, t, ell, v);
        default: throw std::invalid_argument("assemble_W: unsupported type");
    }
}

std::optional<LocalBound> bound_T1(const RepDescriptor& pi, long t, int ell, int f_res,
                                   std::optional<ExtRational> sigma_val) {
    long p = pi.p;
    int a = pi.a;
    if (p == 2) throw std::invalid_argument("bound_T1: p must be odd");
    if (a < 2) throw std::invalid_argument("bound_T1: a must be >= 2");
    if (ell < 0 || ell > a) throw std::invalid_argument("bound_T1: ell out of range");
    if (is_vanishing(pi, t, ell)) return LocalBound{ExtRational::infinity(), true};
    mpq_class f = f_res, sv = sigma_of(pi, sigma_val);
    mpq_class c1 = mpq_class(1, 2) + mpq_class(1, p - 1);
    int m = std::min(ell, a - ell);
    bool half = 2 * ell == a;
    bool edge = ell == 0 || ell == 1 || ell == a - 1 || ell == a;
    std::vector<mpq_class> rows;
    if (ell == 0 || ell == a) rows.push_back(0);
    if ((ell == 1 || ell == a - 1) && a > 2) rows.push_back(0);
    if (!edge && !half) rows.push_back(f * (1 - mpq_class(m, 2)));
    if (ell == 1 && a == 2 && t == -2) rows.push_back(-f + std::min(mpq_class(f / 2), c1));
    if (half && a > 2 && t == -a) rows.push_back(f * (1 - mpq_class(a, 4)));
    if (half) {
        mpq_class T = t;
        switch (pi.kind) {
            case RepKind::Type1a:
                if (a == 2) rows.push_back(-f + c1);
                break;
            case RepKind::Type3:
                if (a == 2) rows.push_back(-(T + 4) * f / 2 + std::min(mpq_class(-f * (T + 1) / 2), c1));
                break;
            case RepKind::Type4:
                if (a == 2) rows.push_back(-f - (T + 2) * sv + std::min(mpq_class(-f * (T + 1) / 2), c1));
                break;
            case RepKind::Type5:
                if (a == 2) rows.push_back(-f * (T + 4) / 2 + c1 - (T + 2) * sv);
                else rows.push_back(-f * std::max(mpq_class(T + a), mpq_class(mpq_class(a, 2) - 2)) / 2 - (T + a) * sv);
                break;
            default: break;
        }
    }
    if (rows.empty()) return std::nullopt;
    return LocalBound{ExtRational(*std::max_element(rows.begin(), rows.end())), false};
}

std::optional<LocalBound> bound_T2(const RepDescriptor& pi, int a0, long t, int ell,
                                   std::optional<ExtRational> sigma_val) {
    int a = pi.a;
    if (pi.p != 2) throw std::invalid_argument("bound_T2: p must be 2");
    if (a < 2) throw std::invalid_argument("bound_T2: a must be >= 2");
    if (ell < 0 || ell > a) throw std::invalid_argument("bound_T2: ell out of range");
    if (is_vanishing(pi, a0, t, ell)) return LocalBound{ExtRational::infinity(), true};
    mpq_class sv = sigma_of(pi, sigma_val), T = t;
    int m = std::min(ell, a - ell);
    bool half = 2 * ell == a;
    bool edge = ell == 0 || ell == 1 || ell == a - 1 || ell == a;
    auto eq = [](const ExtRational& x) { return LocalBound{x, true}; };
    std::vector<mpq_class> rows;
    if (edge) rows.push_back(0);
    if (!edge && !half) rows.push_back(1 - mpq_class(m, 2));
    if ((ell == 3 || ell == a - 3) && a > 6) rows.push_back(0);
    if (half && a > 2) {
        switch (pi.kind) {
            case RepKind::Type1a:
            case RepKind::Type1b:
                rows.push_back(1 - mpq_class(a, 4));
                if ((a == 6 || a == 8) && t == -a + 1) rows.push_back(0);
                break;
            case RepKind::Type3:
                if (a == 4 && t >= -2) return eq(ExtRational(-(T + 3)));
                if (a == 6 && t >= -2) return eq(ExtRational(-(T + mpq_class(7, 2))));
                if (a == 6 && t == -4) return eq(ExtRational(-1, 2));
                return eq(ExtRational::infinity());
            case RepKind::Type4:
                if (a == 4 && t >= -2) rows.push_back(-(T + 4) / 2 - (T + 2) * sv);
                else if (a == 6 && t >= -2) rows.push_back(-(T + 5) / 2 - (T + 2) * sv);
                else if (a == 6 && t == -4) return eq(ExtRational(-1, 2));
                else return eq(ExtRational::infinity());
                break;
            case RepKind::Type5:
                if (t >= -a / 2) rows.push_back((1 - T - a) / 2 - (T + a - 2) * sv);
                else if (t > -a + 2) rows.push_back(mpq_class(4 - a, 4) - (T + a - 2) * sv);
                else return eq(ExtRational::infinity());
                break;
            default: break;
        }
    }
    if (rows.empty()) return std::nullopt;
    return LocalBound{ExtRational(*std::max_element(rows.begin(), rows.end())), false};
}

std::optional<LocalBound> local_bound(const RepDescriptor& pi, long t, int ell, std::optional<ExtRational> sigma_val) {
    if (pi.p == 2) return bound_T2(pi, pi.a0 ? *pi.a0 : default_a0(pi), t, ell, sigma_val);
    return bound_T1(pi, t, ell, 1, sigma_val);
}

bool verify_basic_identity(const RepDescriptor& pi, int ell, const LocalChar& chi, long t_max) {
    if (pi.kind != RepKind::Type3) throw std::invalid_argument("basic identity: Type 3 only");
    if (ell < 0 || ell > pi.a) throw std::invalid_argument("basic identity: ell out of range");
    if (!in_chi_set(chi, pi.p, ell)) throw std::invalid_argument("basic identity: chi must lie in X_{<= l}");
    long p = pi.p;
    int a = pi.a;
    int s = pi.mu.pi_sign();
    int A = twist_conductor(pi, chi).bound;
    bool mu_branch = same_units(chi, pi.mu);
    const mpq_class q(p);

    Laurent series;
    CycNum c_last;
    for (long t = -3 * a - 4; t <= t_max; ++t) {
        auto c = coeff_c(pi, t, ell, chi);
        if (!c.exact) return false;
        CycNum cv = c.exact->to_cyc();
        add_to(series, t + A, cv);
        if (t == t_max) c_last = cv;
    }
    CycNum eps = mu_branch ? CycNum(mpq_class(-s))
                           : eps_factor(char_mul(chi.unit_part(), pi.mu)).pow(2).to_cyc();
    Laurent lhs_factor{{0, eps}}, rhs_factor{{0, CycNum(mpq_class(1))}};
    if (mu_branch) {
        add_to(lhs_factor, 1, eps * (mpq_class(-s) / q));
        add_to(rhs_factor, -1, CycNum(mpq_class(-s) / q));
    }
    Laurent lhs = mul(lhs_factor, series);

    Laurent zeta;
    LocalChar chi_inv = char_inv(chi.unit_part());
    for (long r = 0; r <= 3; ++r) add_to(zeta, -r, gauss_sum(chi_inv, r - ell) * diag_value(a, p, r));
    Laurent rhs = mul(rhs_factor, zeta);

    // truncating the sum at t_max leaves exactly one stray term on the left
    if (mu_branch) add_to(rhs, t_max + A + 1, eps * c_last * (mpq_class(-s) / q));
    return laurent_equal(lhs, rhs);
}

}  // namespace manin
