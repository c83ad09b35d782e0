#include "manin/manin.hpp"

#include <algorithm>
#include <stdexcept>

#include "manin/cyclotomic.hpp"
#include "manin/whittaker.hpp"

namespace manin {

namespace {

void check_vals(int valN, int valL) {
    if (valN < 0 || valL < 0 || valL > valN) throw std::invalid_argument("need 0 <= valL <= valN");
}

mpq_class width_term(int k, int n, int l) { return -mpq_class(k, 2) * (n - std::min(2 * l, n)); }

}  // namespace

ExtRational newform_cusp_bound(long p, int k, int valN, int valL) {
    check_vals(valN, valL);
    if (k < 2 || k % 2) throw std::invalid_argument("k must be even and >= 2");
    int n = valN, l = valL, m = std::min(l, n - l);
    mpq_class s;
    if (m == 0) s = 0;
    else if (m == 1 && n > 2) s = 0;
    else if (2 * l == n && l == 1) s = mpq_class(-1, 2);
    else s = 1 - mpq_class(m, 2);
    if (p == 2) {
        mpq_class h = mpq_class(k, 2);
        if (2 * l == n && l == 1) s = std::max(s, mpq_class(0));
        if (2 * l == n && l >= 2 && l <= 4) s = std::max(s, h);
        if (2 * l == n && l > 4) s = std::max(s, mpq_class(h + 1 - mpq_class(n, 4)));
        if (m == 3 && n > 6) s = std::max(s, mpq_class(0));
    }
    return ExtRational(width_term(k, n, l) + s);
}

ExtRational weight2_bound(long p, int valN, int valL) {
    check_vals(valN, valL);
    int n = valN, l = valL, m = std::min(l, n - l);
    mpq_class s;
    if (l == 0 || l == n) s = 0;
    else if (l == 1 && n == 2) s = std::max(mpq_class(1, 2), mpq_class(1, p - 1));
    else if ((l == 1 || l == n - 1) && n > 2) s = 1;
    else if (p == 2 && 2 * l == n && l >= 2 && l <= 4) s = 1 + mpq_class(n, 2);
    else if (p == 2 && 2 * l == n && l > 4) s = 2 + mpq_class(n, 4);
    else if (p == 2 && (l == 3 || l == n - 3) && n > 6) s = 3;
    else s = 1 + mpq_class(m, 2);
    ExtRational r(-(n - l) + s);
    if (r != newform_cusp_bound(p, 2, valN, valL))
        throw std::logic_error("weight2_bound disagrees with the general bound at p=" + std::to_string(p) +
                               " valN=" + std::to_string(valN) + " valL=" + std::to_string(valL));
    return r;
}

ExtRational localglobal_combine(const RepDescriptor& pi, int k, int valN, int valL) {
    check_vals(valN, valL);
    if (valN < 1 || pi.a != valN) throw std::invalid_argument("localglobal_combine: need a(pi) = valN >= 1");
    if (k < 2 || k % 2) throw std::invalid_argument("k must be even and >= 2");
    int n = valN, l = valL;
    ExtRational sv = pi.sigma_val ? *pi.sigma_val : ExtRational(mpq_class(k - 1, 2));
    std::vector<int> a0s{pi.a0 ? *pi.a0 : default_a0(pi)};
    if (pi.kind == RepKind::Type1a && pi.p == 2 && !pi.a0) a0s = twist_minimal_range(pi);
    long M = std::max(n, 2 * l);
    // the local bounds never fall faster than k tau / 2 grows, so this range suffices
    long tau_max = 2L * n + 2L * k + 4;
    ExtRational best = ExtRational::infinity();
    for (int a0 : a0s) {
        for (long tau = 0; tau <= tau_max; ++tau) {
            long t = tau - M;
            ExtRational b;
            if (n == 1) {
                b = boundary_value(pi, t, l).valuation;
            } else {
                if (is_vanishing(pi, a0, t, l)) continue;
                auto lb = pi.p == 2 ? bound_T2(pi, a0, t, l, sv) : bound_T1(pi, t, l, 1, sv);
                if (!lb) throw std::logic_error("no local bound row for " + pi.str());
                b = lb->value;
            }
            if (b.is_inf()) continue;
            best = min(best, b + ExtRational(mpq_class(k * tau, 2)));
        }
    }
    if (best.is_inf()) return best;
    return best + ExtRational(width_term(k, n, l));
}

RatSing rational_singularity(long p, const FactoredInt& N) {
    if (p >= 5) return RatSing::Rational;
    int v = N.val(p);
    if (v <= 2) return RatSing::Rational;
    long want = p == 3 ? 2 : 3;
    long mod = p == 3 ? 3 : 4;
    for (long q : N.primes())
        if (q % mod == want) return RatSing::Rational;
    return RatSing::Unknown;
}

std::vector<ManinRow> manin_report(const FactoredInt& N, const FactoredInt& deg, Family family) {
    std::vector<long> ps = N.primes();
    for (long q : deg.primes()) ps.push_back(q);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<ManinRow> rows;
    for (long p : ps) {
        ManinRow r;
        r.p = p;
        r.val_deg = deg.val(p);
        r.rat_sing = rational_singularity(p, N);
        r.correction = family == Family::X0 && r.rat_sing == RatSing::Unknown ? 1 : 0;
        r.bound = r.val_deg + r.correction;
        r.additive = N.val(p) >= 2;
        r.additive_eliminated = r.additive && r.bound == 0;
        rows.push_back(r);
    }
    return rows;
}

IntegralityResult integrality_check(long p, int valN) {
    IntegralityResult res{true, {}};
    for (int l = 0; l <= valN; ++l) {
        IntegralityRow r{l, weight2_bound(p, valN, l), integrality_threshold(p, valN, l), 0};
        r.margin = r.bound - r.threshold;
        if (r.margin < ExtRational(0)) res.ok = false;
        res.rows.push_back(r);
    }
    return res;
}

std::vector<BoundRow> bound_table(long N, int k, long p) {
    if (N < 1) throw std::invalid_argument("N must be positive");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    int n = N % p ? 0 : val_of(p, N);
    std::vector<BoundRow> rows;
    for (int l = 0; l <= n; ++l) {
        long L = ipow(p, l);
        BoundRow r;
        r.valL = l;
        r.width = width(N, L);
        r.count = 0;
        for (long d : divisors(N))
            if ((n == 0 ? 0 : val_of(p, d)) == l) r.count += cusp_count(N, d);
        r.component = component_of_cusp(p, N, L);
        r.ram = ram_index(p, r.component);
        r.different = different_val(p, r.component);
        r.threshold = integrality_threshold(p, n, l);
        r.bound = k == 2 ? weight2_bound(p, n, l) : newform_cusp_bound(p, k, n, l);
        r.margin = r.bound - r.threshold;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace manin
