#include "manin/ffield.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "manin/cyclotomic.hpp"

namespace manin {

namespace {

using Poly = std::vector<long>;

long pmod(long a, long p) { return ((a % p) + p) % p; }

// remainder of a modulo monic b over F_p
Poly poly_rem(Poly a, const Poly& b, long p) {
    int db = static_cast<int>(b.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
        long c = pmod(a[i], p);
        if (c == 0) continue;
        for (int k = 0; k <= db; ++k) a[i - db + k] = pmod(a[i - db + k] - c * b[k], p);
    }
    if (static_cast<int>(a.size()) > db) a.resize(db);
    return a;
}

bool has_monic_factor(const Poly& g, long p) {
    int f = static_cast<int>(g.size()) - 1;
    for (int d = 1; d <= f / 2; ++d) {
        long count = ipow(p, d);
        for (long n = 0; n < count; ++n) {
            Poly h(d + 1, 0);
            long m = n;
            for (int i = 0; i < d; ++i) {
                h[i] = m % p;
                m /= p;
            }
            h[d] = 1;
            Poly r = poly_rem(g, h, p);
            bool zero = true;
            for (long c : r)
                if (c) zero = false;
            if (zero) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<long> least_irreducible(long p, int f) {
    if (f < 1) throw std::invalid_argument("degree must be positive");
    long count = ipow(p, f);
    for (long n = 0; n < count; ++n) {
        // c_0 is the most significant key
        Poly g(f + 1, 0);
        long m = n;
        for (int i = f - 1; i >= 0; --i) {
            g[i] = m % p;
            m /= p;
        }
        g[f] = 1;
        if (f == 1 || !has_monic_factor(g, p)) {
            if (f > 1 && g[0] == 0) continue;
            return g;
        }
    }
    throw std::logic_error("no irreducible polynomial found");
}

FiniteField::FiniteField(long p, int f) : p_(p), f_(f), q_(ipow(p, f)) {
    if (!is_prime(p)) throw std::invalid_argument("FiniteField: p must be prime");
    g_ = least_irreducible(p, f);
    log_.assign(q_, -1);
    exp_.assign(q_ - 1, 0);
    // least primitive root of F_p; for f > 1 the generator must have this norm, so that
    // Teichmuller lifts for different f agree on the (p-1)-th roots of unity
    long g1 = 1;
    for (long c = 1; c < p; ++c) {
        long x = 1, ord = 0;
        do {
            x = x * c % p;
            ++ord;
        } while (x != 1);
        if (ord == p - 1) {
            g1 = c;
            break;
        }
    }
    long norm_exp = (q_ - 1) / (p - 1);
    for (long cand = 1; cand < q_; ++cand) {
        long x = 1, ord = 0, nrm = 0;
        do {
            x = poly_mul(x, cand);
            ++ord;
            if (ord == norm_exp) nrm = x;
        } while (x != 1 && ord < q_);
        if (ord == q_ - 1 && (f == 1 || nrm == g1)) {
            gen_ = cand;
            break;
        }
    }
    if (gen_ == 0) throw std::logic_error("no generator");
    long x = 1;
    for (long j = 0; j < q_ - 1; ++j) {
        exp_[j] = x;
        log_[x] = j;
        x = poly_mul(x, gen_);
    }
}

std::shared_ptr<const FiniteField> FiniteField::get(long p, int f) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::shared_ptr<const FiniteField>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(p, f);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ff = std::make_shared<const FiniteField>(p, f);
    cache.emplace(key, ff);
    return ff;
}

std::vector<long> FiniteField::digits(long a) const {
    std::vector<long> d(f_, 0);
    for (int i = 0; i < f_; ++i) {
        d[i] = a % p_;
        a /= p_;
    }
    return d;
}

long FiniteField::from_digits(const std::vector<long>& d) const {
    long a = 0;
    for (int i = f_ - 1; i >= 0; --i) a = a * p_ + pmod(i < static_cast<int>(d.size()) ? d[i] : 0, p_);
    return a;
}

long FiniteField::poly_mul(long a, long b) const {
    auto da = digits(a), db = digits(b);
    Poly c(2 * f_ - 1, 0);
    for (int i = 0; i < f_; ++i)
        for (int j = 0; j < f_; ++j) c[i + j] = (c[i + j] + da[i] * db[j]) % p_;
    return from_digits(poly_rem(c, g_, p_));
}

long FiniteField::add(long a, long b) const {
    auto da = digits(a), db = digits(b);
    for (int i = 0; i < f_; ++i) da[i] = (da[i] + db[i]) % p_;
    return from_digits(da);
}

long FiniteField::neg(long a) const {
    auto da = digits(a);
    for (auto& x : da) x = pmod(-x, p_);
    return from_digits(da);
}

long FiniteField::mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

long FiniteField::pow(long a, long e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    return exp_[mod_floor(log_[a] * (e % (q_ - 1)), q_ - 1)];
}

long FiniteField::inv(long a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return exp_[mod_floor(-log_[a], q_ - 1)];
}

long FiniteField::log(long a) const {
    if (a <= 0 || a >= q_) throw std::domain_error("log of zero");
    return log_[a];
}

long FiniteField::exp(long j) const { return exp_[mod_floor(j, q_ - 1)]; }

long FiniteField::trace(long a) const {
    long s = 0, x = a;
    for (int i = 0; i < f_; ++i) {
        s = add(s, x);
        x = pow(x, p_);
    }
    auto d = digits(s);
    for (int i = 1; i < f_; ++i)
        if (d[i] != 0) throw std::logic_error("trace not in prime field");
    return d[0];
}

long FiniteField::norm_to_prime(long a) const {
    if (a == 0) return 0;
    long e = (q_ - 1) / (p_ - 1);
    long n = pow(a, e);
    auto d = digits(n);
    return d[0];
}

}  // namespace manin
