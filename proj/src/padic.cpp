#include "manin/padic.hpp"

#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace manin {

namespace {

mpz_class mpz_pow(long p, long e) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return z;
}

long inv_mod(long a, long m) {
    if (m == 1) return 0;
    mpz_class r, A(a), Mz(m);
    A = ((A % Mz) + Mz) % Mz;
    if (!mpz_invert(r.get_mpz_t(), A.get_mpz_t(), Mz.get_mpz_t()))
        throw std::invalid_argument("inv_mod: not invertible");
    return r.get_si();
}

}  // namespace

int default_precision() {
    const char* s = std::getenv("MANIN_PRECISION");
    if (!s || !*s) return 64;
    try {
        int b = std::stoi(s);
        return b < 8 ? 8 : b;
    } catch (...) {
        return 64;
    }
}

PadicContext::PadicContext(long p, int f, int k, int B) : p_(p), f_(f), k_(k), B_(B) {
    if (!is_prime(p)) throw std::invalid_argument("padic context: p must be prime");
    if (f < 1 || k < 0 || B < 8) throw std::invalid_argument("padic context: need f>=1, k>=0, B>=8");
    e_ = k == 0 ? 1 : static_cast<int>(euler_phi(ipow(p, k)));
    q_ = ipow(p, f);
    pB_ = mpz_pow(p, B);
    field_ = FiniteField::get(p, f);
    for (long c : field_->modulus()) g_.push_back(mpz_class(c));

    if (k == 0) {
        E_ = {0, 1};
    } else {
        // Taylor shift of Phi_{p^k}(x) to x = 1 + t, by Horner
        const auto& ph = cyclotomic_poly(ipow(p, k));
        std::vector<mpz_class> r{0};
        for (long d = static_cast<long>(ph.size()) - 1; d >= 0; --d) {
            std::vector<mpz_class> nr(r.size() + 1, 0);
            for (size_t i = 0; i < r.size(); ++i) {
                nr[i] += r[i];
                nr[i + 1] += r[i];
            }
            nr[0] += ph[d];
            while (nr.size() > 1 && nr.back() == 0) nr.pop_back();
            r = std::move(nr);
        }
        E_ = r;
        if (static_cast<int>(E_.size()) != e_ + 1) throw std::logic_error("Eisenstein degree mismatch");
    }

    // Teichmuller lift of the fixed generator: iterate x -> x^q until stable
    std::vector<mpz_class> x(f_, 0);
    auto d = field_->digits(field_->generator());
    for (int i = 0; i < f_; ++i) x[i] = d[i];
    for (int it = 0; it < B_ + 4; ++it) {
        auto y = upow(x, mpz_class(q_));
        if (y == x) break;
        x = std::move(y);
    }
    if (upow(x, mpz_class(q_)) != x) throw std::logic_error("Teichmuller iteration did not converge");
    teich_ = std::move(x);
}

void PadicContext::reduce_coeff(mpz_class& z) const { mpz_mod(z.get_mpz_t(), z.get_mpz_t(), pB_.get_mpz_t()); }

std::vector<mpz_class> PadicContext::umul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
    if (f_ == 1) {
        std::vector<mpz_class> r{a[0] * b[0]};
        reduce_coeff(r[0]);
        return r;
    }
    std::vector<mpz_class> c(2 * f_ - 1, 0);
    for (int i = 0; i < f_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f_; ++j) c[i + j] += a[i] * b[j];
    }
    for (int i = 2 * f_ - 2; i >= f_; --i) {
        if (c[i] == 0) continue;
        for (int l = 0; l < f_; ++l) c[i - f_ + l] -= c[i] * g_[l];
    }
    c.resize(f_);
    for (auto& z : c) reduce_coeff(z);
    return c;
}

std::vector<mpz_class> PadicContext::upow(std::vector<mpz_class> a, mpz_class e) const {
    std::vector<mpz_class> r(f_, 0);
    r[0] = 1;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = umul(r, a);
        e >>= 1;
        if (e > 0) a = umul(a, a);
    }
    return r;
}

const std::vector<mpz_class>& PadicContext::teich_power(long i) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (tpow_.empty()) {
        tpow_.reserve(q_ - 1);
        std::vector<mpz_class> x(f_, 0);
        x[0] = 1;
        for (long j = 0; j < q_ - 1; ++j) {
            tpow_.push_back(x);
            x = umul(x, teich_);
        }
    }
    return tpow_.at(mod_floor(i, q_ - 1));
}

const std::vector<mpz_class>& PadicContext::onet_power(long n) const {
    std::lock_guard<std::mutex> lk(mu_);
    long pk = ipow(p_, k_);
    if (opow_.empty()) {
        opow_.reserve(pk);
        std::vector<mpz_class> x(e_, 0);
        x[0] = 1;
        for (long j = 0; j < pk; ++j) {
            opow_.push_back(x);
            if (k_ == 0) break;
            // multiply by (1 + t), then reduce t^e with E
            mpz_class top = x[e_ - 1];
            for (int i = e_ - 1; i >= 1; --i) x[i] += x[i - 1];
            for (int i = 0; i < e_; ++i) {
                if (top != 0) x[i] -= top * E_[i];
                reduce_coeff(x[i]);
            }
        }
    }
    return opow_.at(mod_floor(n, pk));
}

PadicCtx context_new(long p, int f, int k, int B) {
    static std::mutex mu;
    static std::map<std::tuple<long, int, int, int>, PadicCtx> cache;
    auto key = std::make_tuple(p, f, k, B);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto ctx = std::make_shared<const PadicContext>(p, f, k, B);
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(key, ctx);
    return ctx;
}

PadicCtx context_for(long p, long M, int B) {
    if (B <= 0) B = default_precision();
    int k = 0;
    long m = M;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    int f = 1;
    if (m > 1) {
        long x = p % m;
        while (x != 1) {
            x = (x * p) % m;
            ++f;
        }
    }
    return context_new(p, f, k, B);
}

// ---------- elements ----------

PadicElement::PadicElement(PadicCtx ctx) : ctx_(std::move(ctx)) {
    c_.assign(static_cast<size_t>(ctx_->f()) * ctx_->e(), 0);
}

PadicElement PadicElement::from_int(PadicCtx ctx, const mpz_class& n) {
    PadicElement r(std::move(ctx));
    r.c_[0] = n;
    r.ctx_->reduce_coeff(r.c_[0]);
    return r;
}

bool PadicElement::is_zero() const {
    for (auto& z : c_)
        if (z != 0) return false;
    return true;
}

PadicElement PadicElement::operator+(const PadicElement& o) const {
    PadicElement r = *this;
    for (size_t i = 0; i < c_.size(); ++i) {
        r.c_[i] += o.c_[i];
        ctx_->reduce_coeff(r.c_[i]);
    }
    return r;
}

PadicElement PadicElement::operator-() const {
    PadicElement r = *this;
    for (auto& z : r.c_) {
        z = -z;
        ctx_->reduce_coeff(z);
    }
    return r;
}

PadicElement PadicElement::operator-(const PadicElement& o) const { return *this + (-o); }

PadicElement PadicElement::scale(const mpz_class& n) const {
    PadicElement r = *this;
    for (auto& z : r.c_) {
        z *= n;
        ctx_->reduce_coeff(z);
    }
    return r;
}

PadicElement PadicElement::operator*(const PadicElement& o) const {
    int f = ctx_->f(), e = ctx_->e();
    std::vector<std::vector<mpz_class>> tmp(2 * e - 1, std::vector<mpz_class>(f, 0));
    std::vector<mpz_class> av(f), bv(f);
    for (int j1 = 0; j1 < e; ++j1) {
        bool za = true;
        for (int i = 0; i < f; ++i) {
            av[i] = c_[j1 * f + i];
            if (av[i] != 0) za = false;
        }
        if (za) continue;
        for (int j2 = 0; j2 < e; ++j2) {
            bool zb = true;
            for (int i = 0; i < f; ++i) {
                bv[i] = o.c_[j2 * f + i];
                if (bv[i] != 0) zb = false;
            }
            if (zb) continue;
            if (f == 1) {
                tmp[j1 + j2][0] += av[0] * bv[0];
            } else {
                auto pr = ctx_->umul(av, bv);
                for (int i = 0; i < f; ++i) tmp[j1 + j2][i] += pr[i];
            }
        }
    }
    const auto& E = ctx_->E();
    for (int j = 2 * e - 2; j >= e; --j) {
        for (int i = 0; i < f; ++i) {
            mpz_class c = tmp[j][i];
            if (c == 0) continue;
            ctx_->reduce_coeff(c);
            for (int d = 0; d < e; ++d) tmp[j - e + d][i] -= c * E[d];
        }
    }
    PadicElement r(ctx_);
    for (int j = 0; j < e; ++j)
        for (int i = 0; i < f; ++i) {
            r.c_[j * f + i] = tmp[j][i];
            ctx_->reduce_coeff(r.c_[j * f + i]);
        }
    return r;
}

PadicElement PadicElement::pow(long e) const {
    if (e < 0) throw std::invalid_argument("negative power");
    PadicElement r = from_int(ctx_, 1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool operator==(const PadicElement& a, const PadicElement& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

PadicElement padic_t(const PadicCtx& ctx) {
    PadicElement r(ctx);
    if (ctx->k() == 0) return r;  // t = 0 when unramified
    if (ctx->e() == 1) {
        // p = 2, k = 1: E = t + 2, so t = -2
        r.coord(0, 0) = -2;
        ctx->reduce_coeff(r.coord(0, 0));
        return r;
    }
    r.coord(0, 1) = 1;
    return r;
}

namespace {

struct RootSplit {
    long pk_exp;  // exponent of (1+t)
    long t_exp;   // exponent of Teichmuller generator
};

struct RootPlan {
    long M, ppart, m, a, b, pscale, tscale;
};

RootPlan plan_root(const PadicCtx& ctx, long M) {
    if (M < 1) throw std::invalid_argument("embed_root: M must be positive");
    long p = ctx->p();
    long ppart = 1, m = M;
    int jp = 0;
    while (m % p == 0) {
        m /= p;
        ppart *= p;
        ++jp;
    }
    if (jp > ctx->k() || (ctx->q() - 1) % m != 0)
        throw std::invalid_argument("embed_root: modulus does not divide p^k(p^f-1)");
    RootPlan pl;
    pl.M = M;
    pl.ppart = ppart;
    pl.m = m;
    pl.a = inv_mod(m, ppart);  // a*m = 1 mod p^j
    pl.b = inv_mod(ppart, m);  // b*p^j = 1 mod m
    pl.pscale = ipow(p, ctx->k() - jp);
    pl.tscale = (ctx->q() - 1) / m;
    return pl;
}

RootSplit split_root(const RootPlan& pl, long j) {
    RootSplit s;
    s.pk_exp = pl.ppart == 1 ? 0 : pl.pscale * mod_floor((pl.a % pl.ppart) * mod_floor(j, pl.ppart), pl.ppart);
    s.t_exp = pl.m == 1 ? 0 : pl.tscale * mod_floor((pl.b % pl.m) * mod_floor(j, pl.m), pl.m);
    return s;
}

}  // namespace

PadicElement embed_root(const PadicCtx& ctx, long M, long j) {
    auto pl = plan_root(ctx, M);
    auto s = split_root(pl, j);
    const auto& R = ctx->onet_power(s.pk_exp);
    const auto& U = ctx->teich_power(s.t_exp);
    PadicElement r(ctx);
    int f = ctx->f();
    for (int jj = 0; jj < ctx->e(); ++jj)
        for (int i = 0; i < f; ++i) {
            r.coords()[jj * f + i] = R[jj] * U[i];
            ctx->reduce_coeff(r.coords()[jj * f + i]);
        }
    return r;
}

PadicElement embed_cyc(const PadicCtx& ctx, const CycNum& a) {
    auto pl = plan_root(ctx, a.modulus());
    mpz_class den = a.denom(), dinv;
    if (!mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), ctx->modulus().get_mpz_t()))
        throw std::invalid_argument("embed_cyc: denominator not prime to p");
    int e = ctx->e(), f = ctx->f();
    std::map<long, std::vector<mpz_class>> buckets;
    const auto& nums = a.numerators();
    for (long i = 0; i < a.degree(); ++i) {
        if (nums[i] == 0) continue;
        auto s = split_root(pl, i);
        auto& bk = buckets[s.t_exp];
        if (bk.empty()) bk.assign(e, 0);
        const auto& R = ctx->onet_power(s.pk_exp);
        for (int jj = 0; jj < e; ++jj)
            if (R[jj] != 0) bk[jj] += nums[i] * R[jj];
    }
    PadicElement r(ctx);
    for (auto& [texp, bk] : buckets) {
        const auto& U = ctx->teich_power(texp);
        for (int jj = 0; jj < e; ++jj) {
            if (bk[jj] == 0) continue;
            ctx->reduce_coeff(bk[jj]);
            for (int i = 0; i < f; ++i) r.coords()[jj * f + i] += bk[jj] * U[i];
        }
    }
    for (auto& z : r.coords()) {
        z *= dinv;
        ctx->reduce_coeff(z);
    }
    return r;
}

PadicValuation valuation_ex(const PadicElement& x) {
    const auto& ctx = x.ctx();
    int e = ctx->e(), f = ctx->f();
    long best = -1;
    mpz_class tmp;
    mpz_class P(ctx->p());
    for (int j = 0; j < e; ++j) {
        for (int i = 0; i < f; ++i) {
            const mpz_class& c = x.coord(i, j);
            if (c == 0) continue;
            long v = static_cast<long>(mpz_remove(tmp.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t()));
            long cand = static_cast<long>(e) * v + j;
            if (best < 0 || cand < best) best = cand;
        }
    }
    if (best < 0) return {ExtRational::infinity(), true};
    return {ExtRational(best, e), false};
}

ExtRational valuation(const PadicElement& x) { return valuation_ex(x).value; }

PadicValuation valuation_by_division(const PadicElement& x0) {
    if (x0.is_zero()) return {ExtRational::infinity(), true};
    const auto& ctx = x0.ctx();
    int e = ctx->e(), f = ctx->f();
    long p = ctx->p();
    long certainty = static_cast<long>(e) * ctx->B();
    PadicElement x = x0;
    const auto& E = ctx->E();
    long s = 0;
    while (certainty > 0) {
        bool unit = false;
        for (int i = 0; i < f; ++i)
            if (!mpz_divisible_ui_p(x.coord(i, 0).get_mpz_t(), p)) unit = true;
        if (unit) return {ExtRational(s, e), false};
        if (ctx->k() == 0) {
            for (auto& z : x.coords()) mpz_divexact_ui(z.get_mpz_t(), z.get_mpz_t(), p);
        } else {
            std::vector<mpz_class> y0(f);
            for (int i = 0; i < f; ++i) mpz_divexact_ui(y0[i].get_mpz_t(), x.coord(i, 0).get_mpz_t(), p);
            PadicElement nx(ctx);
            for (int j = 1; j < e; ++j)
                for (int i = 0; i < f; ++i) nx.coord(i, j - 1) = x.coord(i, j);
            // p = -t (t^{e-1} + E_{e-1} t^{e-2} + ... + E_1)
            for (int j = 1; j <= e; ++j)
                for (int i = 0; i < f; ++i) {
                    nx.coord(i, j - 1) -= y0[i] * E[j];
                    ctx->reduce_coeff(nx.coord(i, j - 1));
                }
            x = std::move(nx);
        }
        ++s;
        --certainty;
    }
    return {ExtRational::infinity(), true};
}

ExtRational valuation_of_cyc(long p, const CycNum& a, int B) {
    if (a.is_zero()) return ExtRational::infinity();
    if (B <= 0) B = default_precision();
    mpz_class den = a.denom(), t;
    mpz_class P(p);
    long v = static_cast<long>(mpz_remove(t.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t()));
    CycNum b = v ? a * mpq_class(mpz_pow(p, v)) : a;
    for (int attempt = 0; attempt < 6; ++attempt) {
        auto ctx = context_for(p, a.modulus(), B);
        auto pv = valuation_ex(embed_cyc(ctx, b));
        if (!pv.precision_exhausted) return pv.value - ExtRational(v);
        B *= 2;
    }
    throw std::runtime_error("valuation_of_cyc: precision exhausted");
}

}  // namespace manin
