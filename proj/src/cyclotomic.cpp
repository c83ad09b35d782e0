#include "manin/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace manin {

// ---------- integer helpers ----------

long euler_phi(long n) {
    if (n <= 0) throw std::invalid_argument("euler_phi: n must be positive");
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

long mod_floor(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

std::vector<std::pair<long, int>> factorize(long n) {
    if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int val_of(long p, long n) {
    if (n == 0) throw std::invalid_argument("val_of(0)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// ---------- cyclotomic polynomials ----------

namespace {

struct PhiEntry {
    std::vector<long> c;
    std::vector<std::pair<long, long>> nz;  // (degree, coeff) below the leading term
};

std::mutex phi_mu;
std::map<long, std::shared_ptr<const PhiEntry>> phi_cache;

std::shared_ptr<const PhiEntry> phi_entry(long M) {
    {
        std::lock_guard<std::mutex> lk(phi_mu);
        auto it = phi_cache.find(M);
        if (it != phi_cache.end()) return it->second;
    }
    // x^M - 1 divided by Phi_d for every proper divisor d
    std::vector<mpz_class> poly(M + 1, 0);
    poly[0] = -1;
    poly[M] = 1;
    for (long d = 1; d < M; ++d) {
        if (M % d) continue;
        auto sub = phi_entry(d);
        const auto& q = sub->c;
        long dq = static_cast<long>(q.size()) - 1;
        long dp = static_cast<long>(poly.size()) - 1;
        std::vector<mpz_class> quo(dp - dq + 1, 0);
        for (long i = dp; i >= dq; --i) {
            mpz_class c = poly[i];
            quo[i - dq] = c;
            if (c == 0) continue;
            for (long k = 0; k <= dq; ++k) poly[i - dq + k] -= c * q[k];
        }
        for (long k = 0; k < dq; ++k)
            if (poly[k] != 0) throw std::logic_error("cyclotomic division not exact");
        poly = std::move(quo);
    }
    auto e = std::make_shared<PhiEntry>();
    for (auto& z : poly) {
        if (!z.fits_slong_p()) throw std::overflow_error("cyclotomic coefficient too large");
        e->c.push_back(z.get_si());
    }
    long deg = static_cast<long>(e->c.size()) - 1;
    for (long d = 0; d < deg; ++d)
        if (e->c[d] != 0) e->nz.emplace_back(d, e->c[d]);
    std::lock_guard<std::mutex> lk(phi_mu);
    auto [it, _] = phi_cache.emplace(M, e);
    return it->second;
}

using i128 = __int128;

i128 to_i128(const mpz_class& z) {
    mpz_class a = abs(z);
    mpz_class hi = a >> 64;
    mpz_class lo = a - (hi << 64);
    unsigned long h = hi.get_ui(), l = lo.get_ui();
    i128 v = (static_cast<i128>(h) << 64) | static_cast<i128>(l);
    return sgn(z) < 0 ? -v : v;
}

mpz_class from_i128(i128 v) {
    bool neg = v < 0;
    unsigned __int128 a = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(a >> 64));
    mpz_class lo(static_cast<unsigned long>(a & 0xFFFFFFFFFFFFFFFFULL));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

// Reduce dense integer vector modulo Phi_M in place; result has length phi(M).
void reduce_mpz(std::vector<mpz_class>& a, const PhiEntry& ph) {
    long deg = static_cast<long>(ph.c.size()) - 1;
    for (long j = static_cast<long>(a.size()) - 1; j >= deg; --j) {
        if (a[j] == 0) continue;
        mpz_class c = a[j];
        for (auto& [d, k] : ph.nz) a[j - deg + d] -= c * k;
        a[j] = 0;
    }
    a.resize(deg);
}

// Returns false on overflow.
bool reduce_i128(std::vector<i128>& a, const PhiEntry& ph) {
    long deg = static_cast<long>(ph.c.size()) - 1;
    for (long j = static_cast<long>(a.size()) - 1; j >= deg; --j) {
        i128 c = a[j];
        if (c == 0) continue;
        for (auto& [d, k] : ph.nz) {
            i128 prod;
            if (__builtin_mul_overflow(c, static_cast<i128>(k), &prod)) return false;
            if (__builtin_sub_overflow(a[j - deg + d], prod, &a[j - deg + d])) return false;
        }
        a[j] = 0;
    }
    a.resize(deg);
    return true;
}

void reduce_long(std::vector<long>& a, const PhiEntry& ph, bool& ok) {
    long deg = static_cast<long>(ph.c.size()) - 1;
    for (long j = static_cast<long>(a.size()) - 1; j >= deg; --j) {
        long c = a[j];
        if (c == 0) continue;
        for (auto& [d, k] : ph.nz) {
            long prod;
            if (__builtin_mul_overflow(c, k, &prod) ||
                __builtin_sub_overflow(a[j - deg + d], prod, &a[j - deg + d])) {
                ok = false;
                return;
            }
        }
        a[j] = 0;
    }
    a.resize(deg);
}

}  // namespace

const std::vector<long>& cyclotomic_poly(long M) {
    if (M < 1) throw std::invalid_argument("cyclotomic_poly: M must be positive");
    return phi_entry(M)->c;
}

// ---------- CycNum ----------

CycNum::CycNum() : M_(1), den_(1), num_(1, 0) {}

CycNum::CycNum(long M) : M_(M), den_(1) {
    if (M < 1) throw std::invalid_argument("CycNum: modulus must be positive");
    num_.assign(euler_phi(M), 0);
}

CycNum::CycNum(const mpq_class& q, long M) : CycNum(M) {
    mpq_class c = q;
    c.canonicalize();
    num_[0] = c.get_num();
    den_ = c.get_den();
}

void CycNum::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& z : num_) z = -z;
    }
    mpz_class g = den_;
    for (auto& z : num_) {
        if (g == 1) break;
        if (z != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    }
    bool allzero = std::all_of(num_.begin(), num_.end(), [](const mpz_class& z) { return z == 0; });
    if (allzero) {
        den_ = 1;
        return;
    }
    if (g != 1) {
        den_ /= g;
        for (auto& z : num_) z /= g;
    }
}

CycNum CycNum::from_dense(long M, std::vector<mpz_class> dense, const mpz_class& den) {
    auto ph = phi_entry(M);
    long deg = static_cast<long>(ph->c.size()) - 1;
    if (static_cast<long>(dense.size()) < deg) dense.resize(deg, 0);
    reduce_mpz(dense, *ph);
    CycNum r(M);
    r.num_ = std::move(dense);
    r.den_ = den;
    r.normalize();
    return r;
}

std::vector<mpq_class> CycNum::coeffs() const {
    std::vector<mpq_class> out;
    out.reserve(num_.size());
    for (auto& z : num_) {
        mpq_class q(z, den_);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

mpq_class CycNum::coeff(long i) const {
    mpq_class q(num_.at(i), den_);
    q.canonicalize();
    return q;
}

bool CycNum::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& z) { return z == 0; });
}

bool CycNum::is_rational() const {
    for (size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

mpq_class CycNum::rational_value() const {
    if (!is_rational()) throw std::logic_error("not rational");
    mpq_class q(num_[0], den_);
    q.canonicalize();
    return q;
}

CycNum CycNum::rescale(long L) const {
    if (L == M_) return *this;
    if (L % M_ != 0) throw std::invalid_argument("rescale: target not a multiple");
    long k = L / M_;
    std::vector<mpz_class> dense(std::max<long>(L, 1), 0);
    for (size_t i = 0; i < num_.size(); ++i)
        if (num_[i] != 0) dense[i * k] = num_[i];
    return from_dense(L, std::move(dense), den_);
}

CycNum CycNum::galois(long k) const {
    k = mod_floor(k, M_);
    if (std::gcd(k, M_) != 1 && M_ > 1) throw std::invalid_argument("galois: k not a unit");
    std::vector<mpz_class> dense(M_, 0);
    for (size_t i = 0; i < num_.size(); ++i)
        if (num_[i] != 0) dense[(static_cast<long>(i) * k) % M_] += num_[i];
    return from_dense(M_, std::move(dense), den_);
}

CycNum CycNum::conj() const { return galois(M_ - 1); }

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& z : r.num_) z = -z;
    return r;
}

namespace {

void align(const CycNum& a, const CycNum& b, CycNum& x, CycNum& y) {
    long L = lcm_long(a.modulus(), b.modulus());
    x = a.rescale(L);
    y = b.rescale(L);
}

}  // namespace

CycNum operator+(const CycNum& a, const CycNum& b) {
    if (a.M_ != b.M_) {
        CycNum x, y;
        align(a, b, x, y);
        return x + y;
    }
    CycNum r(a.M_);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
    mpz_class fa = b.den_ / g, fb = a.den_ / g;
    r.den_ = a.den_ * fa;
    for (size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = a.num_[i] * fa + b.num_[i] * fb;
    r.normalize();
    return r;
}

CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

CycNum operator*(const CycNum& a, const mpq_class& c) {
    CycNum r = a;
    for (auto& z : r.num_) z *= c.get_num();
    r.den_ *= c.get_den();
    r.normalize();
    return r;
}

CycNum operator*(const CycNum& a, const CycNum& b) {
    if (a.M_ != b.M_) {
        CycNum x, y;
        align(a, b, x, y);
        return x * y;
    }
    if (a.is_rational()) return b * a.rational_value();
    if (b.is_rational()) return a * b.rational_value();
    auto ph = phi_entry(a.M_);
    long n = static_cast<long>(a.num_.size());
    size_t ba = 0, bb = 0;
    for (auto& z : a.num_) ba = std::max(ba, mpz_sizeinbase(z.get_mpz_t(), 2));
    for (auto& z : b.num_) bb = std::max(bb, mpz_sizeinbase(z.get_mpz_t(), 2));
    size_t blen = 0;
    for (long t = n; t > 0; t >>= 1) ++blen;
    if (ba + bb + blen < 100) {
        std::vector<i128> av(n), bv(n), cv(2 * n - 1, 0);
        for (long i = 0; i < n; ++i) {
            av[i] = to_i128(a.num_[i]);
            bv[i] = to_i128(b.num_[i]);
        }
        for (long i = 0; i < n; ++i) {
            if (av[i] == 0) continue;
            for (long j = 0; j < n; ++j) cv[i + j] += av[i] * bv[j];
        }
        if (reduce_i128(cv, *ph)) {
            CycNum r(a.M_);
            for (long i = 0; i < n; ++i) r.num_[i] = from_i128(cv[i]);
            r.den_ = a.den_ * b.den_;
            r.normalize();
            return r;
        }
    }
    std::vector<mpz_class> cv(2 * n - 1, 0);
    for (long i = 0; i < n; ++i) {
        if (a.num_[i] == 0) continue;
        for (long j = 0; j < n; ++j)
            if (b.num_[j] != 0) cv[i + j] += a.num_[i] * b.num_[j];
    }
    return CycNum::from_dense(a.M_, std::move(cv), a.den_ * b.den_);
}

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// returns (q, r) with a = q*b + r
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    trim(a);
    QPoly q;
    long db = static_cast<long>(b.size()) - 1;
    if (static_cast<long>(a.size()) - 1 >= db) q.assign(a.size() - db, 0);
    while (!a.empty() && static_cast<long>(a.size()) - 1 >= db) {
        long shift = static_cast<long>(a.size()) - 1 - db;
        mpq_class c = a.back() / b.back();
        q[shift] = c;
        for (long k = 0; k <= db; ++k) a[shift + k] -= c * b[k];
        trim(a);
    }
    return {q, a};
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

QPoly qsub(const QPoly& a, const QPoly& b) {
    QPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

}  // namespace

CycNum CycNum::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (is_rational()) return CycNum(mpq_class(1 / rational_value()), M_);
    long nzc = 0, pos = 0;
    for (size_t i = 0; i < num_.size(); ++i)
        if (num_[i] != 0) {
            ++nzc;
            pos = static_cast<long>(i);
        }
    if (nzc == 1) {
        mpq_class c = coeff(pos);
        return cyc_from_root(M_, -pos) * mpq_class(1 / c);
    }
    if (auto r = cyc_is_root_of_unity(*this)) return conj();
    // extended Euclid over Q[x]
    const auto& ph = cyclotomic_poly(M_);
    QPoly f(ph.begin(), ph.end());
    QPoly g = coeffs();
    trim(g);
    QPoly r0 = f, r1 = g, s0, s1{1};  // track coefficient of g
    while (!(r1.size() == 1)) {
        if (r1.empty()) throw std::logic_error("inverse: not coprime");
        auto [q, r] = qdivmod(r0, r1);
        QPoly s2 = qsub(s0, qmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    mpq_class c = r1[0];
    std::vector<mpz_class> dense;
    mpz_class den = 1;
    for (auto& x : s1) {
        mpq_class y = x / c;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), y.get_den_mpz_t());
    }
    for (auto& x : s1) {
        mpq_class y = x / c * den;
        dense.push_back(y.get_num());
    }
    return from_dense(M_, std::move(dense), den);
}

CycNum operator/(const CycNum& a, const CycNum& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (b.is_rational()) return a * mpq_class(1 / b.rational_value());
    return a * b.inverse();
}

CycNum CycNum::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum result(mpq_class(1), M_), base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

bool operator==(const CycNum& a, const CycNum& b) {
    if (a.M_ != b.M_) {
        CycNum x, y;
        align(a, b, x, y);
        return x == y;
    }
    return a.den_ == b.den_ && a.num_ == b.num_;
}

std::string CycNum::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        mpq_class c = coeff(static_cast<long>(i));
        bool neg = sgn(c) < 0;
        mpq_class ac = abs(c);
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (i == 0) {
            os << ac.get_str();
            continue;
        }
        if (ac != 1) os << ac.get_str() << "*";
        os << "z" << M_;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

CycNum cyc_from_root(long M, long j) {
    if (M < 1) throw std::invalid_argument("cyc_from_root: M must be positive");
    std::vector<long> counts(M, 0);
    counts[mod_floor(j, M)] = 1;
    return cyc_from_counts(M, counts, 1);
}

CycNum cyc_from_counts(long L, const std::vector<long>& counts, const mpq_class& scale) {
    if (static_cast<long>(counts.size()) != L) throw std::invalid_argument("counts size");
    auto ph = phi_entry(L);
    long deg = static_cast<long>(ph->c.size()) - 1;
    std::vector<long> a(counts);
    if (static_cast<long>(a.size()) < deg) a.resize(deg, 0);
    bool ok = true;
    reduce_long(a, *ph, ok);
    CycNum r(L);
    if (ok) {
        for (long i = 0; i < deg; ++i) r.num_[i] = a[i];
    } else {
        std::vector<mpz_class> z(counts.begin(), counts.end());
        if (static_cast<long>(z.size()) < deg) z.resize(deg, 0);
        reduce_mpz(z, *ph);
        r.num_ = std::move(z);
    }
    r.den_ = 1;
    r.normalize();
    return r * scale;
}

CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op) {
    switch (op) {
        case CycOp::add: return a + b;
        case CycOp::sub: return a - b;
        case CycOp::mul: return a * b;
        case CycOp::div: return a / b;
    }
    throw std::invalid_argument("bad op");
}

std::optional<std::pair<long, long>> cyc_is_root_of_unity(const CycNum& a) {
    if (!a.is_integral() || a.is_zero()) return std::nullopt;
    long M = a.modulus();
    long Mp = lcm_long(2, M);
    // locate the angle numerically, then confirm exactly
    long double re = 0, im = 0;
    const long double tau = 6.283185307179586476925286766559L;
    for (long i = 0; i < a.degree(); ++i) {
        const mpz_class& z = a.numerators()[i];
        if (z == 0) continue;
        long double c = z.get_d();
        re += c * std::cos(tau * i / M);
        im += c * std::sin(tau * i / M);
    }
    long double r = std::sqrt(re * re + im * im);
    if (std::fabs(r - 1) > 1e-6L) return std::nullopt;
    long double th = std::atan2(im, re);
    if (th < 0) th += tau;
    long j0 = std::lround(static_cast<double>(th * Mp / tau));
    for (long dj : {0L, 1L, -1L}) {
        long j = mod_floor(j0 + dj, Mp);
        if (cyc_from_root(Mp, j) == a) {
            long g = std::gcd(Mp, j);
            if (j == 0) return std::make_pair(1L, 0L);
            return std::make_pair(Mp / g, j / g);
        }
    }
    return std::nullopt;
}

namespace {
std::mutex sqrt_mu;
std::map<long, CycNum> sqrt_cache;
}  // namespace

CycNum sqrt_prime_cyc(long p) {
    if (!is_prime(p)) throw std::invalid_argument("sqrt_prime_cyc: p must be prime");
    {
        std::lock_guard<std::mutex> lk(sqrt_mu);
        auto it = sqrt_cache.find(p);
        if (it != sqrt_cache.end()) return it->second;
    }
    CycNum s;
    if (p == 2) {
        s = cyc_from_root(8, 1) + cyc_from_root(8, 7);
    } else {
        std::vector<long> counts(p, 0);
        // sum_a (a/p) zeta^a = sum_x zeta^{x^2}
        for (long x = 0; x < p; ++x) counts[(x * x) % p] += 1;
        CycNum g = cyc_from_counts(p, counts, 1);
        if (p % 4 == 1)
            s = g;
        else
            s = cyc_from_root(4, 3) * g;
    }
    if (s * s != CycNum(mpq_class(p))) throw std::logic_error("sqrt_prime_cyc self-check failed");
    std::lock_guard<std::mutex> lk(sqrt_mu);
    sqrt_cache.emplace(p, s);
    return s;
}

CycNum sqrt_prime_power_cyc(long p, long f) {
    if (f % 2 == 0) return CycNum(mpq_class(ipow(p, static_cast<int>(f / 2))));
    return sqrt_prime_cyc(p) * mpq_class(ipow(p, static_cast<int>((f - 1) / 2)));
}

// ---------- MpComplex ----------

namespace {
mpfr_prec_t bits_for(int digits) { return static_cast<mpfr_prec_t>((digits + 10) * 3.33) + 16; }
}  // namespace

MpComplex::MpComplex(int digits) : digits_(digits) {
    mpfr_init2(re_, bits_for(digits));
    mpfr_init2(im_, bits_for(digits));
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
}

MpComplex::MpComplex(const MpComplex& o) : digits_(o.digits_) {
    mpfr_init2(re_, mpfr_get_prec(o.re_));
    mpfr_init2(im_, mpfr_get_prec(o.im_));
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
}

MpComplex& MpComplex::operator=(const MpComplex& o) {
    if (this == &o) return *this;
    digits_ = o.digits_;
    mpfr_set_prec(re_, mpfr_get_prec(o.re_));
    mpfr_set_prec(im_, mpfr_get_prec(o.im_));
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
    return *this;
}

MpComplex::~MpComplex() {
    mpfr_clear(re_);
    mpfr_clear(im_);
}

MpComplex MpComplex::operator+(const MpComplex& o) const {
    MpComplex r(std::min(digits_, o.digits_));
    mpfr_add(r.re_, re_, o.re_, MPFR_RNDN);
    mpfr_add(r.im_, im_, o.im_, MPFR_RNDN);
    return r;
}

MpComplex MpComplex::operator-(const MpComplex& o) const {
    MpComplex r(std::min(digits_, o.digits_));
    mpfr_sub(r.re_, re_, o.re_, MPFR_RNDN);
    mpfr_sub(r.im_, im_, o.im_, MPFR_RNDN);
    return r;
}

MpComplex MpComplex::operator*(const MpComplex& o) const {
    MpComplex r(std::min(digits_, o.digits_));
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(r.re_));
    mpfr_mul(r.re_, re_, o.re_, MPFR_RNDN);
    mpfr_mul(t, im_, o.im_, MPFR_RNDN);
    mpfr_sub(r.re_, r.re_, t, MPFR_RNDN);
    mpfr_mul(r.im_, re_, o.im_, MPFR_RNDN);
    mpfr_mul(t, im_, o.re_, MPFR_RNDN);
    mpfr_add(r.im_, r.im_, t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
}

double MpComplex::abs_d() const { return std::hypot(re_d(), im_d()); }

bool MpComplex::abs_below_pow10(int k) const {
    mpfr_t a, b, bound;
    mpfr_prec_t pr = mpfr_get_prec(re_);
    mpfr_inits2(pr, a, b, bound, static_cast<mpfr_ptr>(nullptr));
    mpfr_hypot(a, re_, im_, MPFR_RNDU);
    mpfr_set_si(b, 10, MPFR_RNDN);
    mpfr_pow_si(bound, b, -k, MPFR_RNDN);
    bool res = mpfr_less_p(a, bound);
    mpfr_clears(a, b, bound, static_cast<mpfr_ptr>(nullptr));
    return res;
}

double MpComplex::re_d() const { return mpfr_get_d(re_, MPFR_RNDN); }
double MpComplex::im_d() const { return mpfr_get_d(im_, MPFR_RNDN); }

std::string MpComplex::str(int shown) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rf%+.*Rfi", shown, re_, shown, im_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

MpComplex cyc_complex_embed(const CycNum& a, int digits) {
    if (digits < 1) throw std::invalid_argument("digits must be positive");
    MpComplex r(digits);
    mpfr_prec_t pr = mpfr_get_prec(r.re());
    mpfr_t ang, s, c, coef, t, den;
    mpfr_inits2(pr, ang, s, c, coef, t, den, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(den, a.denom().get_mpz_t(), MPFR_RNDN);
    long M = a.modulus();
    for (long i = 0; i < a.degree(); ++i) {
        const mpz_class& z = a.numerators()[i];
        if (z == 0) continue;
        mpfr_const_pi(ang, MPFR_RNDN);
        mpfr_mul_si(ang, ang, 2 * i, MPFR_RNDN);
        mpfr_div_si(ang, ang, M, MPFR_RNDN);
        mpfr_sin_cos(s, c, ang, MPFR_RNDN);
        mpfr_set_z(coef, z.get_mpz_t(), MPFR_RNDN);
        mpfr_div(coef, coef, den, MPFR_RNDN);
        mpfr_mul(t, coef, c, MPFR_RNDN);
        mpfr_add(r.re(), r.re(), t, MPFR_RNDN);
        mpfr_mul(t, coef, s, MPFR_RNDN);
        mpfr_add(r.im(), r.im(), t, MPFR_RNDN);
    }
    mpfr_clears(ang, s, c, coef, t, den, static_cast<mpfr_ptr>(nullptr));
    return r;
}

// ---------- ScaledCyclotomic ----------

namespace {

long smallest_prime_factor(long q) {
    for (long d = 2; d * d <= q; ++d)
        if (q % d == 0) return d;
    return q;
}

long merge_qbase(long a, long b) {
    if (a == 1) return b;
    if (b == 1 || a == b) return a;
    throw std::invalid_argument("ScaledCyclotomic: mismatched q bases");
}

mpq_class qpow_int(long q, long n) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n < 0 ? -n : n));
    if (n >= 0) return mpq_class(z);
    return mpq_class(mpz_class(1), z);
}

}  // namespace

ScaledCyclotomic::ScaledCyclotomic(const CycNum& u, long qbase, const mpq_class& qexp)
    : unit_(u), qbase_(qbase), qexp_(qexp) {
    if (qbase < 1) throw std::invalid_argument("qbase must be positive");
    qexp_.canonicalize();
    if (qexp_.get_den() != 1 && qexp_.get_den() != 2)
        throw std::invalid_argument("qexp must be a half-integer");
    canon();
}

void ScaledCyclotomic::canon() {
    if (unit_.is_zero() || qbase_ == 1) {
        qexp_ = 0;
        return;
    }
    // floor of qexp
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), qexp_.get_num_mpz_t(), qexp_.get_den_mpz_t());
    long n = fl.get_si();
    if (n != 0) unit_ = unit_ * qpow_int(qbase_, n);
    qexp_ -= n;
}

CycNum ScaledCyclotomic::to_cyc() const {
    if (qexp_ == 0) return unit_;
    long p = smallest_prime_factor(qbase_);
    long f = 0;
    for (long q = qbase_; q > 1; q /= p) ++f;
    return unit_ * sqrt_prime_power_cyc(p, f);
}

ScaledCyclotomic ScaledCyclotomic::operator*(const ScaledCyclotomic& o) const {
    return ScaledCyclotomic(unit_ * o.unit_, merge_qbase(qbase_, o.qbase_), qexp_ + o.qexp_);
}

ScaledCyclotomic ScaledCyclotomic::operator/(const ScaledCyclotomic& o) const {
    return ScaledCyclotomic(unit_ / o.unit_, merge_qbase(qbase_, o.qbase_), qexp_ - o.qexp_);
}

ScaledCyclotomic ScaledCyclotomic::operator+(const ScaledCyclotomic& o) const {
    long q = merge_qbase(qbase_, o.qbase_);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (qexp_ == o.qexp_) return ScaledCyclotomic(unit_ + o.unit_, q, qexp_);
    return ScaledCyclotomic(to_cyc() + o.to_cyc(), q, 0);
}

ScaledCyclotomic ScaledCyclotomic::operator-() const {
    return ScaledCyclotomic(-unit_, qbase_, qexp_);
}

ScaledCyclotomic ScaledCyclotomic::operator-(const ScaledCyclotomic& o) const { return *this + (-o); }

ScaledCyclotomic ScaledCyclotomic::conj() const {
    return ScaledCyclotomic(unit_.conj(), qbase_, qexp_);
}

ScaledCyclotomic ScaledCyclotomic::pow(long e) const {
    return ScaledCyclotomic(unit_.pow(e), qbase_, qexp_ * e);
}

ScaledCyclotomic ScaledCyclotomic::times_qpow(const mpq_class& h) const {
    return ScaledCyclotomic(unit_, qbase_, qexp_ + h);
}

bool operator==(const ScaledCyclotomic& a, const ScaledCyclotomic& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.qbase_ == b.qbase_ && a.qexp_ == b.qexp_) return a.unit_ == b.unit_;
    return a.to_cyc() == b.to_cyc();
}

std::string ScaledCyclotomic::str() const {
    std::string u = unit_.str();
    if (qexp_ == 0) return u;
    return "(" + u + ")*" + std::to_string(qbase_) + "^(" + qexp_.get_str() + ")";
}

}  // namespace manin
