#pragma once
// Exact arithmetic in Q(zeta_M), reduced modulo the cyclotomic polynomial.

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manin/ext_rational.hpp"

namespace manin {

long euler_phi(long n);
long lcm_long(long a, long b);
long mod_floor(long a, long m);
std::vector<std::pair<long, int>> factorize(long n);
bool is_prime(long n);
long ipow(long b, int e);
int val_of(long p, long n);  // p-adic valuation of n != 0

// Integer coefficients of Phi_M, low degree first. Cached, thread-safe.
const std::vector<long>& cyclotomic_poly(long M);

class CycNum {
public:
    CycNum();  // 0 in Q(zeta_1)
    explicit CycNum(long M);
    CycNum(const mpq_class& q, long M = 1);

    long modulus() const { return M_; }
    long degree() const { return static_cast<long>(num_.size()); }
    std::vector<mpq_class> coeffs() const;
    mpq_class coeff(long i) const;
    const mpz_class& denom() const { return den_; }
    const std::vector<mpz_class>& numerators() const { return num_; }

    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational_value() const;  // requires is_rational()
    bool is_integral() const { return den_ == 1; }

    CycNum rescale(long L) const;  // L a multiple of modulus
    CycNum conj() const;           // zeta -> zeta^{-1}
    CycNum inverse() const;
    CycNum pow(long e) const;
    CycNum galois(long k) const;   // zeta -> zeta^k, gcd(k, M) = 1

    CycNum operator-() const;
    friend CycNum operator+(const CycNum& a, const CycNum& b);
    friend CycNum operator-(const CycNum& a, const CycNum& b);
    friend CycNum operator*(const CycNum& a, const CycNum& b);
    friend CycNum operator/(const CycNum& a, const CycNum& b);
    friend CycNum operator*(const CycNum& a, const mpq_class& c);
    CycNum& operator+=(const CycNum& b) { return *this = *this + b; }
    CycNum& operator*=(const CycNum& b) { return *this = *this * b; }
    friend bool operator==(const CycNum& a, const CycNum& b);
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    std::string str() const;

    // Build from a dense integer vector of length L (entries may sit above the degree).
    static CycNum from_dense(long M, std::vector<mpz_class> dense, const mpz_class& den);
    friend CycNum cyc_from_counts(long L, const std::vector<long>& counts, const mpq_class& scale);

private:
    void normalize();
    long M_;
    mpz_class den_;
    std::vector<mpz_class> num_;
};

CycNum cyc_from_root(long M, long j);

// sum_j counts[j] * zeta_L^j * scale; counts.size() == L
CycNum cyc_from_counts(long L, const std::vector<long>& counts, const mpq_class& scale);

enum class CycOp { add, sub, mul, div };
CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op);

// (n, j) with a = zeta_n^j and gcd(n, j) = 1; absent if a is not a root of unity.
std::optional<std::pair<long, long>> cyc_is_root_of_unity(const CycNum& a);

// sqrt(p) as an element of a cyclotomic field.
CycNum sqrt_prime_cyc(long p);

// Arbitrary precision complex number; thin wrapper over two mpfr_t.
class MpComplex {
public:
    explicit MpComplex(int digits);
    MpComplex(const MpComplex& o);
    MpComplex& operator=(const MpComplex& o);
    ~MpComplex();

    int digits() const { return digits_; }
    mpfr_t& re() { return re_; }
    mpfr_t& im() { return im_; }
    const mpfr_t& re() const { return re_; }
    const mpfr_t& im() const { return im_; }

    MpComplex operator+(const MpComplex& o) const;
    MpComplex operator-(const MpComplex& o) const;
    MpComplex operator*(const MpComplex& o) const;
    double abs_d() const;
    // |this| < 10^{-k}
    bool abs_below_pow10(int k) const;
    std::string str(int shown = 20) const;
    double re_d() const;
    double im_d() const;

private:
    int digits_;
    mpfr_t re_, im_;
};

MpComplex cyc_complex_embed(const CycNum& a, int digits);

// value = unit * qbase^qexp with qexp in (1/2)Z. Canonical: qexp in {0, 1/2}.
class ScaledCyclotomic {
public:
    ScaledCyclotomic() : unit_(), qbase_(1), qexp_(0) {}
    ScaledCyclotomic(const CycNum& u, long qbase, const mpq_class& qexp);
    static ScaledCyclotomic from_cyc(const CycNum& u, long qbase = 1) {
        return ScaledCyclotomic(u, qbase, 0);
    }

    const CycNum& unit() const { return unit_; }
    long qbase() const { return qbase_; }
    const mpq_class& qexp() const { return qexp_; }
    bool is_zero() const { return unit_.is_zero(); }

    // Full expansion into a cyclotomic field (sqrt(q) written via Gauss sums).
    CycNum to_cyc() const;

    ScaledCyclotomic operator*(const ScaledCyclotomic& o) const;
    ScaledCyclotomic operator/(const ScaledCyclotomic& o) const;
    ScaledCyclotomic operator+(const ScaledCyclotomic& o) const;
    ScaledCyclotomic operator-(const ScaledCyclotomic& o) const;
    ScaledCyclotomic operator-() const;
    ScaledCyclotomic conj() const;
    ScaledCyclotomic pow(long e) const;
    ScaledCyclotomic times_qpow(const mpq_class& h) const;
    friend bool operator==(const ScaledCyclotomic& a, const ScaledCyclotomic& b);
    friend bool operator!=(const ScaledCyclotomic& a, const ScaledCyclotomic& b) {
        return !(a == b);
    }

    std::string str() const;

private:
    void canon();
    CycNum unit_;
    long qbase_;
    mpq_class qexp_;
};

// sqrt(p^f) expanded, f >= 0
CycNum sqrt_prime_power_cyc(long p, long f);

}  // namespace manin
