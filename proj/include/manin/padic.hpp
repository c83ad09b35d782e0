#pragma once
// Truncated arithmetic in (Z/p^B)[u]/(g) [t]/(E), E(t) = Phi_{p^k}(1+t).
// Realizes a fixed embedding of Q(zeta_M), M | p^k (p^f - 1), into a p-adic field.

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <vector>

#include "manin/cyclotomic.hpp"
#include "manin/ext_rational.hpp"
#include "manin/ffield.hpp"

namespace manin {

class PadicContext;
using PadicCtx = std::shared_ptr<const PadicContext>;

class PadicContext : public std::enable_shared_from_this<PadicContext> {
public:
    PadicContext(long p, int f, int k, int B);

    long p() const { return p_; }
    int f() const { return f_; }
    int k() const { return k_; }
    int B() const { return B_; }
    int e() const { return e_; }
    long q() const { return q_; }
    size_t coords_size() const { return static_cast<size_t>(f_) * e_; }
    const mpz_class& modulus() const { return pB_; }
    const std::vector<mpz_class>& g() const { return g_; }  // monic, degree f
    const std::vector<mpz_class>& E() const { return E_; }  // monic, degree e
    const std::shared_ptr<const FiniteField>& field() const { return field_; }
    const std::vector<mpz_class>& teichmuller() const { return teich_; }  // f coords

    // unramified layer helpers (vectors of length f)
    std::vector<mpz_class> umul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const;
    std::vector<mpz_class> upow(std::vector<mpz_class> a, mpz_class e) const;
    void reduce_coeff(mpz_class& z) const;

    // cached powers (lazily built)
    const std::vector<mpz_class>& teich_power(long i) const;   // T^i, i in [0, q-1)
    const std::vector<mpz_class>& onet_power(long n) const;    // (1+t)^n, n in [0, p^k), e coords

private:
    long p_;
    int f_, k_, B_, e_;
    long q_;
    mpz_class pB_;
    std::vector<mpz_class> g_, E_, teich_;
    std::shared_ptr<const FiniteField> field_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<mpz_class>> tpow_, opow_;
};

// Default working precision: MANIN_PRECISION env var or 64 (at least 8).
int default_precision();

PadicCtx context_new(long p, int f, int k, int B);
// Context able to hold Q(zeta_M): k = v_p(M), f = order of p modulo the prime-to-p part.
PadicCtx context_for(long p, long M, int B = 0);

class PadicElement {
public:
    PadicElement() = default;
    explicit PadicElement(PadicCtx ctx);  // zero
    static PadicElement from_int(PadicCtx ctx, const mpz_class& n);

    const PadicCtx& ctx() const { return ctx_; }
    // coordinate of u^i t^j
    const mpz_class& coord(int i, int j) const { return c_[j * ctx_->f() + i]; }
    mpz_class& coord(int i, int j) { return c_[j * ctx_->f() + i]; }
    const std::vector<mpz_class>& coords() const { return c_; }
    std::vector<mpz_class>& coords() { return c_; }

    bool is_zero() const;
    PadicElement operator+(const PadicElement& o) const;
    PadicElement operator-(const PadicElement& o) const;
    PadicElement operator-() const;
    PadicElement operator*(const PadicElement& o) const;
    PadicElement scale(const mpz_class& n) const;
    PadicElement pow(long e) const;
    friend bool operator==(const PadicElement& a, const PadicElement& b);

private:
    PadicCtx ctx_;
    std::vector<mpz_class> c_;
};

PadicElement embed_root(const PadicCtx& ctx, long M, long j);
// Denominators must be prime to p.
PadicElement embed_cyc(const PadicCtx& ctx, const CycNum& a);
// The element t (i.e. zeta_{p^k} - 1).
PadicElement padic_t(const PadicCtx& ctx);

struct PadicValuation {
    ExtRational value;
    bool precision_exhausted = false;
};

// val_p normalized so that val(p) = 1.
ExtRational valuation(const PadicElement& x);
PadicValuation valuation_ex(const PadicElement& x);
// Same quantity by repeated division by t, tracking a certainty budget of e*B steps.
PadicValuation valuation_by_division(const PadicElement& x);

// Valuation of a cyclotomic number through a suitable context; p-parts of the
// denominator are scaled away first and added back.
ExtRational valuation_of_cyc(long p, const CycNum& a, int B = 0);

}  // namespace manin
