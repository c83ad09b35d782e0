#pragma once
// Characters of Q_p^x trivial on p (stored on (Z/p^n)^x), finite-field characters
// indexed by Teichmuller exponents, and additive characters of level zero.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "manin/cyclotomic.hpp"
#include "manin/ffield.hpp"

namespace manin {

struct GroupGen {
    long gen;    // residue mod p^n (p = 2: -1 is stored as 2^n - 1)
    long order;
};

// Generators of (Z/p^n)^x. Odd p: the least primitive root mod p^2.
// p = 2: (-1) for n = 2, (-1, 5) for n >= 3, nothing for n <= 1.
std::vector<GroupGen> char_group(long p, int n);
long unit_group_order(long p, int n);
long least_primitive_root_p2(long p);

// Exponents e_i with u = prod g_i^{e_i} mod p^n. Throws on non-units.
std::vector<long> unit_log(long p, int n, long u);

class LocalChar {
public:
    LocalChar() : LocalChar(2, 0, {}) {}
    // images[i]: chi(g_i) = zeta_{ord_i}^{images[i]}; pi_sign = chi(p) in {1, -1}
    LocalChar(long p, int n, std::vector<long> images, int pi_sign = 1);
    static LocalChar trivial(long p, int n = 0);

    long p() const { return p_; }
    int level() const { return n_; }
    const std::vector<long>& images() const { return img_; }
    int pi_sign() const { return pi_sign_; }
    long value_order() const { return vord_; }
    int conductor() const { return cond_; }
    bool is_trivial_on_units() const;

    // chi(u) = zeta_{value_order}^{exponent(u)}
    long exponent(long u) const;
    CycNum eval(long u) const;
    LocalChar at_level(int n) const;
    // same character with chi(p) forced to 1
    LocalChar unit_part() const { return LocalChar(p_, n_, img_, 1); }
    std::string str() const;

    friend bool operator==(const LocalChar& a, const LocalChar& b);
    friend bool operator!=(const LocalChar& a, const LocalChar& b) { return !(a == b); }
    friend bool operator<(const LocalChar& a, const LocalChar& b);

private:
    long p_;
    int n_;
    std::vector<long> img_;
    std::vector<GroupGen> gens_;
    int pi_sign_;
    long vord_;
    int cond_;
};

int conductor_exp(const LocalChar& chi);
CycNum char_eval(const LocalChar& chi, long u);
LocalChar char_mul(const LocalChar& a, const LocalChar& b);
LocalChar char_inv(const LocalChar& a);
long char_order(const LocalChar& a);  // includes the value at p

// All characters of (Z/p^n)^x, at level n.
std::vector<LocalChar> chars_at_level(long p, int n);
// X_a: conductor exactly a, stored at level a.
std::vector<LocalChar> chars_of_conductor(long p, int a);
// X_{<= l}, stored at level l.
std::vector<LocalChar> chars_upto(long p, int l);

// The eight quadratic characters of Q_2^x: "1", "b0", "b2", "b0b2", "b3", "b0b3", "b2b3", "b0b2b3".
LocalChar q2_quadratic(const std::string& label);
const std::vector<std::string>& q2_labels();
// Label of a quadratic character of Q_2^x, or "" if not quadratic.
std::string q2_label_of(const LocalChar& chi);

// chi = omega^{-alpha} on F_{p^f}^x
struct FiniteFieldChar {
    long p;
    int f;
    long alpha;
    long q() const { return ipow(p, f); }
    // chi(x) = zeta_{q-1}^{exponent(x)}
    long exponent(long x) const;
    bool is_trivial() const { return alpha == 0; }
};

long digit_sum_s(const FiniteFieldChar& chi);
FiniteFieldChar ff_char_mul(const FiniteFieldChar& a, const FiniteFieldChar& b);
FiniteFieldChar ff_char_inv(const FiniteFieldChar& a);
// Character of F_p^x obtained from a level-1 character of Q_p^x.
FiniteFieldChar ff_char_from_local(const LocalChar& chi);
// Restriction to the subfield of degree fsub, found by matching values.
FiniteFieldChar ff_restrict(const FiniteFieldChar& xi, int fsub);
// chi o Norm from the subfield of degree chi.f to F_{p^fbig}.
FiniteFieldChar ff_compose_norm(const FiniteFieldChar& chi, int fbig);

// psi(x) = exp(2 pi i a lambda(x)), c(psi) = 0
struct AdditiveChar {
    long p;
    long shift = 1;  // unit
};

CycNum psi_eval(const AdditiveChar& psi, const mpq_class& x);

}  // namespace manin
