#pragma once
// Small finite fields F_{p^f}. Elements are integers 0..q-1 whose base-p digits are
// polynomial coefficients (constant term = least significant digit).

#include <memory>
#include <vector>

namespace manin {

class FiniteField {
public:
    static std::shared_ptr<const FiniteField> get(long p, int f);

    long p() const { return p_; }
    int f() const { return f_; }
    long q() const { return q_; }
    // monic modulus, low degree first, f+1 entries in [0, p)
    const std::vector<long>& modulus() const { return g_; }
    // least element of order q-1 whose norm to F_p is the least primitive root mod p
    long generator() const { return gen_; }

    long add(long a, long b) const;
    long neg(long a) const;
    long mul(long a, long b) const;
    long pow(long a, long e) const;
    long inv(long a) const;
    long log(long a) const;  // a != 0, base generator()
    long exp(long j) const;
    long trace(long a) const;  // value in [0, p)
    long norm_to_prime(long a) const;
    std::vector<long> digits(long a) const;
    long from_digits(const std::vector<long>& d) const;

    FiniteField(long p, int f);

private:
    long poly_mul(long a, long b) const;
    long p_;
    int f_;
    long q_;
    std::vector<long> g_;
    long gen_ = 0;
    std::vector<long> log_, exp_;
};

// Least monic irreducible of degree f over F_p, comparing coefficient tuples
// (c_0, c_1, ..., c_{f-1}) lexicographically.
std::vector<long> least_irreducible(long p, int f);

}  // namespace manin
