#pragma once
// Cusps of X_0(N) and the components of its fiber at p.

#include <string>
#include <utility>
#include <vector>

#include "manin/ext_rational.hpp"

namespace manin {

struct FactoredInt {
    std::vector<std::pair<long, int>> factors;  // sorted, exponents >= 1

    static FactoredInt of(long n);
    // "2^5*3", "96", "2^2 * 7"; throws std::invalid_argument
    static FactoredInt parse(const std::string& s);
    long value() const;
    int val(long p) const;
    std::vector<long> primes() const;
    std::string str() const;
};

struct CuspClass {
    long N;
    long L;  // denominator, L | N
};

struct Component {
    long p;
    int a;
    int b;
    friend bool operator==(const Component& x, const Component& y) {
        return x.p == y.p && x.a == y.a && x.b == y.b;
    }
};

std::vector<long> divisors(long n);
std::vector<long> divisors(const FactoredInt& n);

long width(long N, long L);
long cusp_count(long N, long L);
// Sum of cusp_count over L | N.
long total_cusps(long N);
std::vector<CuspClass> cusp_classes(long N);

Component component_of_cusp(long p, long N, long L);
long ram_index(long p, const Component& c);
long different_val(long p, const Component& c);
ExtRational integrality_threshold(long p, int valN, int valL);

}  // namespace manin
