#include "manin/modcurve.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "manin/cyclotomic.hpp"

namespace manin {

namespace {

void need_divisor(long N, long L) {
    if (N <= 0 || L <= 0 || N % L != 0) throw std::invalid_argument("L must be a positive divisor of N");
}

long parse_long(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("bad integer: '" + s + "'");
    return std::stol(s);
}

}  // namespace

FactoredInt FactoredInt::of(long n) {
    if (n <= 0) throw std::invalid_argument("FactoredInt: n must be positive");
    FactoredInt f;
    f.factors = factorize(n);
    return f;
}

FactoredInt FactoredInt::parse(const std::string& s0) {
    std::string s;
    for (char c : s0)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("FactoredInt: empty");
    std::vector<std::pair<long, int>> acc;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '*')) {
        auto caret = part.find('^');
        long base = parse_long(part.substr(0, caret));
        long e = caret == std::string::npos ? 1 : parse_long(part.substr(caret + 1));
        if (base <= 0) throw std::invalid_argument("FactoredInt: factors must be positive");
        if (base == 1) continue;
        for (auto [q, k] : factorize(base)) acc.emplace_back(q, int(k * e));
    }
    std::sort(acc.begin(), acc.end());
    FactoredInt f;
    for (auto [q, k] : acc) {
        if (!f.factors.empty() && f.factors.back().first == q) f.factors.back().second += k;
        else if (k > 0) f.factors.emplace_back(q, k);
    }
    return f;
}

long FactoredInt::value() const {
    long v = 1;
    for (auto [q, k] : factors) v *= ipow(q, k);
    return v;
}

int FactoredInt::val(long p) const {
    for (auto [q, k] : factors)
        if (q == p) return k;
    return 0;
}

std::vector<long> FactoredInt::primes() const {
    std::vector<long> r;
    for (auto [q, k] : factors) r.push_back(q);
    return r;
}

std::string FactoredInt::str() const {
    if (factors.empty()) return "1";
    std::string s;
    for (auto [q, k] : factors) {
        if (!s.empty()) s += "*";
        s += std::to_string(q);
        if (k > 1) s += "^" + std::to_string(k);
    }
    return s;
}

std::vector<long> divisors(const FactoredInt& n) {
    std::vector<long> d{1};
    for (auto [q, k] : n.factors) {
        size_t m = d.size();
        long pk = 1;
        for (int i = 1; i <= k; ++i) {
            pk *= q;
            for (size_t j = 0; j < m; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<long> divisors(long n) { return divisors(FactoredInt::of(n)); }

long width(long N, long L) {
    need_divisor(N, L);
    return N / std::gcd(L * L, N);
}

long cusp_count(long N, long L) {
    need_divisor(N, L);
    return euler_phi(std::gcd(L, N / L));
}

long total_cusps(long N) {
    long s = 0;
    for (long L : divisors(N)) s += cusp_count(N, L);
    return s;
}

std::vector<CuspClass> cusp_classes(long N) {
    std::vector<CuspClass> r;
    for (long L : divisors(N)) r.push_back({N, L});
    return r;
}

Component component_of_cusp(long p, long N, long L) {
    need_divisor(N, L);
    return {p, val_of(p, L), val_of(p, N / L)};
}

long ram_index(long p, const Component& c) { return euler_phi(ipow(p, std::min(c.a, c.b))); }

long different_val(long p, const Component& c) {
    if (c.b == 0) return 0;
    if (c.a == 0) return c.b;
    int m = std::min(c.a, c.b);
    return ipow(p, m - 1) * (p * c.b - c.b - 1);
}

ExtRational integrality_threshold(long p, int valN, int valL) {
    if (valL < 0 || valL > valN) throw std::invalid_argument("threshold: need 0 <= valL <= valN");
    if (valL == 0) return ExtRational(-valN);
    if (valL == valN) return ExtRational(0);
    return ExtRational(mpq_class(-(valN - valL)) + mpq_class(1, p - 1));
}

}  // namespace manin
