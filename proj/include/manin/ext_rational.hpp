#pragma once
// Exact rational or +infinity. Used for every p-adic valuation and bound.

#include <gmpxx.h>
#include <iosfwd>
#include <string>

namespace manin {

class ExtRational {
public:
    ExtRational() : q_(0), inf_(false) {}
    ExtRational(long v) : q_(v), inf_(false) {}
    ExtRational(long num, long den);
    ExtRational(const mpq_class& q) : q_(q), inf_(false) { q_.canonicalize(); }

    static ExtRational infinity();

    bool is_inf() const { return inf_; }
    // Undefined for infinity.
    const mpq_class& value() const;

    std::string str() const;
    static ExtRational parse(const std::string& s);  // "n", "n/d", "inf"

    friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
    friend ExtRational operator-(const ExtRational& a, const ExtRational& b);  // b finite
    friend ExtRational operator*(const ExtRational& a, const mpq_class& c);    // c >= 0 when a is inf
    ExtRational operator-() const;  // finite only
    ExtRational& operator+=(const ExtRational& o) { return *this = *this + o; }

    friend bool operator==(const ExtRational& a, const ExtRational& b);
    friend bool operator<(const ExtRational& a, const ExtRational& b);
    friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
    friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
    friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

private:
    mpq_class q_;
    bool inf_;
};

ExtRational min(const ExtRational& a, const ExtRational& b);
ExtRational max(const ExtRational& a, const ExtRational& b);

std::ostream& operator<<(std::ostream& os, const ExtRational& x);

}  // namespace manin
