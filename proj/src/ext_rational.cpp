#include "manin/ext_rational.hpp"

#include <ostream>
#include <stdexcept>

namespace manin {

ExtRational::ExtRational(long num, long den) : q_(num, den), inf_(false) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    q_.canonicalize();
}

ExtRational ExtRational::infinity() {
    ExtRational r;
    r.inf_ = true;
    return r;
}

const mpq_class& ExtRational::value() const {
    if (inf_) throw std::logic_error("value() of infinity");
    return q_;
}

std::string ExtRational::str() const {
    if (inf_) return "inf";
    return q_.get_str();
}

ExtRational ExtRational::parse(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "oo") return infinity();
    if (s.empty()) throw std::invalid_argument("empty rational");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return ExtRational(q);
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return ExtRational::infinity();
    return ExtRational(mpq_class(a.q_ + b.q_));
}

ExtRational operator-(const ExtRational& a, const ExtRational& b) {
    if (b.inf_) throw std::logic_error("subtracting infinity");
    if (a.inf_) return a;
    return ExtRational(mpq_class(a.q_ - b.q_));
}

ExtRational operator*(const ExtRational& a, const mpq_class& c) {
    if (a.inf_) {
        if (sgn(c) < 0) throw std::logic_error("infinity times negative");
        if (sgn(c) == 0) return ExtRational(0);
        return a;
    }
    return ExtRational(mpq_class(a.q_ * c));
}

ExtRational ExtRational::operator-() const {
    if (inf_) throw std::logic_error("negating infinity");
    return ExtRational(mpq_class(-q_));
}

bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.q_ == b.q_;
}

bool operator<(const ExtRational& a, const ExtRational& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.q_ < b.q_;
}

ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }
ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const ExtRational& x) { return os << x.str(); }

}  // namespace manin
