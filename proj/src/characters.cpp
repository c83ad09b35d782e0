#include "manin/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace manin {

long least_primitive_root_p2(long p) {
    if (p == 2) return 3;
    long m = p * p, ord = p * (p - 1);
    auto fs = factorize(ord);
    for (long g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [r, e] : fs) {
            mpz_class x;
            mpz_class G(g), Mz(m);
            mpz_powm_ui(x.get_mpz_t(), G.get_mpz_t(), static_cast<unsigned long>(ord / r), Mz.get_mpz_t());
            if (x == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root");
}

std::vector<GroupGen> char_group(long p, int n) {
    if (n < 0) throw std::invalid_argument("char_group: negative level");
    std::vector<GroupGen> r;
    if (n == 0) return r;
    long pn = ipow(p, n);
    if (p == 2) {
        if (n >= 2) r.push_back({pn - 1, 2});
        if (n >= 3) r.push_back({5, ipow(2, n - 2)});
        return r;
    }
    r.push_back({least_primitive_root_p2(p) % pn, euler_phi(pn)});
    return r;
}

long unit_group_order(long p, int n) { return n == 0 ? 1 : euler_phi(ipow(p, n)); }

namespace {

struct LogTable {
    std::vector<std::vector<long>> logs;  // per residue, empty for non-units
};

const LogTable& log_table(long p, int n) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, std::shared_ptr<LogTable>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[{p, n}];
    if (slot) return *slot;
    auto t = std::make_shared<LogTable>();
    long pn = ipow(p, n);
    t->logs.assign(pn, {});
    auto gens = char_group(p, n);
    if (gens.empty()) {
        slot = t;
        return *slot;
    }
    if (gens.size() == 1) {
        long x = 1 % pn;
        for (long e = 0; e < gens[0].order; ++e) {
            t->logs[x] = {e};
            x = (x * gens[0].gen) % pn;
        }
    } else {
        long x = 1;
        for (long e1 = 0; e1 < gens[1].order; ++e1) {
            t->logs[x] = {0, e1};
            t->logs[(pn - x) % pn] = {1, e1};
            x = (x * 5) % pn;
        }
    }
    slot = t;
    return *slot;
}

long gcd_l(long a, long b) { return std::gcd(a, b); }

}  // namespace

std::vector<long> unit_log(long p, int n, long u) {
    long pn = ipow(p, n);
    long r = mod_floor(u, pn);
    if (u % p == 0) throw std::invalid_argument("unit_log: not a unit");
    auto gens = char_group(p, n);
    if (gens.empty()) return {};
    return log_table(p, n).logs[r];
}

LocalChar::LocalChar(long p, int n, std::vector<long> images, int pi_sign)
    : p_(p), n_(n), img_(std::move(images)), pi_sign_(pi_sign) {
    if (!is_prime(p)) throw std::invalid_argument("LocalChar: p must be prime");
    if (pi_sign != 1 && pi_sign != -1) throw std::invalid_argument("LocalChar: chi(p) must be +-1");
    gens_ = char_group(p, n);
    if (img_.size() != gens_.size()) throw std::invalid_argument("LocalChar: wrong number of images");
    vord_ = 1;
    for (size_t i = 0; i < gens_.size(); ++i) {
        img_[i] = mod_floor(img_[i], gens_[i].order);
        vord_ = lcm_long(vord_, gens_[i].order);
    }
    // conductor: least m with chi trivial on 1 + p^m
    cond_ = n_;
    for (int m = 0; m <= n_; ++m) {
        bool triv = true;
        if (m == 0) {
            for (long x : img_)
                if (x) triv = false;
        } else if (p_ == 2) {
            if (m == 1) {
                for (long x : img_)
                    if (x) triv = false;
            } else if (gens_.size() == 2) {
                // 1 + 2^m is generated by 5^{2^{m-2}}
                long s = ipow(2, m - 2);
                if ((img_[1] * s) % gens_[1].order) triv = false;
            }
        } else {
            long s = (p_ - 1) * ipow(p_, m - 1);
            if ((img_[0] * s) % gens_[0].order) triv = false;
        }
        if (triv) {
            cond_ = m;
            break;
        }
    }
}

LocalChar LocalChar::trivial(long p, int n) { return LocalChar(p, n, std::vector<long>(char_group(p, n).size(), 0)); }

bool LocalChar::is_trivial_on_units() const { return cond_ == 0; }

long LocalChar::exponent(long u) const {
    if (mod_floor(u, p_) == 0) throw std::invalid_argument("character evaluated at a non-unit");
    if (gens_.empty()) return 0;
    auto lg = unit_log(p_, n_, u);
    long e = 0;
    for (size_t i = 0; i < gens_.size(); ++i) e += (img_[i] * lg[i] % gens_[i].order) * (vord_ / gens_[i].order);
    return e % vord_;
}

CycNum LocalChar::eval(long u) const { return cyc_from_root(vord_, exponent(u)); }

LocalChar LocalChar::at_level(int n) const {
    if (n == n_) return *this;
    if (n < cond_) throw std::invalid_argument("at_level: below the conductor");
    auto ng = char_group(p_, n);
    std::vector<long> im(ng.size(), 0);
    if (p_ == 2) {
        // generators are (-1, 5) at every level that has them
        for (size_t i = 0; i < ng.size(); ++i) {
            if (i >= gens_.size()) continue;
            // value zeta_{o}^{img}: rewrite with the new order
            long o = gens_[i].order, no = ng[i].order;
            if (no % o == 0)
                im[i] = img_[i] * (no / o);
            else {
                if ((img_[i] * no) % o) throw std::logic_error("at_level: inconsistent");
                im[i] = img_[i] * no / o;
            }
        }
    } else if (!ng.empty() && !gens_.empty()) {
        long o = gens_[0].order, no = ng[0].order;
        if (no % o == 0)
            im[0] = img_[0] * (no / o);
        else {
            if ((img_[0] * no) % o) throw std::logic_error("at_level: inconsistent");
            im[0] = img_[0] * no / o;
        }
    }
    return LocalChar(p_, n, im, pi_sign_);
}

std::string LocalChar::str() const {
    if (p_ == 2) {
        auto l = q2_label_of(*this);
        if (!l.empty()) return l;
    }
    std::string s = "chi[p=" + std::to_string(p_) + ",n=" + std::to_string(n_) + ",img=";
    for (size_t i = 0; i < img_.size(); ++i) s += (i ? "," : "") + std::to_string(img_[i]);
    if (pi_sign_ < 0) s += ",pi=-1";
    return s + "]";
}

bool operator==(const LocalChar& a, const LocalChar& b) {
    if (a.p_ != b.p_ || a.pi_sign_ != b.pi_sign_) return false;
    int n = std::max(a.n_, b.n_);
    auto x = a.at_level(n), y = b.at_level(n);
    return x.img_ == y.img_;
}

bool operator<(const LocalChar& a, const LocalChar& b) {
    if (a.p_ != b.p_) return a.p_ < b.p_;
    if (a.cond_ != b.cond_) return a.cond_ < b.cond_;
    int n = std::max(a.n_, b.n_);
    auto x = a.at_level(n), y = b.at_level(n);
    if (x.img_ != y.img_) return x.img_ < y.img_;
    return a.pi_sign_ < b.pi_sign_;
}

int conductor_exp(const LocalChar& chi) { return chi.conductor(); }
CycNum char_eval(const LocalChar& chi, long u) { return chi.eval(u); }

LocalChar char_mul(const LocalChar& a, const LocalChar& b) {
    if (a.p() != b.p()) throw std::invalid_argument("char_mul: different primes");
    int n = std::max(a.level(), b.level());
    auto x = a.at_level(n), y = b.at_level(n);
    std::vector<long> im(x.images().size());
    for (size_t i = 0; i < im.size(); ++i) im[i] = x.images()[i] + y.images()[i];
    return LocalChar(a.p(), n, im, a.pi_sign() * b.pi_sign());
}

LocalChar char_inv(const LocalChar& a) {
    std::vector<long> im = a.images();
    for (auto& x : im) x = -x;
    return LocalChar(a.p(), a.level(), im, a.pi_sign());
}

long char_order(const LocalChar& a) {
    auto gens = char_group(a.p(), a.level());
    long o = a.pi_sign() < 0 ? 2 : 1;
    for (size_t i = 0; i < gens.size(); ++i) o = lcm_long(o, gens[i].order / gcd_l(a.images()[i], gens[i].order));
    return o;
}

std::vector<LocalChar> chars_at_level(long p, int n) {
    auto gens = char_group(p, n);
    std::vector<LocalChar> r;
    if (gens.empty()) {
        r.push_back(LocalChar::trivial(p, n));
        return r;
    }
    if (gens.size() == 1) {
        for (long e = 0; e < gens[0].order; ++e) r.emplace_back(p, n, std::vector<long>{e});
    } else {
        for (long e0 = 0; e0 < gens[0].order; ++e0)
            for (long e1 = 0; e1 < gens[1].order; ++e1) r.emplace_back(p, n, std::vector<long>{e0, e1});
    }
    return r;
}

std::vector<LocalChar> chars_of_conductor(long p, int a) {
    std::vector<LocalChar> r;
    for (auto& c : chars_at_level(p, a))
        if (c.conductor() == a) r.push_back(c);
    return r;
}

std::vector<LocalChar> chars_upto(long p, int l) {
    std::vector<LocalChar> r = chars_at_level(p, l);
    std::sort(r.begin(), r.end());
    return r;
}

const std::vector<std::string>& q2_labels() {
    static const std::vector<std::string> L = {"1", "b0", "b2", "b0b2", "b3", "b0b3", "b2b3", "b0b2b3"};
    return L;
}

LocalChar q2_quadratic(const std::string& label) {
    std::string s = label;
    if (s == "1" || s == "triv" || s.empty()) return LocalChar(2, 3, {0, 0}, 1);
    bool b0 = false, b2 = false, b3 = false;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != 'b' || i + 1 >= s.size()) throw std::invalid_argument("bad quadratic label: " + label);
        char d = s[i + 1];
        if (d == '0')
            b0 = !b0;
        else if (d == '2')
            b2 = !b2;
        else if (d == '3')
            b3 = !b3;
        else
            throw std::invalid_argument("bad quadratic label: " + label);
        i += 2;
    }
    // b2 <-> Q_2(sqrt(-1)): -1 -> -1, 5 -> 1; b3 <-> Q_2(sqrt 2): -1 -> 1, 5 -> -1
    return LocalChar(2, 3, {b2 ? 1 : 0, b3 ? 1 : 0}, b0 ? -1 : 1);
}

std::string q2_label_of(const LocalChar& chi) {
    if (chi.p() != 2 || chi.conductor() > 3) return "";
    auto c = chi.at_level(3);
    const auto& im = c.images();
    std::string s;
    if (chi.pi_sign() < 0) s += "b0";
    if (im[0]) s += "b2";
    if (im[1]) s += "b3";
    return s.empty() ? "1" : s;
}

long FiniteFieldChar::exponent(long x) const {
    auto F = FiniteField::get(p, f);
    long qm = F->q() - 1;
    return mod_floor(-alpha * (F->log(x) % qm), qm);
}

long digit_sum_s(const FiniteFieldChar& chi) {
    long s = 0, a = chi.alpha;
    for (int i = 0; i < chi.f; ++i) {
        s += a % chi.p;
        a /= chi.p;
    }
    return s;
}

FiniteFieldChar ff_char_mul(const FiniteFieldChar& a, const FiniteFieldChar& b) {
    if (a.p != b.p || a.f != b.f) throw std::invalid_argument("ff_char_mul: different fields");
    return {a.p, a.f, (a.alpha + b.alpha) % (a.q() - 1)};
}

FiniteFieldChar ff_char_inv(const FiniteFieldChar& a) { return {a.p, a.f, mod_floor(-a.alpha, a.q() - 1)}; }

FiniteFieldChar ff_char_from_local(const LocalChar& chi) {
    if (chi.conductor() > 1) throw std::invalid_argument("ff_char_from_local: conductor > 1");
    long p = chi.p();
    auto F = FiniteField::get(p, 1);
    if (p == 2) return {2, 1, 0};
    auto c1 = chi.at_level(1);
    // chi(gamma) = zeta_{p-1}^c and omega(gamma) = zeta_{p-1}, so alpha = -c
    long c = c1.exponent(F->generator()) * (p - 1) / c1.value_order();
    return {p, 1, mod_floor(-c, p - 1)};
}

namespace {

bool in_subfield(const FiniteField& F, long x, int fsub) { return F.pow(x, ipow(F.p(), fsub)) == x; }

}  // namespace

FiniteFieldChar ff_restrict(const FiniteFieldChar& xi, int fsub) {
    if (fsub < 1 || xi.f % fsub) throw std::invalid_argument("ff_restrict: not a subfield");
    auto F = FiniteField::get(xi.p, xi.f);
    long qm = F->q() - 1, qs = ipow(xi.p, fsub) - 1;
    std::vector<long> sub;
    for (long x = 1; x < F->q(); ++x)
        if (in_subfield(*F, x, fsub)) sub.push_back(x);
    for (long a = 0; a < qs; ++a) {
        bool ok = true;
        for (long x : sub)
            if (mod_floor(-a * F->log(x), qm) != xi.exponent(x)) {
                ok = false;
                break;
            }
        if (ok) return {xi.p, fsub, a};
    }
    throw std::logic_error("ff_restrict: no matching exponent");
}

FiniteFieldChar ff_compose_norm(const FiniteFieldChar& chi, int fbig) {
    if (fbig % chi.f) throw std::invalid_argument("ff_compose_norm: not an extension");
    auto F = FiniteField::get(chi.p, fbig);
    long qm = F->q() - 1, qs = chi.q();
    long ne = qm / (qs - 1);  // x -> x^{(q-1)/(q'-1)} is the norm
    for (long a = 0; a < qm; ++a) {
        bool ok = true;
        for (long x = 1; x < F->q() && ok; ++x) {
            long n = F->pow(x, ne);
            // chi(n) with omega of the subfield = omega of F restricted
            long lhs = mod_floor(-chi.alpha * F->log(n), qm);
            if (mod_floor(-a * F->log(x), qm) != lhs) ok = false;
        }
        if (ok) return {chi.p, fbig, a};
    }
    throw std::logic_error("ff_compose_norm: no matching exponent");
}

CycNum psi_eval(const AdditiveChar& psi, const mpq_class& x) {
    mpz_class den = x.get_den(), num = x.get_num();
    long m = 1;
    int e = 0;
    while (den % psi.p == 0) {
        den /= psi.p;
        m *= psi.p;
        ++e;
    }
    if (den != 1) throw std::invalid_argument("psi_eval: denominator is not a power of p");
    if (e == 0) return CycNum(mpq_class(1));
    mpz_class r = num * psi.shift;
    mpz_class M(m);
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
    return cyc_from_root(m, r.get_si());
}

}  // namespace manin
