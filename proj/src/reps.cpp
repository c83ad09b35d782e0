#include "manin/reps.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "manin/gauss.hpp"

namespace manin {

namespace {

bool unit_square_trivial(const LocalChar& mu) {
    auto u = mu.unit_part();
    return char_mul(u, u).conductor() == 0;
}

int type1b_conductor(int base, const std::string& label) {
    if (base == 7) return 7;
    bool b2 = label.find("b2") != std::string::npos;
    bool b3 = label.find("b3") != std::string::npos;
    if (b3) return 6;
    return b2 ? 4 : 3;
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

long parse_long(const std::string& s) {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
    return v;
}

LocalChar parse_mu(long p, const std::string& s, int pi_sign) {
    if (p == 2) {
        const auto& labs = q2_labels();
        if (std::find(labs.begin(), labs.end(), s) != labs.end()) {
            auto c = q2_quadratic(s);
            return LocalChar(2, c.level(), c.images(), c.pi_sign() * pi_sign);
        }
    } else if (s == "quad") {
        return LocalChar(p, 1, {(p - 1) / 2}, pi_sign);
    }
    // "n:i1.i2"
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad character: " + s);
    int n = static_cast<int>(parse_long(s.substr(0, colon)));
    std::vector<long> im;
    std::string rest = s.substr(colon + 1);
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, '.')) im.push_back(parse_long(tok));
    if (im.size() != char_group(p, n).size()) throw std::invalid_argument("wrong number of images: " + s);
    return LocalChar(p, n, im, pi_sign);
}

std::string char_label(const LocalChar& c) {
    if (c.p() == 2) {
        auto l = q2_label_of(c);
        if (!l.empty()) return l;
    }
    return c.str();
}

}  // namespace

std::string kind_name(RepKind k) {
    switch (k) {
        case RepKind::Type1a: return "Type1a";
        case RepKind::Type1b: return "Type1b";
        case RepKind::Type2: return "Type2";
        case RepKind::Type3: return "Type3";
        case RepKind::Type4: return "Type4";
        case RepKind::Type5: return "Type5";
    }
    return "?";
}

bool is_supercuspidal(RepKind k) { return k == RepKind::Type1a || k == RepKind::Type1b; }

std::string RepDescriptor::str() const {
    std::ostringstream os;
    switch (kind) {
        case RepKind::Type1a:
            os << "type1a:p=" << p << "," << (e_ramified ? "ram" : "unram") << ",axi=" << a_xi;
            if (e_ramified) os << ",d=" << d_e;
            if (a0) os << ",a0=" << *a0;
            break;
        case RepKind::Type1b:
            os << "type1b:pi" << base;
            if (twist != "1") os << "*" << twist;
            break;
        case RepKind::Type2: os << "type2:p=" << p << ",sign=" << mu_sign; break;
        default:
            os << (kind == RepKind::Type3 ? "type3" : kind == RepKind::Type4 ? "type4" : "type5") << ":p=" << p
               << ",mu=" << char_label(mu);
            if (sigma_val) os << ",sigma=" << sigma_val->str();
    }
    return os.str();
}

RepDescriptor make_type1a(long p, bool e_ramified, int a_xi, int d_e) {
    if (!is_prime(p)) throw std::invalid_argument("type1a: p must be prime");
    if (a_xi < 1) throw std::invalid_argument("type1a: a(xi) must be positive");
    RepDescriptor r;
    r.p = p;
    r.kind = RepKind::Type1a;
    r.e_ramified = e_ramified;
    r.a_xi = a_xi;
    if (!e_ramified) {
        r.d_e = 0;
        r.a = 2 * a_xi;
    } else {
        if (d_e < 0) d_e = (p == 2) ? -1 : 1;
        if (p == 2 && d_e != 2 && d_e != 3) throw std::invalid_argument("type1a: ramified E/Q_2 needs d in {2,3}");
        if (p != 2 && d_e != 1) throw std::invalid_argument("type1a: tame ramified E has d = 1");
        r.d_e = d_e;
        r.a = a_xi + d_e;
    }
    if (r.a < 2) throw std::invalid_argument("type1a: supercuspidal conductor must be >= 2");
    return r;
}

RepDescriptor make_type1b(int base, const std::string& twist) {
    if (base != 3 && base != 7) throw std::invalid_argument("type1b: base must be pi3 or pi7");
    const auto& labs = q2_labels();
    if (std::find(labs.begin(), labs.end(), twist) == labs.end())
        throw std::invalid_argument("type1b: unknown twist " + twist);
    RepDescriptor r;
    r.p = 2;
    r.kind = RepKind::Type1b;
    r.base = base;
    r.twist = twist;
    r.a = type1b_conductor(base, twist);
    r.a0 = base;
    return r;
}

RepDescriptor make_type2(long p, int mu_sign) {
    if (!is_prime(p)) throw std::invalid_argument("type2: p must be prime");
    if (mu_sign != 1 && mu_sign != -1) throw std::invalid_argument("type2: mu(p) must be +-1");
    RepDescriptor r;
    r.p = p;
    r.kind = RepKind::Type2;
    r.mu_sign = mu_sign;
    r.a = 1;
    return r;
}

RepDescriptor make_type3(const LocalChar& mu) {
    if (mu.conductor() == 0 || !unit_square_trivial(mu))
        throw std::invalid_argument("type3: mu must be ramified quadratic");
    RepDescriptor r;
    r.p = mu.p();
    r.kind = RepKind::Type3;
    r.mu = mu;
    r.a = 2 * mu.conductor();
    return r;
}

RepDescriptor make_type4(const LocalChar& mu, std::optional<ExtRational> sigma_val) {
    if (mu.conductor() == 0 || !unit_square_trivial(mu))
        throw std::invalid_argument("type4: mu must be ramified quadratic");
    if (sigma_val && (sigma_val->is_inf() || *sigma_val < ExtRational(0)))
        throw std::invalid_argument("type4: sigma_val must be finite and >= 0");
    RepDescriptor r;
    r.p = mu.p();
    r.kind = RepKind::Type4;
    r.mu = mu.unit_part();
    r.sigma_val = sigma_val;
    r.a = 2 * mu.conductor();
    return r;
}

RepDescriptor make_type5(const LocalChar& mu, std::optional<ExtRational> sigma_val) {
    if (mu.conductor() == 0 || unit_square_trivial(mu))
        throw std::invalid_argument("type5: mu must be ramified with mu^2 != 1");
    if (mu.p() == 2 && mu.conductor() < 4) throw std::invalid_argument("type5: over Q_2 needs a(mu) >= 4");
    if (sigma_val && (sigma_val->is_inf() || *sigma_val < ExtRational(0)))
        throw std::invalid_argument("type5: sigma_val must be finite and >= 0");
    RepDescriptor r;
    r.p = mu.p();
    r.kind = RepKind::Type5;
    r.mu = mu.unit_part();
    r.sigma_val = sigma_val;
    r.a = 2 * mu.conductor();
    return r;
}

RepDescriptor parse_rep(const std::string& spec0) {
    std::string spec = strip(spec0);
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("rep spec needs 'typeN:'");
    std::string head = spec.substr(0, colon), body = spec.substr(colon + 1);
    if (head == "type1b") {
        if (body.rfind("pi", 0) != 0) throw std::invalid_argument("type1b spec: pi3 or pi7");
        auto star = body.find('*');
        int base = static_cast<int>(parse_long(body.substr(2, star == std::string::npos ? std::string::npos : star - 2)));
        std::string tw = star == std::string::npos ? "1" : body.substr(star + 1);
        return make_type1b(base, tw);
    }
    if (head != "type1a" && head != "type2" && head != "type3" && head != "type4" && head != "type5")
        throw std::invalid_argument("unknown rep type: " + head);
    long p = 0;
    std::string mu_s;
    std::optional<ExtRational> sigma;
    int sign = 1, pi_sign = 1;
    bool ram = false;
    int axi = 0, d = -1;
    std::optional<int> a0;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = strip(tok);
        auto eq = tok.find('=');
        std::string k = tok.substr(0, eq), v = eq == std::string::npos ? "" : tok.substr(eq + 1);
        if (k == "p") p = parse_long(v);
        else if (k == "mu") mu_s = v;
        else if (k == "sigma") sigma = ExtRational::parse(v);
        else if (k == "sign") sign = static_cast<int>(parse_long(v));
        else if (k == "pi") pi_sign = static_cast<int>(parse_long(v));
        else if (k == "ram") ram = true;
        else if (k == "unram") ram = false;
        else if (k == "axi") axi = static_cast<int>(parse_long(v));
        else if (k == "d") d = static_cast<int>(parse_long(v));
        else if (k == "a0") a0 = static_cast<int>(parse_long(v));
        else throw std::invalid_argument("unknown rep field: " + k);
    }
    if (p < 2 || !is_prime(p)) throw std::invalid_argument("rep spec needs a prime p=");
    if (head == "type1a") {
        auto r = make_type1a(p, ram, axi, d);
        if (a0) {
            auto rng = twist_minimal_range(r);
            if (std::find(rng.begin(), rng.end(), *a0) == rng.end())
                throw std::invalid_argument("type1a: a0 outside the twist-minimal range");
            r.a0 = a0;
        }
        return r;
    }
    if (head == "type2") return make_type2(p, sign);
    if (mu_s.empty()) throw std::invalid_argument("rep spec needs mu=");
    LocalChar mu = parse_mu(p, mu_s, pi_sign);
    if (head == "type3") return make_type3(mu);
    if (head == "type4") return make_type4(mu, sigma);
    return make_type5(mu, sigma);
}

LocalChar parse_char(long p, const std::string& spec, int pi_sign) { return parse_mu(p, strip(spec), pi_sign); }

int conductor(const RepDescriptor& pi) { return pi.a; }

TwistConductor twist_conductor(const RepDescriptor& pi, const LocalChar& chi) {
    int ac = chi.conductor();
    if (ac == 0) return {pi.a, true};
    switch (pi.kind) {
        case RepKind::Type2: return {2 * ac, true};
        case RepKind::Type3: {
            int m = char_mul(chi.unit_part(), pi.mu).conductor();
            return {m == 0 ? 1 : 2 * m, true};
        }
        case RepKind::Type4: return {2 * char_mul(chi.unit_part(), pi.mu).conductor(), true};
        case RepKind::Type5: {
            auto u = chi.unit_part();
            return {char_mul(u, pi.mu).conductor() + char_mul(u, char_inv(pi.mu)).conductor(), true};
        }
        case RepKind::Type1b: {
            auto lab = q2_label_of(chi);
            if (!lab.empty()) {
                auto prod = q2_label_of(char_mul(q2_quadratic(pi.twist), chi));
                return {type1b_conductor(pi.base, prod), true};
            }
            break;
        }
        case RepKind::Type1a: break;
    }
    int bound = std::max(pi.a, 2 * ac);
    bool minimal = (pi.p != 2) || (pi.a % 2 == 1) || pi.a == 2 || (pi.a0 && *pi.a0 == pi.a);
    return {bound, 2 * ac != pi.a || minimal};
}

std::vector<int> twist_minimal_range(const RepDescriptor& pi) {
    if (!is_supercuspidal(pi.kind)) throw std::invalid_argument("twist_minimal_range: supercuspidal only");
    if (pi.kind == RepKind::Type1b) return {pi.base};
    int a = pi.a;
    if (pi.p != 2 || a % 2 == 1 || a == 2) return {a};
    if (pi.a0) return {*pi.a0};
    if (a >= 8) return {a - 2, a - 1};
    std::vector<int> r;
    for (int c = 2; c <= a - 1; ++c) r.push_back(c);
    return r;
}

int default_a0(const RepDescriptor& pi) {
    if (!is_supercuspidal(pi.kind)) return pi.a;
    auto r = twist_minimal_range(pi);
    return *std::max_element(r.begin(), r.end());
}

std::vector<RepDescriptor> type1b_enumerate() {
    std::vector<RepDescriptor> r;
    for (int base : {3, 7})
        for (const auto& l : q2_labels()) r.push_back(make_type1b(base, l));
    return r;
}

bool type1a_realizable(const RepDescriptor& pi) {
    if (pi.kind != RepKind::Type1a) return false;
    if (pi.a < 2) return false;
    if (pi.p == 2 && (pi.a == 3 || pi.a == 7)) return false;
    return true;
}

EpsLData eps_L_data(const RepDescriptor& pi, const LocalChar& chi) {
    if (chi.p() != pi.p) throw std::invalid_argument("eps_L_data: characters over different primes");
    EpsLData d;
    auto u = chi.unit_part();
    bool quad = unit_square_trivial(chi);
    switch (pi.kind) {
        case RepKind::Type1a:
        case RepKind::Type1b:
            d.L = LShape::one;
            d.L_text = "1";
            d.gamma_ambiguous = pi.kind == RepKind::Type1a;
            if (quad) d.eps_val = ExtRational(0);
            return d;
        case RepKind::Type2: {
            if (chi.conductor() == 0) {
                int c = chi.pi_sign() * pi.mu_sign;
                d.L = LShape::single;
                d.L_text = "1/(1 - (" + std::to_string(c) + ") q^(-1/2-s))";
                d.eps = ScaledCyclotomic::from_cyc(CycNum(mpq_class(-c)), pi.p);
                d.eps_val = ExtRational(0);
            } else {
                d.L_text = "1";
                d.eps = eps_factor(chi).pow(2);
                d.eps_val = eps_valuation(chi) + eps_valuation(chi);
            }
            return d;
        }
        case RepKind::Type3: {
            auto m = char_mul(chi, pi.mu);
            if (m.conductor() == 0) {
                int c = m.pi_sign();
                d.L = LShape::single;
                d.L_text = "1/(1 - (" + std::to_string(c) + ") q^(-1/2-s))";
                d.eps = ScaledCyclotomic::from_cyc(CycNum(mpq_class(-c)), pi.p);
                d.eps_val = ExtRational(0);
            } else {
                d.L_text = "1";
                d.eps = eps_factor(m).pow(2);
                d.eps_val = eps_valuation(m) + eps_valuation(m);
            }
            return d;
        }
        case RepKind::Type4: {
            auto m = char_mul(chi, pi.mu);
            if (m.conductor() == 0) {
                d.L = LShape::double_;
                d.L_text = m.pi_sign() > 0 ? "1/((1 - q^(-sigma-s))(1 - q^(sigma-s)))"
                                           : "1/((1 + q^(-sigma-s))(1 + q^(sigma-s)))";
                d.eps = ScaledCyclotomic::from_cyc(CycNum(mpq_class(1)), pi.p);
                d.eps_val = ExtRational(0);
            } else {
                d.L_text = "1";
                d.eps = eps_factor(m).pow(2);
                d.eps_val = eps_valuation(m) + eps_valuation(m);
            }
            return d;
        }
        case RepKind::Type5: {
            auto m1 = char_mul(u, pi.mu), m2 = char_mul(u, char_inv(pi.mu));
            m1 = LocalChar(m1.p(), m1.level(), m1.images(), chi.pi_sign());
            m2 = LocalChar(m2.p(), m2.level(), m2.images(), chi.pi_sign());
            if (m1.conductor() == 0 || m2.conductor() == 0) {
                d.L = LShape::single;
                d.L_text = m1.conductor() == 0 ? "1/(1 - q^(sigma))" : "1/(1 - q^(-sigma))";
            } else {
                d.L_text = "1";
            }
            d.eps = eps_factor(m1) * eps_factor(m2);
            d.sigma_coeff = m2.conductor() - m1.conductor();
            ExtRational v = eps_valuation(m1) + eps_valuation(m2);
            if (d.sigma_coeff == 0) {
                d.eps_val = v;
            } else if (pi.sigma_val) {
                d.eps_val = v - (*pi.sigma_val) * mpq_class(std::abs(d.sigma_coeff));
            }
            return d;
        }
    }
    return d;
}

ScaledCyclotomic eps_half(const RepDescriptor& pi, const LocalChar& chi) {
    auto d = eps_L_data(pi, chi);
    if (!d.eps) throw std::domain_error("eps_half: epsilon needs Weil-representation data for " + kind_name(pi.kind));
    if (d.sigma_coeff != 0) throw std::domain_error("eps_half: epsilon depends on sigma");
    return *d.eps;
}

std::vector<RepDescriptor> sample_descriptors(long p, int valN, std::optional<ExtRational> sigma_val) {
    if (valN <= 0) throw std::invalid_argument("sample_descriptors: val_p(N) must be >= 1");
    std::vector<RepDescriptor> r;
    if (valN == 1) {
        r.push_back(make_type2(p, 1));
        r.push_back(make_type2(p, -1));
        return r;
    }
    // dihedral
    if (valN % 2 == 0) r.push_back(make_type1a(p, false, valN / 2));
    if (p == 2) {
        for (int d : {2, 3})
            if (valN - d >= 1) r.push_back(make_type1a(2, true, valN - d, d));
    } else {
        r.push_back(make_type1a(p, true, valN - 1, 1));
    }
    r.erase(std::remove_if(r.begin(), r.end(), [](const RepDescriptor& x) { return !type1a_realizable(x); }),
            r.end());
    if (p == 2)
        for (auto& x : type1b_enumerate())
            if (x.a == valN) r.push_back(x);
    if (valN % 2 == 0) {
        int am = valN / 2;
        bool have_quad = (p == 2) ? (am == 2 || am == 3) : am == 1;
        if (have_quad) {
            for (auto& mu : chars_of_conductor(p, am)) {
                if (!unit_square_trivial(mu)) continue;
                r.push_back(make_type3(mu));
                r.push_back(make_type4(mu, sigma_val));
            }
        }
        // one mu with mu^2 != 1 per conductor; the bounds only see a(mu)
        if (p == 2) {
            if (am >= 4) r.push_back(make_type5(LocalChar(2, am, {0, 1}), sigma_val));
        } else if (am >= 2 || p >= 5) {
            r.push_back(make_type5(LocalChar(p, am, {1}), sigma_val));
        }
    }
    return r;
}

std::vector<RepKind> admissible_types(long p, int valN) {
    if (valN <= 0) throw std::invalid_argument("admissible_types: val_p(N) must be >= 1");
    std::vector<RepKind> k;
    for (auto& d : sample_descriptors(p, valN))
        if (std::find(k.begin(), k.end(), d.kind) == k.end()) k.push_back(d.kind);
    return k;
}

}  // namespace manin
