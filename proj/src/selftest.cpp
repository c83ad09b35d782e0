#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "manin/cli.hpp"
#include "manin/gauss.hpp"
#include "manin/manin.hpp"
#include "manin/modcurve.hpp"
#include "manin/padic.hpp"
#include "manin/whittaker.hpp"

namespace manin {

namespace {

// Each check returns "" on success, otherwise what went wrong.
using Check = std::function<std::string()>;

std::string check_cyclotomic() {
    std::mt19937 rng(11);
    for (long M : {3L, 4L, 8L, 12L, 15L, 16L, 24L}) {
        CycNum s;
        for (long j = 0; j < M; ++j) s = s + cyc_from_root(M, j);
        if (!s.is_zero()) return "sum of the M-th roots of unity is nonzero, M=" + std::to_string(M);
        auto z = cyc_from_root(M, 1);
        if (z.pow(M) != CycNum(mpq_class(1), M)) return "zeta^M != 1, M=" + std::to_string(M);
        if (z * z.conj() != CycNum(mpq_class(1), M)) return "zeta * conj(zeta) != 1";
        for (int i = 0; i < 20; ++i) {
            auto r = [&] { return cyc_from_root(M, rng() % M) * mpq_class(long(rng() % 7) - 3) + cyc_from_root(M, rng() % M); };
            auto a = r(), b = r(), c = r();
            if ((a + b) * c != a * c + b * c) return "distributivity fails";
            if (!b.is_zero() && (a / b) * b != a) return "division fails";
        }
    }
    return "";
}

std::string check_eps_q2() {
    auto i = cyc_from_root(4, 1);
    if (eps_factor(q2_quadratic("b2")).to_cyc() != i) return "eps(b2) != i";
    if (eps_factor(q2_quadratic("b3")).to_cyc() != CycNum(mpq_class(1))) return "eps(b3) != 1";
    if (eps_factor(q2_quadratic("b2b3")).to_cyc() != i) return "eps(b2b3) != i";
    return "";
}

std::string check_stickelberger(bool quick) {
    std::vector<long> ps = quick ? std::vector<long>{2, 3} : std::vector<long>{2, 3, 5, 7};
    for (long p : ps)
        for (int f = 1; f <= 2; ++f)
            for (long a = 0; a < ipow(p, f) - 1; ++a) {
                FiniteFieldChar chi{p, f, a};
                if (valuation_of_cyc(p, finite_field_gauss(chi)) != stickelberger_val(chi))
                    return "p=" + std::to_string(p) + " f=" + std::to_string(f) + " alpha=" + std::to_string(a);
            }
    return "";
}

std::string check_closed_forms(bool quick) {
    std::vector<long> ps = quick ? std::vector<long>{2, 3} : std::vector<long>{2, 3, 5};
    for (long p : ps)
        for (int a = 2; a <= (quick ? 3 : 4); ++a)
            for (const auto& c : chars_of_conductor(p, a)) {
                auto cf = gauss_closed_form(c);
                auto bf = gauss_bruteforce(c, -a);
                if (cf.value.to_cyc() != bf.value.to_cyc()) return "closed form differs for " + c.str();
                root_of_unity_certificate(c);  // throws if it fails
            }
    return "";
}

std::string check_different(bool quick) {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
        for (int n = 0; n <= 10; ++n)
            for (int l = 0; l <= n; ++l) {
                auto c = component_of_cusp(p, ipow(p, n), ipow(p, l));
                if (ExtRational(mpq_class(-different_val(p, c), ram_index(p, c))) != integrality_threshold(p, n, l))
                    return "threshold mismatch p=" + std::to_string(p);
            }
    for (long p : {2L, 3L, 5L})
        for (int a = 1; a <= 6; ++a)
            for (int b = a; b <= 6; ++b)
                if (different_val(p, {p, a, b}) != (b - a) * euler_phi(ipow(p, a)) + different_val(p, {p, a, a}))
                    return "tower formula p=" + std::to_string(p);
    for (long p : {2L, 3L, 5L})
        for (int b = 1; b <= 4; ++b) {
            long M = ipow(p, b), m = ipow(p, b - 1);
            if (quick && M > 27) continue;
            CycNum d;
            for (long j = 1; j < p; ++j) d = d + cyc_from_root(M, j * m - 1) * mpq_class(j * m);
            if (valuation_of_cyc(p, d) * mpq_class(euler_phi(M)) != ExtRational(different_val(p, {p, b, b})))
                return "different of Q_p(zeta_" + std::to_string(M) + ")";
        }
    return "";
}

std::string check_global_tables() {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
        for (int n = 0; n <= 10; ++n)
            for (int l = 0; l <= n; ++l) {
                weight2_bound(p, n, l);  // throws on disagreement
                for (int k : {2, 4, 6}) {
                    auto w = [&](int x) { return ExtRational(mpq_class(k, 2) * (n - std::min(2 * x, n))); };
                    if (newform_cusp_bound(p, k, n, l) + w(l) != newform_cusp_bound(p, k, n, n - l) + w(n - l))
                        return "symmetry fails p=" + std::to_string(p);
                }
            }
    return "";
}

std::string check_integrality() {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
        for (int n = 0; n <= 10; ++n)
            if (!integrality_check(p, n).ok) return "p=" + std::to_string(p) + " valN=" + std::to_string(n);
    return "";
}

std::string check_dominance(bool quick) {
    std::vector<long> ps = quick ? std::vector<long>{2, 3, 5} : std::vector<long>{2, 3, 5, 7};
    for (long p : ps)
        for (int n = 1; n <= (quick ? 6 : 8); ++n)
            for (int k : {2, 4}) {
                if (quick && k == 4) continue;
                for (auto sv : {ExtRational(0), ExtRational(1, 2), ExtRational(mpq_class(k - 1, 2))}) {
                    std::vector<RepDescriptor> reps;
                    for (auto& d : sample_descriptors(p, n, sv))
                        if (d.kind != RepKind::Type1a || type1a_realizable(d)) reps.push_back(d);
                    if (p == 2)
                        for (auto& d : type1b_enumerate())
                            if (d.a == n) reps.push_back(d);
                    for (auto& pi : reps)
                        for (int l = 0; l <= n; ++l)
                            if (localglobal_combine(pi, k, n, l) < newform_cusp_bound(p, k, n, l))
                                return pi.str() + " k=" + std::to_string(k) + " valL=" + std::to_string(l);
                }
            }
    return "";
}

std::string check_whittaker_tables() {
    for (const char* lab : {"b2", "b3", "b2b3"}) {
        auto pi = make_type3(q2_quadratic(lab));
        for (long t = -6; t <= 4; ++t) {
            ExtRational want = ExtRational::infinity();
            if (std::string(lab) == "b2") {
                if (t >= -2) want = ExtRational(-(t + 3));
            } else {
                if (t >= -2) want = ExtRational(mpq_class(-(2 * t + 7), 2));
                if (t == -4) want = ExtRational(-1, 2);
            }
            if (assemble_W(pi, t, pi.a / 2, 1).valuation != want)
                return std::string(lab) + " t=" + std::to_string(t);
        }
    }
    for (int a = 1; a <= 8; ++a)
        for (int ell : {0, a})
            for (long t = -10; t <= 4; ++t) {
                auto w = boundary_value(a, 3, t, ell);
                bool zero = a == 1 ? t + ell < -1 : t + ell != -a;
                if (w.is_zero() != zero) return "boundary a=" + std::to_string(a) + " t=" + std::to_string(t);
                if (!zero && w.valuation != ExtRational(a == 1 ? -(1 + t + ell) : 0)) return "boundary valuation";
            }
    return "";
}

std::string check_basic_identity(bool quick) {
    std::vector<RepDescriptor> reps;
    for (const char* lab : {"b2", "b3", "b2b3"}) reps.push_back(make_type3(q2_quadratic(lab)));
    for (auto& c : chars_of_conductor(3, 1)) reps.push_back(make_type3(c));
    for (auto& pi : reps)
        for (int ell = 0; ell <= pi.a; ++ell)
            for (auto& chi : chars_upto(pi.p, ell))
                if (!verify_basic_identity(pi, ell, chi, quick ? 3 : 6))
                    return pi.str() + " l=" + std::to_string(ell) + " chi=" + chi.str();
    return "";
}

std::string check_reporter() {
    auto corr = [](const char* N, long p, Family f) {
        for (auto& r : manin_report(FactoredInt::parse(N), FactoredInt::of(1), f))
            if (r.p == p) return r.correction;
        return -1;
    };
    if (corr("27", 3, Family::X0) != 1) return "27 x0";
    if (corr("27", 3, Family::X1) != 0) return "27 x1";
    if (corr("2^5*3", 2, Family::X0) != 0) return "2^5*3 x0";
    if (corr("2^5*5", 2, Family::X0) != 1) return "2^5*5 x0";
    return "";
}

std::string check_bundled(const std::string& dir) {
    std::ostringstream diff;
    for (int which : {1, 2}) {
        std::string path = dir + "/table" + std::to_string(which) + ".jsonl";
        std::ifstream in(path);
        if (!in) return "cannot open " + path;
        const auto& ref = bundled_table(which);
        std::vector<std::string> got;
        for (std::string line; std::getline(in, line);)
            if (line.find_first_not_of(" \t\r") != std::string::npos) got.push_back(line);
        for (size_t i = 0; i < std::max(ref.size(), got.size()); ++i) {
            std::string want = i < ref.size() ? serialize_record(ref[i]) : "";
            std::string have = i < got.size() ? got[i] : "";
            if (want != have) diff << path << ":" << i + 1 << "\n- " << want << "\n+ " << have << "\n";
        }
        auto rep = verify_files({path});
        if (!rep.errors.empty()) diff << rep.errors.front() << "\n";
        if (rep.fail || rep.sharp != int(rep.results.size())) diff << path << ": not every record PASS and SHARP\n";
        for (const auto& r : ref)
            if (parse_record(serialize_record(r)) != r) diff << "round trip fails for " << r.label << "\n";
    }
    return diff.str();
}

}  // namespace

std::vector<SelftestLine> run_selftest(bool quick, const std::string& data_dir) {
    std::vector<std::pair<std::string, Check>> checks{
        {"cyclotomic arithmetic", check_cyclotomic},
        {"Q_2 quadratic epsilon factors", check_eps_q2},
        {"Stickelberger valuations", [quick] { return check_stickelberger(quick); }},
        {"Gauss sum closed forms and root-of-unity certificates", [quick] { return check_closed_forms(quick); }},
        {"different, threshold and tower formula", [quick] { return check_different(quick); }},
        {"global bound tables and symmetry", check_global_tables},
        {"integrality at weight 2", check_integrality},
        {"local-to-global dominance", [quick] { return check_dominance(quick); }},
        {"exact Whittaker tables", check_whittaker_tables},
        {"basic identity for Type 3", [quick] { return check_basic_identity(quick); }},
        {"Manin reporter", check_reporter},
        {"bundled tables", [&data_dir] { return check_bundled(data_dir); }},
    };
    std::vector<SelftestLine> out;
    for (auto& [name, fn] : checks) {
        std::string msg;
        try {
            msg = fn();
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        out.push_back({name, msg.empty(), msg});
    }
    return out;
}

}  // namespace manin
