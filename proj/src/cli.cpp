#include "manin/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "manin/gauss.hpp"
#include "manin/manin.hpp"
#include "manin/modcurve.hpp"
#include "manin/whittaker.hpp"

#ifndef MANIN_DATA_DIR
#define MANIN_DATA_DIR "data"
#endif

namespace manin {

using ojson = nlohmann::ordered_json;

namespace {

long json_long(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field ") + key);
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw std::invalid_argument(std::string("field ") + key + " must be an integer");
    return v.get<long>();
}

std::string json_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field ") + key);
    const auto& v = j.at(key);
    if (!v.is_string()) throw std::invalid_argument(std::string("field ") + key + " must be a string");
    return v.get<std::string>();
}

ExtRational record_bound(const MeasuredRecord& r) {
    int n = val_of(r.p, r.N);
    return r.k == 2 ? weight2_bound(r.p, n, r.valL) : newform_cusp_bound(r.p, r.k, n, r.valL);
}

std::string rat_json(const ExtRational& x) { return x.str(); }

// "2^5*3" or a plain decimal
FactoredInt factored_arg(const std::string& s) {
    auto f = FactoredInt::parse(s);
    if (f.value() < 1) throw std::invalid_argument("expected a positive integer: " + s);
    return f;
}

void check_precision_env() {
    const char* s = std::getenv("MANIN_PRECISION");
    if (!s || !*s) return;
    std::string v(s);
    if (v.find_first_not_of("0123456789") != std::string::npos || v.size() > 6 || std::stol(v) < 1)
        throw std::invalid_argument("MANIN_PRECISION must be a positive integer, got '" + v + "'");
}

}  // namespace

MeasuredRecord parse_record(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
    MeasuredRecord r;
    r.label = json_string(j, "label");
    r.N = json_long(j, "N");
    if (r.N < 1) throw std::invalid_argument("N must be positive");
    long k = json_long(j, "k");
    if (k < 2 || k % 2) throw std::invalid_argument("k must be even and positive");
    r.k = static_cast<int>(k);
    r.p = json_long(j, "p");
    if (!is_prime(r.p)) throw std::invalid_argument("p must be prime");
    r.measured = ExtRational::parse(json_string(j, "measured"));
    std::optional<long> vl;
    if (j.contains("valL")) vl = json_long(j, "valL");
    if (j.contains("cusp")) {
        r.cusp = json_string(j, "cusp");
        auto slash = r.cusp->find('/');
        if (slash == std::string::npos) throw std::invalid_argument("cusp must look like a/L");
        long L = std::stol(r.cusp->substr(slash + 1));
        if (L < 1 || r.N % L) throw std::invalid_argument("cusp denominator must divide N");
        long from_cusp = val_of(r.p, L);
        if (vl && *vl != from_cusp) throw std::invalid_argument("valL disagrees with the cusp denominator");
        vl = from_cusp;
    }
    if (!vl) throw std::invalid_argument("missing field valL");
    if (*vl < 0 || *vl > val_of(r.p, r.N)) throw std::invalid_argument("need 0 <= valL <= val_p(N)");
    r.valL = static_cast<int>(*vl);
    return r;
}

std::string serialize_record(const MeasuredRecord& r) {
    ojson j;
    j["label"] = r.label;
    j["N"] = r.N;
    j["k"] = r.k;
    j["p"] = r.p;
    j["valL"] = r.valL;
    if (r.cusp) j["cusp"] = *r.cusp;
    j["measured"] = rat_json(r.measured);
    return j.dump();
}

bool DatasetReport::verified() const {
    if (fail) return false;
    return std::all_of(groups.begin(), groups.end(), [](const GroupResult& g) { return g.consistent; });
}

DatasetReport verify_records(const std::vector<MeasuredRecord>& recs) {
    DatasetReport rep;
    std::vector<std::tuple<std::string, long, int>> order;
    std::map<std::tuple<std::string, long, int>, std::vector<size_t>> groups;
    for (const auto& r : recs) {
        RecordResult res{r, record_bound(r)};
        res.pass = r.measured >= res.bound;
        res.sharp = r.measured == res.bound;
        rep.pass += res.pass;
        rep.sharp += res.sharp;
        rep.fail += !res.pass;
        auto key = std::make_tuple(r.label, r.p, r.valL);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(rep.results.size());
        rep.results.push_back(res);
    }
    for (const auto& key : order) {
        const auto& idx = groups[key];
        if (idx.size() < 2) continue;
        GroupResult g{std::get<0>(key), std::get<1>(key), std::get<2>(key), int(idx.size()),
                      ExtRational::infinity(), true, false};
        for (size_t i : idx) {
            g.min = min(g.min, rep.results[i].record.measured);
            if (rep.results[i].record.measured != rep.results[idx[0]].record.measured) g.consistent = false;
        }
        g.sharp = g.min == rep.results[idx[0]].bound;
        rep.groups.push_back(g);
    }
    return rep;
}

DatasetReport verify_files(const std::vector<std::string>& paths) {
    std::vector<MeasuredRecord> recs;
    std::vector<std::string> errors;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) {
            errors.push_back(path + ": cannot open");
            continue;
        }
        std::string line;
        for (int no = 1; std::getline(in, line); ++no) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                recs.push_back(parse_record(line));
            } catch (const std::exception& e) {
                errors.push_back(path + ":" + std::to_string(no) + ": " + e.what());
            }
        }
    }
    auto rep = verify_records(recs);
    rep.errors = std::move(errors);
    return rep;
}

const std::vector<MeasuredRecord>& bundled_table(int which) {
    auto rec = [](const char* label, long N, long p, int valL, ExtRational m) {
        return MeasuredRecord{label, N, 2, p, valL, m, std::nullopt};
    };
    static const std::vector<MeasuredRecord> t1{
        rec("20a", 20, 2, 1, ExtRational(0)),    rec("24a", 24, 2, 1, ExtRational(-1)),
        rec("48a", 48, 2, 1, ExtRational(-2)),   rec("48a", 48, 2, 2, ExtRational(1)),
        rec("32a", 32, 2, 1, ExtRational(-3)),   rec("32a", 32, 2, 2, ExtRational(-1)),
        rec("64a", 64, 2, 1, ExtRational(-4)),   rec("64a", 64, 2, 2, ExtRational(-2)),
        rec("64a", 64, 2, 3, ExtRational(1)),    rec("128b", 128, 2, 1, ExtRational(-5)),
        rec("128b", 128, 2, 2, ExtRational(-3)), rec("128b", 128, 2, 3, ExtRational(-1)),
        rec("256c", 256, 2, 1, ExtRational(-6)), rec("256c", 256, 2, 2, ExtRational(-4)),
        rec("256c", 256, 2, 3, ExtRational(-2)), rec("256c", 256, 2, 4, ExtRational(1)),
    };
    static const std::vector<MeasuredRecord> t2{
        rec("45a", 45, 3, 1, ExtRational(-1, 2)),  rec("27a", 27, 3, 1, ExtRational(-1)),
        rec("162d", 162, 3, 1, ExtRational(-2)),   rec("162d", 162, 3, 2, ExtRational(0)),
        rec("243b", 243, 3, 1, ExtRational(-3)),   rec("243b", 243, 3, 2, ExtRational(-1)),
        rec("75b", 75, 5, 1, ExtRational(-1, 2)),  rec("98a", 98, 7, 1, ExtRational(-1, 2)),
        rec("121d", 121, 11, 1, ExtRational(-1, 2)),
    };
    if (which == 1) return t1;
    if (which == 2) return t2;
    throw std::invalid_argument("bundled tables are 1 and 2");
}

std::string bundled_table_path(int which) {
    return std::string(MANIN_DATA_DIR) + "/table" + std::to_string(which) + ".jsonl";
}

namespace {

void print_report(const DatasetReport& rep, bool json, std::ostream& out, std::ostream& err) {
    if (json) {
        ojson j;
        j["records"] = ojson::array();
        for (const auto& r : rep.results)
            j["records"].push_back({{"label", r.record.label},
                                    {"N", r.record.N},
                                    {"k", r.record.k},
                                    {"p", r.record.p},
                                    {"valL", r.record.valL},
                                    {"measured", rat_json(r.record.measured)},
                                    {"bound", rat_json(r.bound)},
                                    {"pass", r.pass},
                                    {"sharp", r.sharp}});
        j["groups"] = ojson::array();
        for (const auto& g : rep.groups)
            j["groups"].push_back({{"label", g.label},
                                   {"p", g.p},
                                   {"valL", g.valL},
                                   {"size", g.size},
                                   {"min", rat_json(g.min)},
                                   {"consistent", g.consistent},
                                   {"sharp", g.sharp}});
        j["errors"] = rep.errors;
        j["summary"] = {{"records", rep.results.size()},
                        {"pass", rep.pass},
                        {"sharp", rep.sharp},
                        {"fail", rep.fail},
                        {"malformed", rep.errors.size()}};
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : rep.results) {
            out << std::left << std::setw(8) << r.record.label << " N=" << std::setw(6) << r.record.N
                << " k=" << r.record.k << " p=" << std::setw(3) << r.record.p << " valL=" << r.record.valL
                << "  measured " << std::setw(6) << r.record.measured.str() << " bound " << std::setw(6)
                << r.bound.str() << "  " << (r.pass ? "PASS" : "FAIL") << (r.sharp ? " SHARP" : "") << "\n";
        }
        for (const auto& g : rep.groups)
            out << "group " << g.label << " p=" << g.p << " valL=" << g.valL << ": " << g.size << " cusps, min "
                << g.min.str() << (g.consistent ? "" : " INCONSISTENT") << (g.sharp ? " SHARP" : "") << "\n";
        out << "records " << rep.results.size() << ", pass " << rep.pass << ", sharp " << rep.sharp << ", fail "
            << rep.fail << ", malformed " << rep.errors.size() << "\n";
    }
    for (const auto& e : rep.errors) err << "malformed: " << e << "\n";
}

std::string family_str(Family f) { return f == Family::X0 ? "x0" : "x1"; }
std::string ratsing_str(RatSing r) { return r == RatSing::Rational ? "rational" : "unknown"; }

std::string comp_str(const Component& c) {
    return "(" + std::to_string(c.a) + "," + std::to_string(c.b) + ")";
}

int cmd_bound(const std::string& Ns, int k, std::optional<long> p_opt, bool json, std::ostream& out) {
    auto N = factored_arg(Ns);
    if (k < 2 || k % 2) throw std::invalid_argument("k must be even and positive");
    std::vector<long> ps = p_opt ? std::vector<long>{*p_opt} : N.primes();
    ojson j = ojson::array();
    for (long p : ps) {
        auto rows = bound_table(N.value(), k, p);
        if (json) {
            ojson t;
            t["N"] = N.value();
            t["k"] = k;
            t["p"] = p;
            t["rows"] = ojson::array();
            for (const auto& r : rows)
                t["rows"].push_back({{"valL", r.valL},
                                     {"width", r.width},
                                     {"count", r.count},
                                     {"component", {r.component.a, r.component.b}},
                                     {"ram", r.ram},
                                     {"different", r.different},
                                     {"threshold", rat_json(r.threshold)},
                                     {"bound", rat_json(r.bound)},
                                     {"margin", rat_json(r.margin)}});
            j.push_back(t);
            continue;
        }
        out << "N=" << N.str() << " k=" << k << " p=" << p << "\n";
        out << std::left << std::setw(6) << "valL" << std::setw(8) << "width" << std::setw(7) << "cusps"
            << std::setw(11) << "component" << std::setw(6) << "e" << std::setw(6) << "d" << std::setw(11)
            << "threshold" << std::setw(8) << "bound"
            << "margin\n";
        for (const auto& r : rows)
            out << std::setw(6) << r.valL << std::setw(8) << r.width << std::setw(7) << r.count << std::setw(11)
                << comp_str(r.component) << std::setw(6) << r.ram << std::setw(6) << r.different << std::setw(11)
                << r.threshold.str() << std::setw(8) << r.bound.str() << r.margin.str() << "\n";
    }
    if (json) out << j.dump(2) << "\n";
    return 0;
}

int cmd_manin(const std::string& Ns, const std::string& degs, const std::string& fam, bool json, std::ostream& out) {
    auto N = factored_arg(Ns);
    auto deg = factored_arg(degs);
    Family f = fam == "x1" ? Family::X1 : Family::X0;
    auto rows = manin_report(N, deg, f);
    if (json) {
        ojson j;
        j["N"] = N.str();
        j["deg"] = deg.str();
        j["family"] = family_str(f);
        j["primes"] = ojson::array();
        for (const auto& r : rows)
            j["primes"].push_back({{"p", r.p},
                                   {"val_deg", r.val_deg},
                                   {"correction", r.correction},
                                   {"bound", r.bound},
                                   {"additive", r.additive},
                                   {"additive_eliminated", r.additive_eliminated},
                                   {"rational_singularity", ratsing_str(r.rat_sing)}});
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "N=" << N.str() << " deg=" << deg.str() << " family=" << family_str(f) << "\n";
    out << std::left << std::setw(6) << "p" << std::setw(10) << "val(deg)" << std::setw(12) << "correction"
        << std::setw(20) << "bound on val(c)" << std::setw(12) << "rat.sing"
        << "note\n";
    for (const auto& r : rows)
        out << std::setw(6) << r.p << std::setw(10) << r.val_deg << std::setw(12) << r.correction << std::setw(20)
            << r.bound << std::setw(12) << ratsing_str(r.rat_sing)
            << (r.additive_eliminated ? "additive prime eliminated" : "") << "\n";
    return 0;
}

int cmd_gauss(long p, std::optional<int> level, const std::string& spec, long xval, bool oracle, bool json,
              std::ostream& out) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    auto chi = parse_char(p, spec);
    if (level) {
        if (*level < chi.conductor()) throw std::invalid_argument("level below the conductor");
        chi = chi.at_level(*level);
    }
    auto g = gauss_bruteforce(chi, xval, oracle);
    auto formula = gauss_valuation_formula(chi, xval);
    if (json) {
        ojson j{{"p", p},
                {"char", chi.str()},
                {"conductor", chi.conductor()},
                {"xval", xval},
                {"value", g.value.str()},
                {"valuation", rat_json(g.valuation)},
                {"formula_valuation", rat_json(formula)},
                {"oracle", oracle}};
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "chi = " << chi.str() << " (conductor " << chi.conductor() << "), x = " << p << "^" << xval << "\n";
    out << "G = " << g.value.str() << "\n";
    out << "val_p(G) = " << g.valuation.str() << (oracle ? " (p-adic oracle)" : "") << "\n";
    if (oracle) out << "case table: " << formula.str() << "\n";
    return oracle && formula != g.valuation ? 1 : 0;
}

int cmd_cusps(const std::string& Ns, std::optional<long> p, bool json, std::ostream& out) {
    auto N = factored_arg(Ns);
    long n = N.value();
    if (p && !is_prime(*p)) throw std::invalid_argument("p must be prime");
    ojson j = ojson::array();
    if (!json) {
        out << "N=" << N.str() << ", " << total_cusps(n) << " cusps\n";
        out << std::left << std::setw(8) << "L" << std::setw(8) << "width" << std::setw(7) << "count";
        if (p) out << std::setw(6) << "valL" << std::setw(11) << "component" << std::setw(6) << "e"
                   << "d";
        out << "\n";
    }
    for (long L : divisors(N)) {
        if (json) {
            ojson r{{"L", L}, {"width", width(n, L)}, {"count", cusp_count(n, L)}};
            if (p) {
                auto c = component_of_cusp(*p, n, L);
                r["valL"] = c.a;
                r["component"] = {c.a, c.b};
                r["ram"] = ram_index(*p, c);
                r["different"] = different_val(*p, c);
            }
            j.push_back(r);
            continue;
        }
        out << std::setw(8) << ("1/" + std::to_string(L)) << std::setw(8) << width(n, L) << std::setw(7)
            << cusp_count(n, L);
        if (p) {
            auto c = component_of_cusp(*p, n, L);
            out << std::setw(6) << c.a << std::setw(11) << comp_str(c) << std::setw(6) << ram_index(*p, c)
                << different_val(*p, c);
        }
        out << "\n";
    }
    if (json) out << j.dump(2) << "\n";
    return 0;
}

int cmd_whittaker(const std::string& spec, long t, int ell, long v, bool exact, bool json, std::ostream& out) {
    auto pi = parse_rep(spec);
    if (ell < 0 || ell > pi.a) throw std::invalid_argument("need 0 <= ell <= a(pi)");
    auto c = CosetIndex::canonical(pi.p, pi.a, t, ell, v);
    auto w = assemble_W(pi, c.t, c.ell, c.v);
    std::optional<LocalBound> b;
    if (pi.a >= 2) b = local_bound(pi, t, ell);
    auto val_s = w.is_zero() ? std::string("inf") : w.valuation.str();
    if (json) {
        ojson j{{"rep", pi.str()},   {"a", pi.a},          {"t", t},
                {"ell", ell},        {"v", c.v},           {"zero", w.is_zero()},
                {"valuation", val_s}, {"lower_bound", w.lower_bound}};
        if (b) j["local_bound"] = {{"value", rat_json(b->value)}, {"equality", b->equality}};
        if (exact) {
            if (w.exact) j["exact"] = w.exact->str();
            j["unit_ambiguous"] = w.unit_ambiguous;
            j["candidates"] = ojson::array();
            for (const auto& x : w.candidates) j["candidates"].push_back(x.str());
        }
        out << j.dump(2) << "\n";
        return 0;
    }
    out << pi.str() << ", a = " << pi.a << ", coset (t, l, v) = (" << t << ", " << ell << ", " << c.v << ")\n";
    if (w.is_zero()) out << "W = 0\n";
    else out << "val_p(W) " << (w.lower_bound ? ">= " : "= ") << w.valuation.str() << "\n";
    if (b) out << "local bound " << b->value.str() << (b->equality ? " (equality)" : "") << "\n";
    if (exact && !w.is_zero()) {
        if (w.exact) out << "W = " << w.exact->str() << (w.unit_ambiguous ? " up to a root of unity" : "") << "\n";
        for (const auto& x : w.candidates) out << "candidate " << x.str() << "\n";
        if (!w.exact && w.candidates.empty()) out << "no exact value at this coset\n";
    }
    return 0;
}

int cmd_verify(const std::vector<std::string>& files, bool json, std::ostream& out, std::ostream& err) {
    auto rep = verify_files(files);
    print_report(rep, json, out, err);
    if (!rep.verified()) return 1;
    return rep.errors.empty() ? 0 : 2;
}

int cmd_selftest(bool quick, const std::string& data_dir, bool json, std::ostream& out) {
    auto lines = run_selftest(quick, data_dir);
    bool ok = std::all_of(lines.begin(), lines.end(), [](const SelftestLine& l) { return l.ok; });
    if (json) {
        ojson j = ojson::array();
        for (const auto& l : lines) j.push_back({{"name", l.name}, {"ok", l.ok}, {"detail", l.detail}});
        out << j.dump(2) << "\n";
    } else {
        for (const auto& l : lines) {
            out << (l.ok ? "PASS " : "FAIL ") << l.name << "\n";
            if (!l.ok && !l.detail.empty()) out << l.detail << (l.detail.back() == '\n' ? "" : "\n");
        }
        out << (ok ? "selftest ok" : "selftest FAILED") << "\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Valuation bounds for Fourier expansions of newforms at cusps of X_0(N)"};
    app.name("manin");
    app.require_subcommand(1);

    bool json = false;
    auto json_flag = [&json](CLI::App* sub) { sub->add_flag("--json", json, "machine-readable output"); };

    std::string N, deg = "1", family = "x0", spec, rep, data_dir = MANIN_DATA_DIR;
    int k = 2, ell = 0;
    std::optional<int> level;
    std::optional<long> p_opt;
    long p = 0, xval = 0, t = 0, v = 1;
    bool oracle = false, exact = false, quick = false;
    std::vector<std::string> files;

    auto* bound = app.add_subcommand("bound", "bound table at each p | N");
    bound->add_option("--N", N, "level, e.g. 32 or 2^5")->required();
    bound->add_option("--k", k, "even weight")->capture_default_str();
    bound->add_option("--p", p_opt, "restrict to one prime");
    json_flag(bound);

    auto* man = app.add_subcommand("manin", "divisibility report for the Manin constant");
    man->add_option("--N", N, "level, e.g. 2^5*3")->required();
    man->add_option("--deg", deg, "modular degree, e.g. 2^2*7")->capture_default_str();
    man->add_option("--family", family, "x0 or x1")
        ->check(CLI::IsMember({"x0", "x1"}, CLI::ignore_case))
        ->capture_default_str();
    json_flag(man);

    auto* gs = app.add_subcommand("gauss", "Gauss sum G(p^x, chi)");
    gs->add_option("--p", p, "prime")->required();
    gs->add_option("--level", level, "level n of chi on (Z/p^n)^x");
    gs->add_option("--char", spec, "b2 (p = 2), quad, or n:i1.i2")->required();
    gs->add_option("--xval", xval, "val_p(x)")->required();
    gs->add_flag("--oracle", oracle, "valuation from the p-adic embedding");
    json_flag(gs);

    auto* cu = app.add_subcommand("cusps", "cusps of X_0(N): width, count, component, different");
    cu->add_option("--N", N, "level")->required();
    cu->add_option("--p", p_opt, "prime for the component columns");
    json_flag(cu);

    auto* wh = app.add_subcommand("whittaker", "local Whittaker newform on a coset g_{t,l,v}");
    wh->add_option("--rep", rep, "e.g. type3:p=2,mu=b2 or type1b:pi7*b0b2")->required();
    wh->add_option("--t", t, "t")->required();
    wh->add_option("--ell", ell, "l")->required();
    wh->add_option("--v", v, "unit v")->capture_default_str();
    wh->add_flag("--exact", exact, "print the exact value when known");
    json_flag(wh);

    auto* ver = app.add_subcommand("verify", "check measured valuations (JSONL) against the bounds");
    ver->add_option("files", files, "JSONL files")->required();
    json_flag(ver);

    auto* st = app.add_subcommand("selftest", "invariant suite and bundled tables");
    st->add_flag("--quick", quick, "smaller grids");
    st->add_option("--data", data_dir, "directory holding table1.jsonl and table2.jsonl")->capture_default_str();
    json_flag(st);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        check_precision_env();
        if (*bound) return cmd_bound(N, k, p_opt, json, out);
        if (*man) return cmd_manin(N, deg, family, json, out);
        if (*gs) return cmd_gauss(p, level, spec, xval, oracle, json, out);
        if (*cu) return cmd_cusps(N, p_opt, json, out);
        if (*wh) return cmd_whittaker(rep, t, ell, v, exact, json, out);
        if (*ver) return cmd_verify(files, json, out, err);
        if (*st) return cmd_selftest(quick, data_dir, json, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace manin
