#pragma once
// Gauss sums of characters of Q_p^x and of finite fields, GL(1) epsilon factors.

#include <optional>
#include <string>
#include <utility>

#include "manin/characters.hpp"
#include "manin/cyclotomic.hpp"
#include "manin/ext_rational.hpp"

namespace manin {

enum class GaussProvenance { bruteforce, closed_form };

struct GaussValue {
    ScaledCyclotomic value;
    ExtRational valuation;
    GaussProvenance provenance;
};

// G_psi(p^{x_val}, chi): average over units mod p^m of chi(y) psi(p^{x_val} y).
// With oracle = true the valuation comes from the p-adic embedding instead of the case table.
GaussValue gauss_bruteforce(const LocalChar& chi, long x_val, const AdditiveChar& psi, bool oracle = false);
GaussValue gauss_bruteforce(const LocalChar& chi, long x_val, bool oracle = false);
// Just the number, cached.
const CycNum& gauss_sum(const LocalChar& chi, long x_val, long shift = 1);
// Valuation from the case table (exact).
ExtRational gauss_valuation_formula(const LocalChar& chi, long x_val);

// -sum_{a in F^x} chi(a) psibar(a), psibar(a) = zeta_p^{shift * Tr(a)}
CycNum finite_field_gauss(const FiniteFieldChar& chi, long shift = 1);
ExtRational stickelberger_val(const FiniteFieldChar& chi);

// epsilon(s, chi, psi) for c(psi) = 0; s must make a(chi)(s - 1/2) a half-integer.
ScaledCyclotomic eps_factor(const LocalChar& chi, const AdditiveChar& psi, const mpq_class& s = mpq_class(1, 2));
ScaledCyclotomic eps_factor(const LocalChar& chi);
ExtRational eps_valuation(const LocalChar& chi, int f_res = 1);

// Least unit u mod p^{ceil(a/2)} with chi(1 + p^h x) = psi(u x / p^{a-h}) for all x
// (h = a/2 or (a+1)/2), also satisfying the quadratic variant for odd p and odd a.
// Throws std::logic_error if none exists.
long find_u(const LocalChar& chi, const AdditiveChar& psi);
long find_u(const LocalChar& chi);
// Checks the identity for a given u on all residues.
bool check_u(const LocalChar& chi, const AdditiveChar& psi, long u);

GaussValue gauss_closed_form(const LocalChar& chi, const AdditiveChar& psi);
GaussValue gauss_closed_form(const LocalChar& chi);

// (n, j) with z^2 = zeta_n^j for z = q^{a/2-1}(q-1) G(p^{-a}, chi). Throws if z^2 is not a root of unity.
std::pair<long, long> root_of_unity_certificate(const LocalChar& chi, const AdditiveChar& psi);
std::pair<long, long> root_of_unity_certificate(const LocalChar& chi);

}  // namespace manin
