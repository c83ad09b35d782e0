#pragma once
// Global bounds for Fourier expansions at cusps of X_0(N), the local-to-global
// minimization, the integrality check and the Manin-constant report.

#include <string>
#include <vector>

#include "manin/ext_rational.hpp"
#include "manin/modcurve.hpp"
#include "manin/reps.hpp"

namespace manin {

// Lower bound for val_p(f|_c), c of denominator L, f of weight k on Gamma_0(N).
ExtRational newform_cusp_bound(long p, int k, int valN, int valL);
// The weight 2 table; throws std::logic_error if it ever disagrees with newform_cusp_bound(k = 2).
ExtRational weight2_bound(long p, int valN, int valL);

// -(k/2) val_p(N / gcd(L^2, N)) + min over tau >= 0 of k tau/2 + (local bound at t = tau - max(valN, 2 valL)).
// sigma_val defaults to (k - 1)/2. Throws std::invalid_argument unless a(pi) = valN >= 1.
ExtRational localglobal_combine(const RepDescriptor& pi, int k, int valN, int valL);

enum class RatSing { Rational, Unknown };
RatSing rational_singularity(long p, const FactoredInt& N);

enum class Family { X0, X1 };

struct ManinRow {
    long p;
    int val_deg;
    int correction;
    int bound;  // val_p(c_phi) <= bound
    bool additive;
    bool additive_eliminated;
    RatSing rat_sing;
};
std::vector<ManinRow> manin_report(const FactoredInt& N, const FactoredInt& deg, Family family);

struct IntegralityRow {
    int valL;
    ExtRational bound;
    ExtRational threshold;
    ExtRational margin;
};
struct IntegralityResult {
    bool ok;
    std::vector<IntegralityRow> rows;
};
IntegralityResult integrality_check(long p, int valN);

struct BoundRow {
    int valL;
    long width;          // width of the cusp 1/p^valL
    long count;          // cusps whose denominator has p-valuation valL
    Component component;
    long ram;
    long different;
    ExtRational threshold;
    ExtRational bound;
    ExtRational margin;
};
std::vector<BoundRow> bound_table(long N, int k, long p);

}  // namespace manin
