#pragma once
// Local Whittaker newforms on the cosets g_{t,l,v}: reflection, vanishing,
// Fourier coefficients c_{t,l}(chi), exact values and the valuation bounds.

#include <optional>
#include <utility>
#include <vector>

#include "manin/characters.hpp"
#include "manin/cyclotomic.hpp"
#include "manin/ext_rational.hpp"
#include "manin/reps.hpp"

namespace manin {

struct CosetIndex {
    long t = 0;
    int ell = 0;
    long v = 1;  // unit, reduced mod p^{min(ell, a - ell)}

    static CosetIndex canonical(long p, int a, long t, int ell, long v);
};

struct WhittakerVal {
    ExtRational valuation = ExtRational::infinity();
    std::optional<ScaledCyclotomic> exact;
    // exact is only known up to a root of unity (valuation unaffected)
    bool unit_ambiguous = false;
    // valuation is a lower bound (terms may cancel, or sigma enters with unknown sign)
    bool lower_bound = false;
    // all values over the unresolved signs eps(1/2, chi pi) = +-1, when enumerated
    std::vector<ScaledCyclotomic> candidates;

    bool is_zero() const { return valuation.is_inf() && !lower_bound; }
};

ExtRational valuation_of_scaled(long p, const ScaledCyclotomic& x);

std::pair<long, int> atkin_lehner_reflect(long t, int ell, int a);

// W(g_{t,l,v}) for l in {0, a}. Throws std::invalid_argument otherwise.
WhittakerVal boundary_value(int a, long p, long t, int ell);
WhittakerVal boundary_value(const RepDescriptor& pi, long t, int ell);

// a0: conductor of a twist-minimal twist (only read for supercuspidal pi).
bool is_vanishing(const RepDescriptor& pi, int a0, long t, int ell);
bool is_vanishing(const RepDescriptor& pi, long t, int ell);

// Types 1a, 3, 4, 5; chi in X_{<= l} (chi(p) = 1). Type 3 accepts 0 <= l <= a,
// the others 1 <= l <= a/2. Throws std::invalid_argument for Types 1b, 2.
WhittakerVal coeff_c(const RepDescriptor& pi, long t, int ell, const LocalChar& chi);

// W(g_{t,l,v}) = sum_chi c_{t,l}(chi) chi(v). For l > a/2 the reflection is applied
// (Type 3 is evaluated directly) and the exact value is dropped.
WhittakerVal assemble_W(const RepDescriptor& pi, long t, int ell, long v);

struct LocalBound {
    ExtRational value;
    bool equality = false;
};

// p odd, a >= 2. nullopt when no bound row covers (t, l).
std::optional<LocalBound> bound_T1(const RepDescriptor& pi, long t, int ell, int f_res = 1,
                                   std::optional<ExtRational> sigma_val = std::nullopt);
// p = 2, a >= 2.
std::optional<LocalBound> bound_T2(const RepDescriptor& pi, int a0, long t, int ell,
                                   std::optional<ExtRational> sigma_val = std::nullopt);
// Dispatch on p, default a0, f_res = 1.
std::optional<LocalBound> local_bound(const RepDescriptor& pi, long t, int ell,
                                      std::optional<ExtRational> sigma_val = std::nullopt);

// Compares both sides of the basic identity for Type 3 as Laurent polynomials in
// X = q^{1/2-s}, truncated at t <= t_max. Throws std::invalid_argument if chi is not in X_{<= l}.
bool verify_basic_identity(const RepDescriptor& pi, int ell, const LocalChar& chi, long t_max = 6);

}  // namespace manin
