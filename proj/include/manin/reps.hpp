#pragma once
// Ramified representations of GL2(Q_p) with trivial central character, kept as
// small descriptors: conductor and twisting arithmetic, L- and epsilon data.

#include <optional>
#include <string>
#include <vector>

#include "manin/characters.hpp"
#include "manin/cyclotomic.hpp"
#include "manin/ext_rational.hpp"

namespace manin {

enum class RepKind { Type1a, Type1b, Type2, Type3, Type4, Type5 };

std::string kind_name(RepKind k);
bool is_supercuspidal(RepKind k);

struct RepDescriptor {
    long p = 2;
    RepKind kind = RepKind::Type2;

    // Type1a: E/Q_p ramified or not, a(xi), and the discriminant exponent d_E.
    bool e_ramified = false;
    int a_xi = 0;
    int d_e = 0;
    // Known conductor of a twist-minimal twist (Type1a over Q_2 only; unset = unknown).
    std::optional<int> a0;

    // Type1b: base 3 or 7 and a quadratic twist label ("1", "b0", "b2", ...).
    int base = 3;
    std::string twist = "1";

    // Type2: mu(p) for the unramified quadratic mu.
    int mu_sign = 1;

    // Types 3, 4, 5.
    LocalChar mu;
    // |val_p(q^sigma)| for Types 4, 5; unset means "use (k-1)/2".
    std::optional<ExtRational> sigma_val;

    int a = 0;  // conductor exponent, filled by the factories

    std::string str() const;
};

RepDescriptor make_type1a(long p, bool e_ramified, int a_xi, int d_e = -1);
RepDescriptor make_type1b(int base, const std::string& twist);
RepDescriptor make_type2(long p, int mu_sign);
RepDescriptor make_type3(const LocalChar& mu);
RepDescriptor make_type4(const LocalChar& mu, std::optional<ExtRational> sigma_val = std::nullopt);
RepDescriptor make_type5(const LocalChar& mu, std::optional<ExtRational> sigma_val = std::nullopt);

// "type3:p=2,mu=b2", "type1b:pi7*b0b2", "type1a:p=3,unram,axi=1", "type2:p=5,sign=-1",
// "type4:p=3,mu=quad,sigma=1/2", "type5:p=5,mu=1:1". Throws std::invalid_argument.
RepDescriptor parse_rep(const std::string& spec);
// Character spec: a Q_2 label ("b2"), "quad" for odd p, or "n:i1.i2" (images on the generators at level n).
LocalChar parse_char(long p, const std::string& spec, int pi_sign = 1);

int conductor(const RepDescriptor& pi);

struct TwistConductor {
    int bound;
    bool exact;
};
TwistConductor twist_conductor(const RepDescriptor& pi, const LocalChar& chi);

// Candidate conductors of a twist-minimal twist of a supercuspidal pi.
std::vector<int> twist_minimal_range(const RepDescriptor& pi);
// The value used when nothing better is known: the largest candidate (fewest vanishing rows).
int default_a0(const RepDescriptor& pi);

std::vector<RepDescriptor> type1b_enumerate();
// False for parameter choices no dihedral pi with trivial central character can have.
bool type1a_realizable(const RepDescriptor& pi);

enum class LShape { one, single, double_ };

struct EpsLData {
    LShape L = LShape::one;
    std::string L_text;
    // epsilon(1/2, chi pi) = eps * q^{sigma * sigma_coeff}; eps absent for Types 1a/1b.
    std::optional<ScaledCyclotomic> eps;
    long sigma_coeff = 0;
    // Lower bound for the valuation of epsilon(1/2, chi pi); exact unless sigma_coeff != 0.
    std::optional<ExtRational> eps_val;
    bool gamma_ambiguous = false;  // Type1a: a factor in {+-1, +-i} is unresolved
};

EpsLData eps_L_data(const RepDescriptor& pi, const LocalChar& chi);
// Exact epsilon(1/2, chi pi). Throws std::domain_error when it depends on sigma or on Weil data.
ScaledCyclotomic eps_half(const RepDescriptor& pi, const LocalChar& chi);

// Kinds that occur with a(pi) = valN. Throws for valN <= 0.
std::vector<RepKind> admissible_types(long p, int valN);
// One descriptor per relevant shape for a(pi) = valN (all quadratic mu for Types 3/4).
std::vector<RepDescriptor> sample_descriptors(long p, int valN, std::optional<ExtRational> sigma_val = std::nullopt);

}  // namespace manin
