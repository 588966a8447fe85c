#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fsg/modules.hpp"
#include "fsg/series.hpp"

namespace fsg {

/// One summand coefficient * prod_c x_c^{powers[c]} * exp(rates[c] x_c),
/// indexed over the p-regular classes.
struct ExpPolyTerm {
    Cyclo coefficient;
    std::vector<long> powers;
    std::vector<long> rates;
};

/// An exp-polynomial in the class variables: the normal form every
/// finitely generated module's E-series lives in, with integer rates
/// bounded by (generation degree) * |G|.
class ExpPolyForm {
public:
    ExpPolyForm(TablePtr table, std::vector<ExpPolyTerm> terms);

    const TablePtr& table() const { return table_; }
    const std::vector<ExpPolyTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    long max_rate() const;

    /// Truncated expansion, class basis, flavor E.
    MultiSeries expand(int truncation) const;
    std::string str() const;

private:
    TablePtr table_;
    std::vector<ExpPolyTerm> terms_;
};

/// Recovers the exp-polynomial form of a truncated E-series (class basis)
/// for a module of generation degree d, searching rates in 0..d*|G| and
/// powers below r_max. Two stages: each class axis is fitted on its line
/// x_{c'} = 0 (c' != c) against the univariate family x^r exp(a x) — the
/// window must satisfy (d|G|+1) * min(r_max, r) <= truncation+1 for some
/// r >= 1, otherwise "request larger N" — and the observed (rate, power)
/// pairs are then combined into product candidates for one pooled exact
/// solve over every windowed coefficient. A consistent-but-ambiguous
/// system reports "request larger N"; an inconsistent one falls back to
/// the full rate grid when that is determined, and otherwise reports
/// "series not in solution space at this truncation".
ExpPolyForm fit_exp_poly(const MultiSeries& E, long d, long r_max = 3);

/// (1 - sum_c rates[c] x_c)^multiplicity over the class variables.
struct LinearFactor {
    std::vector<long> rates;
    long multiplicity = 1;
};

/// P_{c,a}^multiplicity, where P_{c,a} = prod_S (1 - a beta_S x_S) and
/// beta_S = |c| conj(Phi_S(c)) / |G| (simple variables).
struct ClassRateFactor {
    std::size_t cls = 0;
    long rate = 0;
    long multiplicity = 1;
};

/// (1 - coeff x_var)^multiplicity over one simple variable; the fallback
/// when a per-variable factor matches no P_{c,a}.
struct VariableFactor {
    std::size_t var = 0;
    Cyclo coeff;
    long multiplicity = 1;
};

/// numerator / (product of symbolic denominator factors); flavor H uses
/// linear factors over class variables, flavor Htilde uses P_{c,a} and
/// raw per-variable factors over simple variables.
class RationalForm {
public:
    RationalForm(TablePtr table, Flavor flavor, MultiSeries numerator,
                 std::vector<LinearFactor> linear, std::vector<ClassRateFactor> class_rate,
                 std::vector<VariableFactor> variable);

    const TablePtr& table() const { return table_; }
    Flavor flavor() const { return flavor_; }
    Basis basis() const { return numerator_.basis(); }
    const MultiSeries& numerator() const { return numerator_; }
    const std::vector<LinearFactor>& linear_factors() const { return linear_; }
    const std::vector<ClassRateFactor>& class_rate_factors() const { return class_rate_; }
    const std::vector<VariableFactor>& variable_factors() const { return variable_; }

    MultiSeries expand(int truncation) const;
    std::string str() const;

private:
    TablePtr table_;
    Flavor flavor_;
    MultiSeries numerator_;
    std::vector<LinearFactor> linear_;
    std::vector<ClassRateFactor> class_rate_;
    std::vector<VariableFactor> variable_;
};

/// H = sum_t |r|! coeff_t prod_c x_c^{r_c} / (1 - sum_c a_c x_c)^{|r|+1}
/// over a common denominator; class basis.
RationalForm to_H(const ExpPolyForm& form);

/// Htilde with denominator factors P_{c,a} (plus raw per-variable factors
/// when no (c, a) produces a needed coefficient); simple basis.
RationalForm to_Htilde(const ExpPolyForm& form);

struct PredictionReport {
    bool ok = false;
    int from_degree = 0;
    int to_degree = 0;
    std::string mismatch_monomial;  // empty when ok
    std::string expected;           // oracle coefficient at the mismatch
    std::string actual;             // fitted form's coefficient
    std::string str() const;
};

/// Expands the fitted form to fit_truncation + extra and compares against
/// the brute-force oracle, reporting the first mismatched monomial.
PredictionReport verify_prediction(const ExpPolyForm& form, const ModuleSpec& spec,
                                   const TablePtr& table, int fit_truncation, int extra,
                                   long cap = kDefaultTupleCap);

/// Smallest r <= r_max with binom_op(E, g, m, r) identically zero on the
/// reliable window, or -1 when none is; needs truncation >= m * r_max.
long annihilator_order(const MultiSeries& E, std::size_t g, long m, long r_max = 3);

/// Everything the fit pipeline produced for one module, renderable as the
/// sectioned text report or its JSON mirror.
struct FitReport {
    std::string module_text;
    std::string group;
    long d = 0;
    long r_max = 3;
    int truncation = 0;
    int extra = 0;
    long annihilator_m = 0;
    ExpPolyForm form;
    RationalForm h_form;
    RationalForm htilde_form;
    PredictionReport prediction;
    std::vector<std::pair<std::string, long>> annihilator_orders;

    std::string text() const;
    std::string json() const;
};

/// Fits the module's oracle E-series at the given window and assembles the
/// full report; d < 0 means "use spec.gen_degree()". The annihilator
/// section is evaluated on the fitted form expanded to m * r_max, so it
/// stays available when the brute-force cap would bar that window.
FitReport run_fit(const ModuleSpec& spec, const TablePtr& table, long d, int truncation,
                  long r_max = 3, int extra = 2, long cap = kDefaultTupleCap);

}  // namespace fsg
