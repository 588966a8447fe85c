#include "fsg/fit.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "fsg/linalg.hpp"

namespace fsg {

namespace {

Integer ipow(long base, long exp) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), Integer(base).get_mpz_t(), static_cast<unsigned long>(exp));
    return out;
}

/// Coefficient of x^j in x^r exp(a x).
Cyclo exp_mono_coeff(long a, long r, int j) {
    if (j < r) return Cyclo(0);
    long d = j - r;
    return Cyclo(Rational(ipow(a, d), factorial(d)));
}

std::vector<Exponents> exponents_through(std::size_t vars, int degree) {
    std::vector<Exponents> out;
    Exponents cur(vars, 0);
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos == vars) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

std::string class_var(const GroupTable& table, std::size_t c) {
    return "x_" + table.classes()[c].label;
}

std::string simple_var(const GroupTable& table, std::size_t s) {
    return "x_" + table.simples()[s];
}

std::string monomial_str(const GroupTable& table, const Exponents& e,
                         std::string (*var)(const GroupTable&, std::size_t)) {
    std::string out;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        if (!out.empty()) out += "*";
        out += var(table, v);
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
    }
    return out.empty() ? "1" : out;
}

bool term_less(const ExpPolyTerm& a, const ExpPolyTerm& b) {
    long ra = std::accumulate(a.rates.begin(), a.rates.end(), 0L);
    long rb = std::accumulate(b.rates.begin(), b.rates.end(), 0L);
    if (ra != rb) return ra < rb;
    if (a.rates != b.rates) return a.rates < b.rates;
    long pa = std::accumulate(a.powers.begin(), a.powers.end(), 0L);
    long pb = std::accumulate(b.powers.begin(), b.powers.end(), 0L);
    if (pa != pb) return pa < pb;
    return a.powers < b.powers;
}

}  // namespace

ExpPolyForm::ExpPolyForm(TablePtr table, std::vector<ExpPolyTerm> terms)
    : table_(std::move(table)) {
    if (!table_) throw std::invalid_argument("exp-poly form: null table");
    std::size_t k = table_->class_count();
    for (auto& t : terms) {
        if (t.powers.size() != k || t.rates.size() != k)
            throw std::invalid_argument("exp-poly term: powers/rates must have one entry per class");
        for (long p : t.powers)
            if (p < 0) throw std::invalid_argument("exp-poly term: negative power");
        for (long a : t.rates)
            if (a < 0) throw std::invalid_argument("exp-poly term: negative rate");
        if (!t.coefficient.is_zero()) terms_.push_back(std::move(t));
    }
    std::sort(terms_.begin(), terms_.end(), term_less);
}

long ExpPolyForm::max_rate() const {
    long best = 0;
    for (const auto& t : terms_)
        for (long a : t.rates) best = std::max(best, a);
    return best;
}

MultiSeries ExpPolyForm::expand(int truncation) const {
    MultiSeries out(table_, Basis::Class, Flavor::E, truncation);
    std::size_t k = table_->class_count();
    for (const auto& e : exponents_through(k, truncation)) {
        Cyclo total(0);
        for (const auto& t : terms_) {
            Cyclo part = t.coefficient;
            for (std::size_t c = 0; c < k && !part.is_zero(); ++c)
                part *= exp_mono_coeff(t.rates[c], t.powers[c], e[c]);
            total += part;
        }
        if (!total.is_zero()) out.set_coefficient(e, total);
    }
    return out;
}

std::string ExpPolyForm::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        std::string body;
        for (std::size_t c = 0; c < t.powers.size(); ++c) {
            if (t.powers[c] == 0) continue;
            if (!body.empty()) body += "*";
            body += class_var(*table_, c);
            if (t.powers[c] > 1) body += "^" + std::to_string(t.powers[c]);
        }
        for (std::size_t c = 0; c < t.rates.size(); ++c) {
            if (t.rates[c] == 0) continue;
            if (!body.empty()) body += "*";
            body += "exp(";
            if (t.rates[c] != 1) body += std::to_string(t.rates[c]) + "*";
            body += class_var(*table_, c) + ")";
        }
        const Cyclo& v = t.coefficient;
        if (v.is_rational()) {
            Rational q = v.to_rational();
            bool neg = q < 0;
            Rational mag = neg ? Rational(-q) : q;
            out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (mag == 1 && !body.empty())
                out += body;
            else
                out += mag.get_str() + (body.empty() ? "" : "*" + body);
        } else {
            if (!first) out += " + ";
            out += "(" + v.str() + ")" + (body.empty() ? "" : "*" + body);
        }
        first = false;
    }
    return out;
}

namespace {

struct Candidate {
    std::vector<long> rates;
    std::vector<long> powers;
};

Cyclo candidate_coeff(const Candidate& cand, const Exponents& e) {
    Cyclo out(1);
    for (std::size_t c = 0; c < e.size() && !out.is_zero(); ++c)
        out *= exp_mono_coeff(cand.rates[c], cand.powers[c], e[c]);
    return out;
}

/// Exact solve of coefficient(e) equations over the candidate set; throws
/// the shared fit errors on ambiguity/inconsistency.
LinearSolveResult solve_candidates(const MultiSeries& E, const std::vector<Candidate>& cands,
                                   const std::vector<Exponents>& window) {
    Matrix m(window.size(), cands.size());
    Vec rhs(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) {
        for (std::size_t j = 0; j < cands.size(); ++j) m.at(i, j) = candidate_coeff(cands[j], window[i]);
        rhs[i] = E.coefficient(window[i]);
    }
    return solve_general(m, rhs);
}

}  // namespace

ExpPolyForm fit_exp_poly(const MultiSeries& E, long d, long r_max) {
    if (E.basis() != Basis::Class)
        throw std::invalid_argument("fit_exp_poly: series must be in the class basis");
    if (E.flavor() != Flavor::E)
        throw std::invalid_argument("fit_exp_poly: series must carry flavor E");
    if (d < 0) throw std::invalid_argument("fit_exp_poly: negative generation degree");
    if (r_max < 1) throw std::invalid_argument("fit_exp_poly: r_max must be at least 1");

    const TablePtr& table = E.table();
    std::size_t k = table->class_count();
    if (E.is_zero()) return ExpPolyForm(table, {});

    long A = d * table->order();
    int N = E.truncation();
    long r_line = std::min(r_max, (static_cast<long>(N) + 1) / (A + 1));
    if (r_line < 1)
        throw std::domain_error("fit: window shorter than the rate range; request larger N");

    // Stage 1: fit each class axis alone against x^r exp(a x), a <= A, r < r_line.
    std::vector<std::vector<std::pair<long, long>>> line_pairs(k);
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::pair<long, long>> family;
        for (long a = 0; a <= A; ++a)
            for (long r = 0; r < r_line; ++r) family.emplace_back(a, r);
        Matrix m(N + 1, family.size());
        Vec rhs(N + 1);
        for (int j = 0; j <= N; ++j) {
            for (std::size_t col = 0; col < family.size(); ++col)
                m.at(j, col) = exp_mono_coeff(family[col].first, family[col].second, j);
            Exponents e(k, 0);
            e[c] = j;
            rhs[j] = E.coefficient(e);
        }
        LinearSolveResult res = solve_general(m, rhs);
        if (!res.consistent) {
            if (r_line < r_max)
                throw std::domain_error("fit: class '" + table->classes()[c].label +
                                        "' line needs more powers than the window "
                                        "determines; request larger N");
            throw std::domain_error("fit: series not in solution space at this truncation "
                                    "(class '" + table->classes()[c].label + "' line)");
        }
        if (!res.unique)
            throw std::domain_error("fit: class '" + table->classes()[c].label +
                                    "' line is underdetermined; request larger N");
        std::vector<std::pair<long, long>>& pairs = line_pairs[c];
        pairs.emplace_back(0, 0);
        for (std::size_t col = 0; col < family.size(); ++col)
            if (!res.solution[col].is_zero() && family[col] != std::make_pair(0L, 0L))
                pairs.push_back(family[col]);
        std::sort(pairs.begin(), pairs.end());
    }

    // Stage 2: pooled solve over products of the observed per-class pairs,
    // checked against every coefficient in the window.
    std::vector<Exponents> window = exponents_through(k, N);
    std::vector<Candidate> cands;
    {
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            Candidate cand{std::vector<long>(k), std::vector<long>(k)};
            for (std::size_t c = 0; c < k; ++c) {
                cand.rates[c] = line_pairs[c][idx[c]].first;
                cand.powers[c] = line_pairs[c][idx[c]].second;
            }
            cands.push_back(std::move(cand));
            std::size_t c = 0;
            while (c < k && ++idx[c] == line_pairs[c].size()) idx[c++] = 0;
            if (c == k) break;
        }
    }
    LinearSolveResult pooled = solve_candidates(E, cands, window);
    if (pooled.consistent && !pooled.unique)
        throw std::domain_error("fit: pooled system is underdetermined; request larger N");
    if (!pooled.consistent) {
        // The per-line pairs missed a cross term; retry on the full grid when
        // the window can still determine it.
        std::size_t grid = 1;
        for (std::size_t c = 0; c < k; ++c) {
            grid *= static_cast<std::size_t>(A + 1) * static_cast<std::size_t>(r_max);
            if (grid > window.size()) break;
        }
        if (grid > window.size())
            throw std::domain_error("fit: pooled system inconsistent and the full grid "
                                    "exceeds the window; request larger N");
        cands.clear();
        std::vector<long> ar(2 * k, 0);  // rates then powers, one odometer
        while (true) {
            Candidate cand{std::vector<long>(ar.begin(), ar.begin() + k),
                           std::vector<long>(ar.begin() + k, ar.end())};
            cands.push_back(std::move(cand));
            std::size_t i = 0;
            for (; i < 2 * k; ++i) {
                long limit = i < k ? A : r_max - 1;
                if (ar[i] < limit) {
                    ++ar[i];
                    break;
                }
                ar[i] = 0;
            }
            if (i == 2 * k) break;
        }
        pooled = solve_candidates(E, cands, window);
        if (!pooled.consistent)
            throw std::domain_error("fit: series not in solution space at this truncation");
        if (!pooled.unique)
            throw std::domain_error("fit: pooled system is underdetermined; request larger N");
    }

    std::vector<ExpPolyTerm> terms;
    for (std::size_t j = 0; j < cands.size(); ++j)
        if (!pooled.solution[j].is_zero())
            terms.push_back(ExpPolyTerm{pooled.solution[j], cands[j].powers, cands[j].rates});
    ExpPolyForm form(table, std::move(terms));
    if (!(form.expand(N) == E))
        throw std::logic_error("fit: nonzero residual on the fit window");
    return form;
}

RationalForm::RationalForm(TablePtr table, Flavor flavor, MultiSeries numerator,
                           std::vector<LinearFactor> linear,
                           std::vector<ClassRateFactor> class_rate,
                           std::vector<VariableFactor> variable)
    : table_(std::move(table)),
      flavor_(flavor),
      numerator_(std::move(numerator)),
      linear_(std::move(linear)),
      class_rate_(std::move(class_rate)),
      variable_(std::move(variable)) {
    if (flavor_ != Flavor::H && flavor_ != Flavor::Htilde)
        throw std::invalid_argument("rational form: flavor must be H or Htilde");
}

namespace {

MultiSeries linear_form_series(const TablePtr& table, Basis basis, int truncation,
                               const std::vector<long>& rates) {
    MultiSeries out = MultiSeries::constant(table, basis, Flavor::None, truncation, Cyclo(1));
    Exponents e(table->class_count(), 0);
    for (std::size_t c = 0; c < rates.size(); ++c) {
        if (rates[c] == 0) continue;
        e[c] = 1;
        out.set_coefficient(e, Cyclo(-rates[c]));
        e[c] = 0;
    }
    return out;
}

MultiSeries one_minus_var(const TablePtr& table, Basis basis, int truncation, std::size_t v,
                          const Cyclo& coeff) {
    MultiSeries out = MultiSeries::constant(table, basis, Flavor::None, truncation, Cyclo(1));
    if (!coeff.is_zero()) {
        Exponents e(table->class_count(), 0);
        e[v] = 1;
        out.set_coefficient(e, -coeff);
    }
    return out;
}

/// P_{c,a} = prod_S (1 - a beta_S x_S) with beta_S = |c| conj(Phi_S(c)) / |G|.
MultiSeries class_rate_series(const TablePtr& table, int truncation, std::size_t cls, long rate) {
    MultiSeries out = MultiSeries::constant(table, Basis::Simple, Flavor::None, truncation, Cyclo(1));
    for (std::size_t s = 0; s < table->class_count(); ++s)
        out = out * one_minus_var(table, Basis::Simple, truncation,
                                  s, Cyclo(rate) * table->x_class_coeff(s, cls));
    return out;
}

MultiSeries retruncated(const MultiSeries& s, int truncation) {
    MultiSeries out(s.table(), s.basis(), s.flavor(), truncation);
    for (const auto& [e, v] : s.terms()) {
        int deg = std::accumulate(e.begin(), e.end(), 0);
        if (deg <= truncation) out.set_coefficient(e, v);
    }
    return out;
}

}  // namespace

MultiSeries RationalForm::expand(int truncation) const {
    MultiSeries out = retruncated(numerator_.with_flavor(Flavor::None), truncation);
    for (const auto& f : linear_) {
        MultiSeries inv = inverse_series(linear_form_series(table_, basis(), truncation, f.rates));
        for (long i = 0; i < f.multiplicity; ++i) out = out * inv;
    }
    for (const auto& f : class_rate_) {
        MultiSeries inv = inverse_series(class_rate_series(table_, truncation, f.cls, f.rate));
        for (long i = 0; i < f.multiplicity; ++i) out = out * inv;
    }
    for (const auto& f : variable_) {
        MultiSeries inv =
            inverse_series(one_minus_var(table_, basis(), truncation, f.var, f.coeff));
        for (long i = 0; i < f.multiplicity; ++i) out = out * inv;
    }
    return out.with_flavor(flavor_);
}

std::string RationalForm::str() const {
    std::string num = numerator_.str();
    if (num.find(' ') != std::string::npos) num = "(" + num + ")";
    std::vector<std::string> parts;
    for (const auto& f : linear_) {
        std::string s = "1";
        for (std::size_t c = 0; c < f.rates.size(); ++c) {
            if (f.rates[c] == 0) continue;
            s += " - ";
            if (f.rates[c] != 1) s += std::to_string(f.rates[c]) + "*";
            s += class_var(*table_, c);
        }
        s = "(" + s + ")";
        if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
        parts.push_back(s);
    }
    for (const auto& f : class_rate_) {
        std::string s =
            "P(" + table_->classes()[f.cls].label + "," + std::to_string(f.rate) + ")";
        if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
        parts.push_back(s);
    }
    for (const auto& f : variable_) {
        std::string s = "1";
        if (f.coeff.is_rational()) {
            Rational q = f.coeff.to_rational();
            bool neg = q < 0;
            Rational mag = neg ? Rational(-q) : q;
            s += neg ? " + " : " - ";
            if (mag != 1) s += mag.get_str() + "*";
            s += simple_var(*table_, f.var);
        } else {
            s += " - (" + f.coeff.str() + ")*" + simple_var(*table_, f.var);
        }
        s = "(" + s + ")";
        if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
        parts.push_back(s);
    }
    if (parts.empty()) return num;
    std::string den;
    for (const auto& p : parts) {
        if (!den.empty()) den += "*";
        den += p;
    }
    if (parts.size() > 1) den = "(" + den + ")";
    return num + " / " + den;
}

RationalForm to_H(const ExpPolyForm& form) {
    const TablePtr& table = form.table();
    std::size_t k = table->class_count();

    std::vector<LinearFactor> dens;
    long max_pow = 0;
    for (const auto& t : form.terms()) {
        long total = std::accumulate(t.powers.begin(), t.powers.end(), 0L);
        max_pow = std::max(max_pow, total);
        if (std::all_of(t.rates.begin(), t.rates.end(), [](long a) { return a == 0; })) continue;
        auto it = std::find_if(dens.begin(), dens.end(),
                               [&](const LinearFactor& f) { return f.rates == t.rates; });
        if (it == dens.end())
            dens.push_back(LinearFactor{t.rates, total + 1});
        else
            it->multiplicity = std::max(it->multiplicity, total + 1);
    }
    std::sort(dens.begin(), dens.end(), [](const LinearFactor& a, const LinearFactor& b) {
        long sa = std::accumulate(a.rates.begin(), a.rates.end(), 0L);
        long sb = std::accumulate(b.rates.begin(), b.rates.end(), 0L);
        if (sa != sb) return sa < sb;
        return a.rates < b.rates;
    });

    long den_deg = 0;
    for (const auto& f : dens) den_deg += f.multiplicity;
    int trunc = static_cast<int>(den_deg + max_pow);

    MultiSeries num(table, Basis::Class, Flavor::None, trunc);
    for (const auto& t : form.terms()) {
        long total = std::accumulate(t.powers.begin(), t.powers.end(), 0L);
        MultiSeries piece(table, Basis::Class, Flavor::None, trunc);
        Exponents e(k, 0);
        for (std::size_t c = 0; c < k; ++c) e[c] = static_cast<int>(t.powers[c]);
        piece.set_coefficient(e, t.coefficient * Cyclo(Rational(factorial(total))));
        for (const auto& f : dens) {
            long p = f.multiplicity - (f.rates == t.rates ? total + 1 : 0);
            MultiSeries lin = linear_form_series(table, Basis::Class, trunc, f.rates);
            for (long i = 0; i < p; ++i) piece = piece * lin;
        }
        num += piece;
    }
    return RationalForm(table, Flavor::H, std::move(num), std::move(dens), {}, {});
}

RationalForm to_Htilde(const ExpPolyForm& form) {
    const TablePtr& table = form.table();
    std::size_t k = table->class_count();

    struct TermData {
        Cyclo coeff;
        std::vector<Cyclo> gamma;                 // per simple
        std::map<Exponents, Cyclo, GradedLex> monomials;  // class monomial -> simple expansion
    };
    std::vector<TermData> data;
    long max_mono = 0;
    for (const auto& t : form.terms()) {
        TermData td;
        td.coeff = t.coefficient;
        td.gamma.resize(k);
        for (std::size_t s = 0; s < k; ++s) {
            Cyclo g(0);
            for (std::size_t c = 0; c < k; ++c)
                if (t.rates[c] != 0) g += Cyclo(t.rates[c]) * table->x_class_coeff(s, c);
            td.gamma[s] = g;
        }
        long total = std::accumulate(t.powers.begin(), t.powers.end(), 0L);
        max_mono = std::max(max_mono, total);
        MultiSeries mono = MultiSeries::constant(table, Basis::Simple, Flavor::None,
                                                 static_cast<int>(total), Cyclo(1));
        for (std::size_t c = 0; c < k; ++c) {
            if (t.powers[c] == 0) continue;
            MultiSeries line(table, Basis::Simple, Flavor::None, static_cast<int>(total));
            Exponents e(k, 0);
            for (std::size_t s = 0; s < k; ++s) {
                const Cyclo& beta = table->x_class_coeff(s, c);
                if (beta.is_zero()) continue;
                e[s] = 1;
                line.set_coefficient(e, beta);
                e[s] = 0;
            }
            for (long i = 0; i < t.powers[c]; ++i) mono = mono * line;
        }
        td.monomials = mono.terms();
        data.push_back(std::move(td));
    }

    struct Needed {
        std::size_t var;
        Cyclo gamma;
        long mult;
    };
    std::vector<Needed> needed;
    auto find_needed = [&](std::size_t var, const Cyclo& gamma) {
        return std::find_if(needed.begin(), needed.end(), [&](const Needed& n) {
            return n.var == var && n.gamma == gamma;
        });
    };
    for (const auto& td : data) {
        for (std::size_t s = 0; s < k; ++s) {
            if (td.gamma[s].is_zero()) continue;
            long mu_max = 0;
            for (const auto& [mu, d] : td.monomials) mu_max = std::max(mu_max, long(mu[s]));
            auto it = find_needed(s, td.gamma[s]);
            if (it == needed.end())
                needed.push_back(Needed{s, td.gamma[s], mu_max + 1});
            else
                it->mult = std::max(it->mult, mu_max + 1);
        }
    }

    // Cover the needed per-variable factors by canonical P_{c,a}; a factor a
    // P_{c,a} supplies on a variable that needs less (or is absent) spills
    // into the numerator, one that matches no (c, a) stays as a raw factor.
    std::vector<ClassRateFactor> class_rate;
    std::vector<VariableFactor> raw;
    std::vector<Needed> spill;
    std::vector<Needed> remaining = needed;
    for (bool progress = true; progress;) {
        progress = false;
        for (auto& entry : remaining) {
            if (entry.mult == 0) continue;
            progress = true;
            long rate = -1;
            std::size_t cls = 0;
            for (std::size_t c = 0; c < k && rate < 0; ++c) {
                const Cyclo& beta = table->x_class_coeff(entry.var, c);
                if (beta.is_zero()) continue;
                Cyclo ratio = entry.gamma * beta.inverse();
                if (!ratio.is_rational()) continue;
                Rational q = ratio.to_rational();
                if (q < 0 || q.get_den() != 1) continue;
                rate = q.get_num().get_si();
                cls = c;
            }
            long m = entry.mult;
            if (rate < 0) {
                raw.push_back(VariableFactor{entry.var, entry.gamma, m});
                entry.mult = 0;
                break;  // restart the scan
            }
            auto cr = std::find_if(class_rate.begin(), class_rate.end(),
                                   [&](const ClassRateFactor& f) {
                                       return f.cls == cls && f.rate == rate;
                                   });
            if (cr == class_rate.end())
                class_rate.push_back(ClassRateFactor{cls, rate, m});
            else
                cr->multiplicity += m;
            for (std::size_t s = 0; s < k; ++s) {
                Cyclo supplied = Cyclo(rate) * table->x_class_coeff(s, cls);
                if (supplied.is_zero()) continue;
                long excess = m;
                auto it = std::find_if(remaining.begin(), remaining.end(), [&](const Needed& n) {
                    return n.var == s && n.gamma == supplied;
                });
                if (it != remaining.end()) {
                    long dec = std::min(it->mult, m);
                    it->mult -= dec;
                    excess = m - dec;
                }
                if (excess > 0) {
                    auto sp = std::find_if(spill.begin(), spill.end(), [&](const Needed& n) {
                        return n.var == s && n.gamma == supplied;
                    });
                    if (sp == spill.end())
                        spill.push_back(Needed{s, supplied, excess});
                    else
                        sp->mult += excess;
                }
            }
            break;  // restart the scan: coverage may have zeroed later entries
        }
    }
    std::sort(class_rate.begin(), class_rate.end(),
              [](const ClassRateFactor& a, const ClassRateFactor& b) {
                  return std::tie(a.cls, a.rate) < std::tie(b.cls, b.rate);
              });

    long den_deg = 0;
    for (const auto& n : needed) den_deg += n.mult;
    long spill_deg = 0;
    for (const auto& n : spill) spill_deg += n.mult;
    int trunc = static_cast<int>(den_deg + spill_deg + max_mono);

    MultiSeries num(table, Basis::Simple, Flavor::None, trunc);
    for (const auto& td : data) {
        for (const auto& [mu, dcoef] : td.monomials) {
            Rational fact(1);
            for (int m : mu) fact *= Rational(factorial(m));
            MultiSeries piece(table, Basis::Simple, Flavor::None, trunc);
            piece.set_coefficient(mu, td.coeff * dcoef * Cyclo(fact));
            for (const auto& n : needed) {
                long p = n.mult;
                if (td.gamma[n.var] == n.gamma) p -= mu[n.var] + 1;
                MultiSeries lin = one_minus_var(table, Basis::Simple, trunc, n.var, n.gamma);
                for (long i = 0; i < p; ++i) piece = piece * lin;
            }
            num += piece;
        }
    }
    for (const auto& n : spill) {
        MultiSeries lin = one_minus_var(table, Basis::Simple, trunc, n.var, n.gamma);
        for (long i = 0; i < n.mult; ++i) num = num * lin;
    }
    return RationalForm(table, Flavor::Htilde, std::move(num), {}, std::move(class_rate),
                        std::move(raw));
}

std::string PredictionReport::str() const {
    if (to_degree < from_degree) return "no degrees beyond the window were checked";
    if (ok)
        return "degrees " + std::to_string(from_degree) + ".." + std::to_string(to_degree) +
               " match the oracle";
    return "mismatch at " + mismatch_monomial + ": oracle has " + expected + ", form gives " +
           actual;
}

PredictionReport verify_prediction(const ExpPolyForm& form, const ModuleSpec& spec,
                                   const TablePtr& table, int fit_truncation, int extra,
                                   long cap) {
    if (extra < 0) throw std::invalid_argument("verify_prediction: negative extra window");
    int T = fit_truncation + extra;
    MultiSeries oracle =
        brute_force_series(spec, table, T, Flavor::E, cap).change_basis(Basis::Class);
    MultiSeries mine = form.expand(T);
    PredictionReport rep;
    rep.from_degree = fit_truncation + 1;
    rep.to_degree = T;
    MultiSeries diff = oracle - mine;
    if (diff.is_zero()) {
        rep.ok = true;
        return rep;
    }
    const auto& [e, v] = *diff.terms().begin();
    rep.ok = false;
    rep.mismatch_monomial = monomial_str(*table, e, class_var);
    rep.expected = oracle.coefficient(e).str();
    rep.actual = mine.coefficient(e).str();
    return rep;
}

long annihilator_order(const MultiSeries& E, std::size_t g, long m, long r_max) {
    if (m < 1) throw std::invalid_argument("annihilator_order: m must be positive");
    if (r_max < 1) throw std::invalid_argument("annihilator_order: r_max must be positive");
    if (E.truncation() < m * r_max)
        throw std::domain_error("annihilator_order: truncation too small");
    for (long r = 1; r <= r_max; ++r)
        if (E.binom_op(g, m, r).is_zero()) return r;
    return -1;
}

std::string FitReport::text() const {
    std::ostringstream out;
    out << "FIT\n";
    out << "  module: " << module_text << "\n";
    out << "  group: " << group << "\n";
    out << "  generation degree: " << d << "\n";
    out << "  window: coefficients through degree " << truncation << "\n";
    out << "  E = " << form.str() << "\n";
    out << "FORM\n";
    out << "  H = " << h_form.str() << "\n";
    out << "  Htilde = " << htilde_form.str() << "\n";
    out << "PREDICTION\n";
    out << "  " << prediction.str() << "\n";
    out << "ANNIHILATOR\n";
    out << "  m = " << annihilator_m << ", r_max = " << r_max << "\n";
    for (const auto& [label, r] : annihilator_orders) {
        out << "  class " << label << ": ";
        if (r < 0)
            out << "no order up to r_max\n";
        else
            out << "r = " << r << "\n";
    }
    return out.str();
}

std::string FitReport::json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : form.terms()) {
        terms.push_back(nlohmann::ordered_json{
            {"coefficient", t.coefficient.str()}, {"powers", t.powers}, {"rates", t.rates}});
    }
    j["fit"] = nlohmann::ordered_json{{"module", module_text},
                                      {"group", group},
                                      {"generation_degree", d},
                                      {"truncation", truncation},
                                      {"r_max", r_max},
                                      {"E", form.str()},
                                      {"terms", terms}};
    j["form"] = nlohmann::ordered_json{{"H", h_form.str()}, {"Htilde", htilde_form.str()}};
    nlohmann::ordered_json pred = nlohmann::ordered_json{{"ok", prediction.ok},
                                                         {"from_degree", prediction.from_degree},
                                                         {"to_degree", prediction.to_degree}};
    if (!prediction.ok) {
        pred["mismatch_monomial"] = prediction.mismatch_monomial;
        pred["expected"] = prediction.expected;
        pred["actual"] = prediction.actual;
    }
    j["prediction"] = pred;
    nlohmann::ordered_json orders = nlohmann::ordered_json::object();
    for (const auto& [label, r] : annihilator_orders) {
        if (r < 0)
            orders[label] = nullptr;
        else
            orders[label] = r;
    }
    j["annihilator"] =
        nlohmann::ordered_json{{"m", annihilator_m}, {"r_max", r_max}, {"orders", orders}};
    return j.dump(2);
}

FitReport run_fit(const ModuleSpec& spec, const TablePtr& table, long d, int truncation,
                  long r_max, int extra, long cap) {
    long dd = d >= 0 ? d : spec.gen_degree();
    MultiSeries E =
        brute_force_series(spec, table, truncation, Flavor::E, cap).change_basis(Basis::Class);
    ExpPolyForm form = fit_exp_poly(E, dd, r_max);
    RationalForm h = to_H(form);
    RationalForm ht = to_Htilde(form);
    PredictionReport pred = verify_prediction(form, spec, table, truncation, extra, cap);
    long m = dd * table->order() + 1;
    MultiSeries E_ann = form.expand(static_cast<int>(m * r_max));
    std::vector<std::pair<std::string, long>> orders;
    for (std::size_t g = 0; g < table->class_count(); ++g)
        orders.emplace_back(table->classes()[g].label, annihilator_order(E_ann, g, m, r_max));
    return FitReport{spec.str(),  table->name(), dd,  r_max, truncation, extra,
                     m,           std::move(form), std::move(h), std::move(ht),
                     std::move(pred), std::move(orders)};
}

}  // namespace fsg
