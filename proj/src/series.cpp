#include "fsg/series.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fsg {

namespace {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

void require_compatible(const MultiSeries& a, const MultiSeries& b) {
    if (a.table() != b.table())
        throw std::invalid_argument("MultiSeries: operands belong to different tables");
    if (a.basis() != b.basis())
        throw std::invalid_argument("MultiSeries: basis mismatch");
}

Flavor join_flavor(Flavor a, Flavor b) { return a == b ? a : Flavor::None; }

Rational factorial_q(long n) { return Rational(factorial(n)); }

}  // namespace

std::string basis_name(Basis b) { return b == Basis::Simple ? "simple" : "class"; }

std::string flavor_name(Flavor f) {
    switch (f) {
        case Flavor::H: return "H";
        case Flavor::E: return "E";
        case Flavor::Htilde: return "Htilde";
        default: return "none";
    }
}

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiSeries::MultiSeries(TablePtr table, Basis basis, Flavor flavor, int truncation)
    : table_(std::move(table)), basis_(basis), flavor_(flavor), truncation_(truncation) {
    if (truncation_ < 0) throw std::invalid_argument("MultiSeries: negative truncation");
}

MultiSeries MultiSeries::constant(TablePtr table, Basis basis, Flavor flavor, int truncation,
                                  const Cyclo& value) {
    MultiSeries s(std::move(table), basis, flavor, truncation);
    s.set_coefficient(Exponents(s.var_count(), 0), value);
    return s;
}

MultiSeries MultiSeries::variable(TablePtr table, Basis basis, Flavor flavor, int truncation,
                                  std::size_t v) {
    MultiSeries s(std::move(table), basis, flavor, truncation);
    Exponents e(s.var_count(), 0);
    e.at(v) = 1;
    s.set_coefficient(e, Cyclo(1));
    return s;
}

std::string MultiSeries::var_name(std::size_t v) const {
    return "x_" + (basis_ == Basis::Simple ? table_->simples()[v] : table_->classes()[v].label);
}

Cyclo MultiSeries::coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Cyclo(0) : it->second;
}

void MultiSeries::set_coefficient(const Exponents& e, const Cyclo& value) {
    if (e.size() != var_count())
        throw std::invalid_argument("MultiSeries: exponent vector has wrong length");
    if (total_degree(e) > truncation_)
        throw std::invalid_argument("MultiSeries: monomial degree exceeds truncation");
    if (value.is_zero())
        terms_.erase(e);
    else
        terms_[e] = value;
}

MultiSeries MultiSeries::with_flavor(Flavor f) const {
    MultiSeries s = *this;
    s.flavor_ = f;
    return s;
}

MultiSeries MultiSeries::truncated(int truncation) const {
    if (truncation > truncation_)
        throw std::invalid_argument("MultiSeries: cannot extend the truncation window");
    MultiSeries s(table_, basis_, flavor_, truncation);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) <= truncation) s.terms_.emplace(e, c);
    return s;
}

MultiSeries MultiSeries::operator-() const {
    MultiSeries s = *this;
    for (auto& [e, c] : s.terms_) c = -c;
    return s;
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
    require_compatible(a, b);
    int n = std::min(a.truncation_, b.truncation_);
    MultiSeries out(a.table_, a.basis_, join_flavor(a.flavor_, b.flavor_), n);
    for (const auto& [e, c] : a.terms_)
        if (total_degree(e) <= n) out.terms_.emplace(e, c);
    for (const auto& [e, c] : b.terms_) {
        if (total_degree(e) > n) continue;
        auto [it, inserted] = out.terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) out.terms_.erase(it);
        }
    }
    return out;
}

MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return a + (-b); }

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    require_compatible(a, b);
    int n = std::min(a.truncation_, b.truncation_);
    MultiSeries out(a.table_, a.basis_, join_flavor(a.flavor_, b.flavor_), n);
    Exponents e(a.var_count());
    for (const auto& [ea, ca] : a.terms_) {
        int da = total_degree(ea);
        if (da > n) continue;
        for (const auto& [eb, cb] : b.terms_) {
            if (da + total_degree(eb) > n) continue;
            for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
            auto [it, inserted] = out.terms_.emplace(e, ca * cb);
            if (!inserted) it->second += ca * cb;
        }
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();)
        it = it->second.is_zero() ? out.terms_.erase(it) : std::next(it);
    return out;
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& rhs) { return *this = *this + rhs; }
MultiSeries& MultiSeries::operator-=(const MultiSeries& rhs) { return *this = *this - rhs; }

MultiSeries& MultiSeries::operator*=(const Cyclo& scalar) {
    if (scalar.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= scalar;
    return *this;
}

bool MultiSeries::operator==(const MultiSeries& rhs) const {
    return table_ == rhs.table_ && basis_ == rhs.basis_ && flavor_ == rhs.flavor_ &&
           truncation_ == rhs.truncation_ && terms_.size() == rhs.terms_.size() &&
           std::equal(terms_.begin(), terms_.end(), rhs.terms_.begin(),
                      [](const auto& a, const auto& b) {
                          return a.first == b.first && a.second == b.second;
                      });
}

MultiSeries MultiSeries::transform(Flavor to) const {
    if (flavor_ == Flavor::None || to == Flavor::None)
        throw std::logic_error("transform: both endpoints need a flavor tag");
    if ((flavor_ == Flavor::Htilde || to == Flavor::Htilde) && basis_ != Basis::Simple)
        throw std::logic_error("transform: H-tilde series live in the simple basis");
    if (to == flavor_) return *this;

    MultiSeries out(table_, basis_, to, truncation_);
    for (const auto& [e, c] : terms_) {
        long n = total_degree(e);
        Rational factor(1);
        switch (flavor_) {  // into E
            case Flavor::H: factor /= factorial_q(n); break;
            case Flavor::Htilde:
                for (int ev : e) factor /= factorial_q(ev);
                break;
            default: break;
        }
        switch (to) {  // out of E
            case Flavor::H: factor *= factorial_q(n); break;
            case Flavor::Htilde:
                for (int ev : e) factor *= factorial_q(ev);
                break;
            default: break;
        }
        out.terms_.emplace(e, c * Cyclo(factor));
    }
    return out;
}

MultiSeries MultiSeries::change_basis(Basis to) const {
    if (to == basis_) return *this;
    if (flavor_ == Flavor::Htilde)
        throw std::logic_error("change_basis: H-tilde series live in the simple basis");

    std::size_t k = var_count();
    std::vector<MultiSeries> sub;
    sub.reserve(k);
    for (std::size_t v = 0; v < k; ++v) {
        MultiSeries form(table_, to, Flavor::None, truncation_);
        Exponents e(k, 0);
        for (std::size_t w = 0; w < k; ++w) {
            e[w] = 1;
            // x_S = sum_c phi_S(c) x_c; x_c = sum_S (|c|/|G|) conj(Phi_S(c)) x_S
            Cyclo coeff = basis_ == Basis::Simple ? table_->phi(v, w)
                                                  : table_->x_class_coeff(w, v);
            if (!coeff.is_zero()) form.terms_.emplace(e, coeff);
            e[w] = 0;
        }
        sub.push_back(std::move(form));
    }

    std::vector<std::vector<MultiSeries>> powers(k);
    auto power = [&](std::size_t v, int p) -> const MultiSeries& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(constant(table_, to, Flavor::None, truncation_, Cyclo(1)));
        while (cache.size() <= static_cast<std::size_t>(p))
            cache.push_back(cache.back() * sub[v]);
        return cache[static_cast<std::size_t>(p)];
    };

    MultiSeries out(table_, to, flavor_, truncation_);
    for (const auto& [e, c] : terms_) {
        MultiSeries term = constant(table_, to, Flavor::None, truncation_, c);
        for (std::size_t v = 0; v < k; ++v)
            if (e[v] > 0) term = term * power(v, e[v]);
        out = out + term.with_flavor(flavor_);
    }
    return out;
}

MultiSeries MultiSeries::diff(std::size_t v) const {
    if (truncation_ < 1) throw std::domain_error("diff: truncation too small");
    MultiSeries out(table_, basis_, flavor_, truncation_ - 1);
    Exponents e(var_count());
    for (const auto& [es, c] : terms_) {
        if (es[v] == 0) continue;
        e = es;
        --e[v];
        out.terms_.emplace(e, c * Cyclo(es[v]));
    }
    return out;
}

MultiSeries MultiSeries::diff_class(std::size_t g) const {
    if (g >= var_count()) throw std::invalid_argument("diff_class: unknown class index");
    if (truncation_ < 1) throw std::domain_error("diff_class: truncation too small");
    if (basis_ == Basis::Class) return diff(g);
    MultiSeries out(table_, basis_, flavor_, truncation_ - 1);
    for (std::size_t s = 0; s < var_count(); ++s) {
        const Cyclo& scale = table_->phi(s, g);
        if (scale.is_zero()) continue;
        out = out + diff(s) * scale;
    }
    return out;
}

MultiSeries MultiSeries::falling_factorial_op(std::size_t g, long m) const {
    if (m < 1) throw std::invalid_argument("falling_factorial_op: m must be positive");
    if (truncation_ < m) throw std::domain_error("falling_factorial_op: truncation too small");
    MultiSeries acc = *this;
    for (long j = 0; j < m; ++j) {
        MultiSeries next = acc.diff_class(g);
        if (j > 0) next = next - acc * Cyclo(j);
        acc = std::move(next);
    }
    return acc;
}

MultiSeries MultiSeries::binom_op(std::size_t g, long m, long r) const {
    if (m < 1) throw std::invalid_argument("binom_op: m must be positive");
    if (r < 1) throw std::invalid_argument("binom_op: r must be positive");
    if (truncation_ < m * r) throw std::domain_error("binom_op: truncation too small");
    MultiSeries acc = *this;
    Cyclo scale = Cyclo(Rational(1) / factorial_q(m));
    for (long i = 0; i < r; ++i) acc = acc.falling_factorial_op(g, m) * scale;
    return acc;
}

std::string MultiSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string mono;
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += var_name(v);
            if (e[v] > 1) mono += "^" + std::to_string(e[v]);
        }
        if (c.is_rational()) {
            Rational q = c.to_rational();
            bool negative = q < 0;
            Rational mag = negative ? Rational(-q) : q;
            std::string body;
            if (mono.empty())
                body = mag.get_str();
            else if (mag == 1)
                body = mono;
            else
                body = mag.get_str() + "*" + mono;
            out << (first ? (negative ? "-" : "") : (negative ? " - " : " + ")) << body;
        } else {
            out << (first ? "" : " + ") << "(" << c.str() << ")";
            if (!mono.empty()) out << "*" << mono;
        }
        first = false;
    }
    return out.str();
}

std::ostream& operator<<(std::ostream& os, const MultiSeries& s) { return os << s.str(); }

MultiSeries exp_series(const MultiSeries& s) {
    Exponents zero(s.var_count(), 0);
    if (!s.coefficient(zero).is_zero())
        throw std::invalid_argument("exp_series: nonzero constant term");
    MultiSeries acc =
        MultiSeries::constant(s.table(), s.basis(), Flavor::None, s.truncation(), Cyclo(1));
    MultiSeries pow = acc;
    for (int k = 1; k <= s.truncation(); ++k) {
        pow = pow * s.with_flavor(Flavor::None);
        acc = acc + pow * Cyclo(Rational(1) / Rational(factorial(k)));
    }
    return acc;
}

MultiSeries geometric_series(const MultiSeries& s) {
    Exponents zero(s.var_count(), 0);
    if (!s.coefficient(zero).is_zero())
        throw std::invalid_argument("geometric_series: nonzero constant term");
    MultiSeries acc =
        MultiSeries::constant(s.table(), s.basis(), Flavor::None, s.truncation(), Cyclo(1));
    MultiSeries pow = acc;
    for (int k = 1; k <= s.truncation(); ++k) {
        pow = pow * s.with_flavor(Flavor::None);
        acc = acc + pow;
    }
    return acc;
}

MultiSeries inverse_series(const MultiSeries& s) {
    Exponents zero(s.var_count(), 0);
    Cyclo c0 = s.coefficient(zero);
    if (c0.is_zero()) throw std::domain_error("inverse_series: constant term is zero");
    Cyclo inv = c0.inverse();
    MultiSeries one =
        MultiSeries::constant(s.table(), s.basis(), Flavor::None, s.truncation(), Cyclo(1));
    MultiSeries t = one - s.with_flavor(Flavor::None) * inv;
    return geometric_series(t) * inv;
}

Integer stirling_first(long d, long k) {
    if (d < 0 || k < 0 || k > d) return Integer(0);
    std::vector<Integer> coeffs{Integer(1)};
    for (long j = 0; j < d; ++j) {
        std::vector<Integer> next(coeffs.size() + 1);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] += Integer(j) * coeffs[i];
        }
        coeffs = std::move(next);
    }
    return coeffs[static_cast<std::size_t>(k)];
}

}  // namespace fsg
