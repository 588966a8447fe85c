#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsg/group_table.hpp"

namespace fsg {

enum class Basis { Simple, Class };
enum class Flavor { H, E, Htilde, None };

std::string basis_name(Basis b);
std::string flavor_name(Flavor f);

using Exponents = std::vector<int>;

/// Graded lexicographic order: lower total degree first, then exponent
/// vectors in descending lex order (so x^2 precedes x*y precedes y^2).
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

/// A truncated multivariate power series over the cyclotomic field, with one
/// variable per simple (Basis::Simple) or per p-regular class (Basis::Class).
/// Every monomial of total degree <= truncation() is stored exactly; nothing
/// beyond the truncation is represented or trusted. The flavor tag records
/// which generating-function convention the coefficients follow; arithmetic
/// ignores it, transform() rescales between conventions.
class MultiSeries {
public:
    MultiSeries(TablePtr table, Basis basis, Flavor flavor, int truncation);

    static MultiSeries constant(TablePtr table, Basis basis, Flavor flavor, int truncation,
                                const Cyclo& value);
    /// The bare variable of index v in the given basis.
    static MultiSeries variable(TablePtr table, Basis basis, Flavor flavor, int truncation,
                                std::size_t v);

    const TablePtr& table() const { return table_; }
    Basis basis() const { return basis_; }
    Flavor flavor() const { return flavor_; }
    int truncation() const { return truncation_; }
    std::size_t var_count() const { return table_->class_count(); }
    std::string var_name(std::size_t v) const;

    const std::map<Exponents, Cyclo, GradedLex>& terms() const { return terms_; }
    Cyclo coefficient(const Exponents& e) const;
    /// Inserts/overwrites one coefficient; monomials beyond the truncation
    /// are rejected, zeros are erased.
    void set_coefficient(const Exponents& e, const Cyclo& value);

    bool is_zero() const { return terms_.empty(); }
    MultiSeries with_flavor(Flavor f) const;
    /// Copy truncated to a smaller window.
    MultiSeries truncated(int truncation) const;

    MultiSeries operator-() const;
    MultiSeries& operator+=(const MultiSeries& rhs);
    MultiSeries& operator-=(const MultiSeries& rhs);
    MultiSeries& operator*=(const Cyclo& scalar);
    friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator*(MultiSeries a, const Cyclo& s) { return a *= s; }
    friend MultiSeries operator*(const Cyclo& s, MultiSeries a) { return a *= s; }
    bool operator==(const MultiSeries& rhs) const;
    bool operator!=(const MultiSeries& rhs) const { return !(*this == rhs); }

    /// Per-monomial factorial rescale between H, E and H-tilde coefficients
    /// (H-tilde endpoints require the simple basis).
    MultiSeries transform(Flavor to) const;

    /// Exact linear substitution between x_S and x_c variables.
    MultiSeries change_basis(Basis to) const;

    /// Formal partial derivative; the truncation shrinks by one.
    MultiSeries diff(std::size_t v) const;
    /// The class-directed derivative: sum_S phi_S(g) d/dx_S in the simple
    /// basis, d/dx_{c(g)} in the class basis.
    MultiSeries diff_class(std::size_t g) const;
    /// (d_g - 0)(d_g - 1)...(d_g - (m-1)); truncation shrinks by m.
    MultiSeries falling_factorial_op(std::size_t g, long m) const;
    /// ((1/m!) prod_{j<m} (d_g - j))^r; truncation shrinks by m*r.
    MultiSeries binom_op(std::size_t g, long m, long r) const;

    std::string str() const;

private:
    TablePtr table_;
    Basis basis_;
    Flavor flavor_;
    int truncation_;
    std::map<Exponents, Cyclo, GradedLex> terms_;
};

std::ostream& operator<<(std::ostream& os, const MultiSeries& s);

/// exp of a series with zero constant term, truncated; flavor None.
MultiSeries exp_series(const MultiSeries& s);

/// 1/(1 - s) for a series s with zero constant term, truncated; flavor None.
MultiSeries geometric_series(const MultiSeries& s);

/// Multiplicative inverse of a series with invertible constant term.
MultiSeries inverse_series(const MultiSeries& s);

/// Unsigned Stirling number of the first kind: [x^k] prod_{j=0}^{d-1} (x+j).
Integer stirling_first(long d, long k);

}  // namespace fsg
