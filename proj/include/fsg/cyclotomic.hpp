#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

namespace fsg {

using Rational = mpq_class;
using Integer = mpz_class;

Integer factorial(long n);
Integer binomial(long n, long k);

/// Euler totient, by trial-division factorization. Intended for small n.
long euler_phi(long n);

/// Coefficients of the n-th cyclotomic polynomial, constant term first,
/// leading coefficient (always 1) last. Cached per n.
const std::vector<Integer>& cyclotomic_polynomial(long n);

/// An exact element of the cyclotomic field Q(zeta_e).
///
/// Representation: the conductor e and a coefficient vector of exact rationals
/// of length phi(e), giving the residue of the element modulo the e-th
/// cyclotomic polynomial in the power basis 1, zeta, ..., zeta^(phi(e)-1).
/// The residue is unique, so within a fixed conductor two values are equal
/// iff their coefficient vectors are equal. Values that turn out to be
/// rational are stored at conductor 1; mixed-conductor arithmetic lifts both
/// operands to the lcm of their conductors via zeta_a -> zeta_m^(m/a).
///
/// All operations are exact and throw on contract violations; instances are
/// immutable values and safe to share across threads.
class CyclotomicNumber {
public:
    CyclotomicNumber() : conductor_(1), coeffs_(1, Rational(0)) {}
    CyclotomicNumber(long n) : conductor_(1), coeffs_(1, Rational(n)) {}
    CyclotomicNumber(const Integer& n) : conductor_(1), coeffs_(1, Rational(n)) {}
    CyclotomicNumber(const Rational& q) : conductor_(1), coeffs_(1, q) {
        coeffs_[0].canonicalize();  // GMP leaves e.g. mpq_class(2,4) unreduced
    }

    /// zeta_e^k, reduced to canonical form (k may be any integer).
    static CyclotomicNumber root_of_unity(long e, long k);

    /// Constructs from an explicit coefficient vector over powers of zeta_e;
    /// the vector may have any length up to e and is reduced.
    static CyclotomicNumber from_coefficients(long e, std::vector<Rational> raw);

    long conductor() const { return conductor_; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const { return conductor_ == 1; }
    /// Throws std::domain_error if the value is not rational.
    Rational to_rational() const;
    bool is_integer() const;
    Integer to_integer() const;

    /// The same value viewed in Q(zeta_m); requires conductor() | m.
    CyclotomicNumber lifted_to(long m) const;

    CyclotomicNumber operator-() const;
    CyclotomicNumber& operator+=(const CyclotomicNumber& rhs);
    CyclotomicNumber& operator-=(const CyclotomicNumber& rhs);
    CyclotomicNumber& operator*=(const CyclotomicNumber& rhs);
    CyclotomicNumber& operator/=(const CyclotomicNumber& rhs);

    friend CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
    friend CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
    friend CyclotomicNumber operator*(CyclotomicNumber a, const CyclotomicNumber& b) { return a *= b; }
    friend CyclotomicNumber operator/(CyclotomicNumber a, const CyclotomicNumber& b) { return a /= b; }

    /// Complex conjugation, zeta -> zeta^(e-1).
    CyclotomicNumber conj() const;

    /// Multiplicative inverse; throws std::domain_error on zero.
    CyclotomicNumber inverse() const;

    friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);
    friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

    /// Canonical rendering; "z" denotes zeta_conductor, terms in ascending
    /// powers, e.g. "-1/2 + 3*z^2". Rational values render as plain rationals.
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const CyclotomicNumber& v);

private:
    long conductor_;
    std::vector<Rational> coeffs_;

    CyclotomicNumber(long e, std::vector<Rational> reduced_coeffs)
        : conductor_(e), coeffs_(std::move(reduced_coeffs)) {}

    void normalize();
    static long align(CyclotomicNumber& a, CyclotomicNumber& b);
};

using Cyclo = CyclotomicNumber;

}  // namespace fsg
