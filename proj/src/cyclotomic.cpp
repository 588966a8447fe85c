#include "fsg/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsg {

Integer factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Integer binomial(long n, long k) {
    if (k < 0 || k > n) return Integer(0);
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

long euler_phi(long n) {
    if (n <= 0) throw std::invalid_argument("euler_phi of non-positive argument");
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace {

/* Polynomials over Integer, constant term first. Used only to build the
 * cyclotomic polynomials, via Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d. */

std::vector<Integer> exact_divide(const std::vector<Integer>& num, const std::vector<Integer>& den) {
    std::vector<Integer> rem = num;
    std::vector<Integer> quot(num.size() - den.size() + 1, Integer(0));
    for (long k = static_cast<long>(rem.size()) - 1; k >= static_cast<long>(den.size()) - 1; --k) {
        // den is monic for every divisor we use, but stay general.
        if (rem[k] == 0) continue;
        Integer q = rem[k] / den.back();
        if (q * den.back() != rem[k]) throw std::logic_error("non-exact polynomial division");
        long shift = k - (static_cast<long>(den.size()) - 1);
        quot[shift] = q;
        for (size_t i = 0; i < den.size(); ++i) rem[shift + i] -= q * den[i];
    }
    for (const auto& c : rem)
        if (c != 0) throw std::logic_error("non-exact polynomial division");
    return quot;
}

std::map<long, std::vector<Integer>> g_phi_cache;
std::mutex g_phi_mutex;

const std::vector<Integer>& cyclotomic_polynomial_locked(long n) {
    auto it = g_phi_cache.find(n);
    if (it != g_phi_cache.end()) return it->second;
    std::vector<Integer> poly;
    if (n == 1) {
        poly = {Integer(-1), Integer(1)};
    } else {
        poly.assign(static_cast<size_t>(n) + 1, Integer(0));
        poly[0] = -1;
        poly[static_cast<size_t>(n)] = 1;
        for (long d = 1; d < n; ++d)
            if (n % d == 0) poly = exact_divide(poly, cyclotomic_polynomial_locked(d));
    }
    return g_phi_cache.emplace(n, std::move(poly)).first->second;
}

/* Reduces a raw coefficient vector (any length) modulo Phi_e in place and
 * trims it to length phi(e). */
void reduce_mod_phi(std::vector<Rational>& v, long e) {
    const std::vector<Integer>& phi = cyclotomic_polynomial(e);
    const size_t deg = phi.size() - 1;
    if (v.size() < deg) {
        v.resize(deg, Rational(0));
        return;
    }
    for (size_t k = v.size(); k-- > deg;) {
        if (v[k] == 0) continue;
        Rational c = v[k];
        v[k] = 0;
        size_t shift = k - deg;
        for (size_t i = 0; i < deg; ++i)
            if (phi[i] != 0) v[shift + i] -= c * Rational(phi[i]);
    }
    v.resize(deg);
}

/* Extended Euclid over Q[x] against Phi_e; returns u with u*f = 1 mod Phi_e.
 * Phi_e is irreducible over Q, so every nonzero residue is invertible. */

using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

QPoly poly_sub(QPoly a, const QPoly& b) {
    if (b.size() > a.size()) a.resize(b.size(), Rational(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

/* quotient of a by b (b nonzero and trimmed), remainder left in a */
QPoly poly_divmod(QPoly& a, const QPoly& b) {
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    while (a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] += c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        trim(a);  // the leading coefficient cancels exactly, so this shrinks a
    }
    return q;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(long n) {
    if (n <= 0) throw std::invalid_argument("cyclotomic_polynomial of non-positive index");
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    return cyclotomic_polynomial_locked(n);
}

CyclotomicNumber CyclotomicNumber::root_of_unity(long e, long k) {
    if (e <= 0) throw std::invalid_argument("root_of_unity: conductor must be positive");
    k %= e;
    if (k < 0) k += e;
    std::vector<Rational> raw(static_cast<size_t>(k) + 1, Rational(0));
    raw[static_cast<size_t>(k)] = 1;
    return from_coefficients(e, std::move(raw));
}

CyclotomicNumber CyclotomicNumber::from_coefficients(long e, std::vector<Rational> raw) {
    if (e <= 0) throw std::invalid_argument("from_coefficients: conductor must be positive");
    for (auto& c : raw) c.canonicalize();
    reduce_mod_phi(raw, e);
    CyclotomicNumber v(e, std::move(raw));
    v.normalize();
    return v;
}

bool CyclotomicNumber::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

Rational CyclotomicNumber::to_rational() const {
    if (conductor_ != 1) throw std::domain_error("to_rational: value is not rational: " + str());
    return coeffs_[0];
}

bool CyclotomicNumber::is_integer() const {
    return conductor_ == 1 && coeffs_[0].get_den() == 1;
}

Integer CyclotomicNumber::to_integer() const {
    Rational q = to_rational();
    if (q.get_den() != 1) throw std::domain_error("to_integer: value is not an integer: " + str());
    return q.get_num();
}

CyclotomicNumber CyclotomicNumber::lifted_to(long m) const {
    if (m % conductor_ != 0) throw std::invalid_argument("lifted_to: target conductor not a multiple");
    if (m == conductor_) return *this;
    const long step = m / conductor_;
    std::vector<Rational> raw(static_cast<size_t>(m), Rational(0));
    for (size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) raw[k * static_cast<size_t>(step)] += coeffs_[k];
    reduce_mod_phi(raw, m);
    return CyclotomicNumber(m, std::move(raw));
}

void CyclotomicNumber::normalize() {
    if (conductor_ == 1) return;
    for (size_t k = 1; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) return;
    Rational c = coeffs_[0];
    conductor_ = 1;
    coeffs_.assign(1, std::move(c));
}

long CyclotomicNumber::align(CyclotomicNumber& a, CyclotomicNumber& b) {
    long m = std::lcm(a.conductor_, b.conductor_);
    if (a.conductor_ != m) a = a.lifted_to(m);
    if (b.conductor_ != m) b = b.lifted_to(m);
    return m;
}

CyclotomicNumber CyclotomicNumber::operator-() const {
    CyclotomicNumber r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& rhs) {
    CyclotomicNumber b = rhs;
    align(*this, b);
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
    normalize();
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator-=(const CyclotomicNumber& rhs) {
    CyclotomicNumber b = rhs;
    align(*this, b);
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= b.coeffs_[i];
    normalize();
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const CyclotomicNumber& rhs) {
    CyclotomicNumber b = rhs;
    long m = align(*this, b);
    std::vector<Rational> prod(coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs_.size(); ++j)
            if (b.coeffs_[j] != 0) prod[i + j] += coeffs_[i] * b.coeffs_[j];
    }
    reduce_mod_phi(prod, m);
    coeffs_ = std::move(prod);
    normalize();
    return *this;
}

CyclotomicNumber& CyclotomicNumber::operator/=(const CyclotomicNumber& rhs) {
    return *this *= rhs.inverse();
}

CyclotomicNumber CyclotomicNumber::conj() const {
    if (conductor_ <= 2) return *this;
    std::vector<Rational> raw(static_cast<size_t>(conductor_), Rational(0));
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        size_t idx = (k == 0) ? 0 : static_cast<size_t>(conductor_) - k;
        raw[idx] += coeffs_[k];
    }
    reduce_mod_phi(raw, conductor_);
    CyclotomicNumber r(conductor_, std::move(raw));
    r.normalize();
    return r;
}

CyclotomicNumber CyclotomicNumber::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero cyclotomic number");
    if (conductor_ == 1) return CyclotomicNumber(Rational(1) / coeffs_[0]);

    QPoly f(coeffs_.begin(), coeffs_.end());
    trim(f);
    const std::vector<Integer>& phi_z = cyclotomic_polynomial(conductor_);
    QPoly g(phi_z.size());
    for (size_t i = 0; i < phi_z.size(); ++i) g[i] = Rational(phi_z[i]);

    // extended Euclid: maintain r0 = s0*f mod Phi, r1 = s1*f mod Phi
    QPoly r0 = g, r1 = f;
    QPoly s0 = {}, s1 = {Rational(1)};
    while (!r1.empty() && r1.size() > 1) {
        QPoly rem = r0;
        QPoly q = poly_divmod(rem, r1);
        QPoly s2 = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw std::logic_error("cyclotomic inverse: unexpected zero remainder");
    // r1 is a nonzero constant: inverse = s1 / r1
    Rational unit = r1[0];
    std::vector<Rational> inv(s1.size());
    for (size_t i = 0; i < s1.size(); ++i) inv[i] = s1[i] / unit;
    reduce_mod_phi(inv, conductor_);
    CyclotomicNumber result(conductor_, std::move(inv));
    result.normalize();
    return result;
}

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
    CyclotomicNumber x = a, y = b;
    CyclotomicNumber::align(x, y);
    return x.coeffs_ == y.coeffs_;
}

std::string CyclotomicNumber::str() const {
    if (conductor_ == 1) return coeffs_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const Rational& c = coeffs_[k];
        if (c == 0) continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit_coeff = (mag == 1 && k > 0);
        if (!unit_coeff) os << mag.get_str();
        if (k > 0) {
            if (!unit_coeff) os << "*";
            os << "z";
            if (k > 1) os << "^" << k;
        }
    }
    if (first) return "0";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const CyclotomicNumber& v) { return os << v.str(); }

}  // namespace fsg
