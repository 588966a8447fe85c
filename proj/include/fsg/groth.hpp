#pragma once

#include <cstddef>

#include "fsg/group_table.hpp"

namespace fsg {

/// An element of the complexified Grothendieck group R(G), stored as exact
/// coordinates in the basis {x_S} of simple classes. The ring structure is
/// the tensor product, evaluated through Brauer traces: trace at every
/// p-regular class is multiplicative, and the coordinates are recovered by
/// inverting the character matrix.
class GrothElement {
public:
    explicit GrothElement(TablePtr table)
        : table_(std::move(table)), coords_(table_->class_count()) {}
    GrothElement(TablePtr table, Vec coords);

    /// The basis vector x_S.
    static GrothElement simple(TablePtr table, std::size_t s);

    const TablePtr& table() const { return table_; }
    const Vec& coords() const { return coords_; }
    bool is_zero() const;

    GrothElement operator-() const;
    GrothElement& operator+=(const GrothElement& rhs);
    GrothElement& operator-=(const GrothElement& rhs);
    GrothElement& operator*=(const Cyclo& scalar);
    friend GrothElement operator+(GrothElement a, const GrothElement& b) { return a += b; }
    friend GrothElement operator-(GrothElement a, const GrothElement& b) { return a -= b; }
    friend GrothElement operator*(GrothElement a, const Cyclo& s) { return a *= s; }
    friend GrothElement operator*(const Cyclo& s, GrothElement a) { return a *= s; }
    bool operator==(const GrothElement& rhs) const;
    bool operator!=(const GrothElement& rhs) const { return !(*this == rhs); }

private:
    TablePtr table_;
    Vec coords_;
};

/// x_c = (|c|/|G|) sum_S conj(Phi_S(c)) x_S, the dual of trace-at-c.
GrothElement x_class(const TablePtr& table, std::size_t c);

/// Brauer trace of v at the p-regular class g: sum_S coords_S phi_S(g).
Cyclo trace(std::size_t g, const GrothElement& v);

/// All traces (trace(c, v))_c; v = sum_c trace(c, v) x_class(c).
Vec class_decompose(const GrothElement& v);

GrothElement recompose(const TablePtr& table, const Vec& class_coeffs);

/// Tensor product: traces multiply pointwise, coordinates come back through
/// the inverse character matrix.
GrothElement tensor(const GrothElement& a, const GrothElement& b);

}  // namespace fsg
