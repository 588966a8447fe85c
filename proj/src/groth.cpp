#include "fsg/groth.hpp"

#include <stdexcept>
#include <utility>

namespace fsg {

namespace {

void require_same_table(const GrothElement& a, const GrothElement& b) {
    if (a.table() != b.table())
        throw std::invalid_argument("GrothElement: operands belong to different tables");
}

}  // namespace

GrothElement::GrothElement(TablePtr table, Vec coords)
    : table_(std::move(table)), coords_(std::move(coords)) {
    if (coords_.size() != table_->class_count())
        throw std::invalid_argument("GrothElement: coordinate count does not match table");
}

GrothElement GrothElement::simple(TablePtr table, std::size_t s) {
    GrothElement v(std::move(table));
    Vec coords(v.table_->class_count());
    coords.at(s) = Cyclo(1);
    return GrothElement(v.table_, std::move(coords));
}

bool GrothElement::is_zero() const {
    for (const auto& c : coords_)
        if (!c.is_zero()) return false;
    return true;
}

GrothElement GrothElement::operator-() const {
    GrothElement v = *this;
    for (auto& c : v.coords_) c = -c;
    return v;
}

GrothElement& GrothElement::operator+=(const GrothElement& rhs) {
    require_same_table(*this, rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
}

GrothElement& GrothElement::operator-=(const GrothElement& rhs) {
    require_same_table(*this, rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
}

GrothElement& GrothElement::operator*=(const Cyclo& scalar) {
    for (auto& c : coords_) c *= scalar;
    return *this;
}

bool GrothElement::operator==(const GrothElement& rhs) const {
    if (table_ != rhs.table_) return false;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] != rhs.coords_[i]) return false;
    return true;
}

GrothElement x_class(const TablePtr& table, std::size_t c) {
    Vec coords(table->class_count());
    for (std::size_t s = 0; s < coords.size(); ++s) coords[s] = table->x_class_coeff(s, c);
    return GrothElement(table, std::move(coords));
}

Cyclo trace(std::size_t g, const GrothElement& v) {
    Cyclo acc;
    for (std::size_t s = 0; s < v.coords().size(); ++s)
        acc += v.coords()[s] * v.table()->phi(s, g);
    return acc;
}

Vec class_decompose(const GrothElement& v) {
    Vec out(v.table()->class_count());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = trace(c, v);
    return out;
}

GrothElement recompose(const TablePtr& table, const Vec& class_coeffs) {
    if (class_coeffs.size() != table->class_count())
        throw std::invalid_argument("recompose: coefficient count does not match table");
    return GrothElement(table, table->trace_to_coords() * class_coeffs);
}

GrothElement tensor(const GrothElement& a, const GrothElement& b) {
    require_same_table(a, b);
    Vec traces = class_decompose(a);
    Vec tb = class_decompose(b);
    for (std::size_t c = 0; c < traces.size(); ++c) traces[c] *= tb[c];
    return recompose(a.table(), traces);
}

}  // namespace fsg
