#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsg/cyclotomic.hpp"
#include "fsg/linalg.hpp"

namespace fsg {

struct ConjClass {
    std::string label;
    long size = 0;
    long element_order = 0;
};

struct OrthogonalityEntry {
    std::size_t g = 0, h = 0;
    Cyclo computed;
    Cyclo expected;
    bool ok = false;
};

struct TableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A finite group given purely through its character data at a fixed
/// characteristic p: the p-regular conjugacy classes, the simple Brauer
/// characters phi_S and the projective-cover characters Phi_S (equal to
/// phi_S when p = 0). All invariants — square matrices, invertibility of
/// phi, column orthogonality sum_S conj(Phi_S(g)) phi_S(h) = |C(g)| delta,
/// integral positive dimensions at the identity — are checked on load, so
/// the rest of the library can assume a valid table.
class GroupTable {
public:
    /// Bundled tables: C2, C3, C4, S3, S3mod3.
    static std::shared_ptr<const GroupTable> builtin(const std::string& name);
    static std::vector<std::string> builtin_names();

    /// Parses the line-oriented table format; `origin` labels error messages.
    static std::shared_ptr<const GroupTable> load(const std::string& text,
                                                  const std::string& origin = "<input>");
    static std::shared_ptr<const GroupTable> load_file(const std::string& path);

    const std::string& name() const { return name_; }
    long order() const { return order_; }
    long characteristic() const { return characteristic_; }
    long conductor() const { return conductor_; }
    const std::vector<ConjClass>& classes() const { return classes_; }
    const std::vector<std::string>& simples() const { return simples_; }
    std::size_t class_count() const { return classes_.size(); }

    std::size_t class_index(const std::string& label) const;
    std::size_t simple_index(const std::string& label) const;
    std::size_t identity_class() const { return identity_class_; }
    std::size_t trivial_simple() const { return trivial_simple_; }
    /// The class of inverses of elements of c (found via conjugate columns).
    std::size_t inverse_class(std::size_t c) const { return inverse_class_[c]; }

    const Cyclo& phi(std::size_t s, std::size_t c) const { return phi_.at(s, c); }
    const Cyclo& Phi(std::size_t s, std::size_t c) const { return Phi_.at(s, c); }

    Rational class_fraction(std::size_t c) const;     // |c| / |G|
    long centralizer_order(std::size_t c) const;      // |G| / |c|
    long projective_dim(std::size_t s) const;         // Phi_S at the identity

    /// Coefficient of x_S in x_c = (|c|/|G|) sum_S conj(Phi_S(c)) x_S.
    Cyclo x_class_coeff(std::size_t s, std::size_t c) const;

    /// Inverse transpose of phi: traces t_c of a virtual representation are
    /// turned into x_S coordinates by coords = trace_to_coords * t.
    const Matrix& trace_to_coords() const { return trace_to_coords_; }

    /// Reports sum_S conj(Phi_S(g)) phi_S(h) against |C(g)| delta_{g,h}
    /// for every ordered class pair.
    std::vector<OrthogonalityEntry> verify_orthogonality() const;

    /// Renders the table in the load() format (round-trips through load()).
    std::string str() const;

private:
    GroupTable() = default;
    void validate(const std::string& origin);

    std::string name_;
    long order_ = 0;
    long characteristic_ = 0;
    long conductor_ = 1;
    std::vector<ConjClass> classes_;
    std::vector<std::string> simples_;
    Matrix phi_, Phi_;            // rows: simples, columns: classes
    Matrix trace_to_coords_;
    std::size_t identity_class_ = 0;
    std::size_t trivial_simple_ = 0;
    std::vector<std::size_t> inverse_class_;
};

using TablePtr = std::shared_ptr<const GroupTable>;

}  // namespace fsg
