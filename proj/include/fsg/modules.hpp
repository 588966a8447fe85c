#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fsg/groth.hpp"
#include "fsg/series.hpp"

namespace fsg {

/// Default ceiling on the number of class tuples a brute-force evaluation is
/// allowed to visit.
inline constexpr long kDefaultTupleCap = 1000000;

/// A symbolic module built from the constructors that admit generating-series
/// oracles: principal projectives, the trivial module, weight modules QW, Day
/// convolutions, pullbacks of univariate series, and direct sums. The tree is
/// immutable and cheap to copy.
class ModuleSpec {
public:
    enum class Kind { Free, Trivial, QW, Day, Pullback, DirectSum };

    /// Principal projective on one generator at [m] x G.
    static ModuleSpec free_module(long m);
    static ModuleSpec trivial();
    /// Weight module attached to the (projective) character with the given
    /// virtual class; the label is only used when printing.
    static ModuleSpec qw(GrothElement w, std::string label = "");
    static ModuleSpec day(ModuleSpec left, ModuleSpec right);
    /// h = num/den as polynomials in t, lowest degree first. The expansion of
    /// h must have non-negative integer coefficients (checked lazily);
    /// gen_degree < 0 means "use the degree of the reduced denominator".
    static ModuleSpec pullback(std::vector<Rational> num, std::vector<Rational> den,
                               long gen_degree = -1);
    static ModuleSpec direct_sum(std::vector<ModuleSpec> parts);

    /// Parses the module mini-language: free(1), trivial, qw(triv), qw(regular),
    /// qw(<simple>), qw(proj:<simple>), day(a,b), sum(a,b,...),
    /// pullback(<rational function in t>[, d]).
    static ModuleSpec parse(const std::string& text, const TablePtr& table);

    Kind kind() const;
    long gen_degree() const;

    long free_rank() const;             // Free
    const GrothElement& weight() const; // QW
    const ModuleSpec& left() const;     // Day
    const ModuleSpec& right() const;    // Day
    const std::vector<ModuleSpec>& parts() const; // DirectSum
    /// n-th expansion coefficient of a Pullback node; throws if the expansion
    /// leaves the non-negative integers.
    Integer pullback_term(long n) const;

    std::string str() const;

private:
    struct Node;
    explicit ModuleSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend Cyclo content_character(const ModuleSpec&, const GroupTable&, const Exponents&);
    friend Cyclo tuple_character(const ModuleSpec&, const GroupTable&,
                                 const std::vector<std::size_t>&);
};

/// Exact truncated E-series of a ModuleSpec, in the simple basis. Only Free(1),
/// Trivial, QW, Day, Pullback and DirectSum have closed forms; Free(m >= 2)
/// throws "no closed form; use brute_force_series".
MultiSeries closed_form_E(const ModuleSpec& spec, const TablePtr& table, int truncation);

/// Degree-n slice of the H-series (simple basis), computed by character
/// counting on class contents and an exact linear solve per tensor slot.
MultiSeries brute_force_class(const ModuleSpec& spec, const TablePtr& table, int n,
                              long cap = kDefaultTupleCap);

/// Reference evaluator that walks every class tuple individually instead of
/// grouping by content; slower, used to cross-check brute_force_class.
MultiSeries brute_force_class_tuplewise(const ModuleSpec& spec, const TablePtr& table, int n,
                                        long cap = kDefaultTupleCap);

/// Sum of the slices for n <= truncation, then a flavor transform.
MultiSeries brute_force_series(const ModuleSpec& spec, const TablePtr& table, int truncation,
                               Flavor flavor, long cap = kDefaultTupleCap);

/// Number of surjections [n] -> [m], with the module convention that the
/// value at n = 0 is 1 (the empty object contributes one generator class).
Integer surjection_count(long n, long m);

}  // namespace fsg
