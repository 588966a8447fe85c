#include "fsg/modules.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fsg {

namespace {

using Poly = std::vector<Rational>;

Integer ipow(const Integer& base, long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

Poly trimmed(Poly p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    if (p.empty()) p.assign(1, Rational(0));
    return p;
}

bool poly_zero(const Poly& p) {
    return std::all_of(p.begin(), p.end(), [](const Rational& c) { return c == 0; });
}

Poly poly_add(const Poly& a, const Poly& b, int sign) {
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    return trimmed(std::move(out));
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return trimmed(std::move(out));
}

std::string poly_str(const Poly& p) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        Rational mag = p[i] < 0 ? Rational(-p[i]) : p[i];
        bool negative = p[i] < 0;
        std::string mono = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
        std::string body;
        if (mono.empty())
            body = mag.get_str();
        else if (mag == 1)
            body = mono;
        else
            body = mag.get_str() + "*" + mono;
        out << (first ? (negative ? "-" : "") : (negative ? " - " : " + ")) << body;
        first = false;
    }
    return first ? "0" : out.str();
}

}  // namespace

struct ModuleSpec::Node {
    Kind kind = Kind::Trivial;
    long m = 0;                        // Free
    std::optional<GrothElement> w;     // QW
    std::string label;                 // QW print name
    std::vector<ModuleSpec> children;  // Day, DirectSum
    Poly num, den;                     // Pullback
    long gen_d = 0;                    // Pullback
};

ModuleSpec ModuleSpec::free_module(long m) {
    if (m < 1) throw std::invalid_argument("free: the rank must be a positive integer");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Free;
    node->m = m;
    return ModuleSpec(std::move(node));
}

ModuleSpec ModuleSpec::trivial() {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Trivial;
    return ModuleSpec(std::move(node));
}

ModuleSpec ModuleSpec::qw(GrothElement w, std::string label) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::QW;
    node->w.emplace(std::move(w));
    node->label = std::move(label);
    return ModuleSpec(std::move(node));
}

ModuleSpec ModuleSpec::day(ModuleSpec left, ModuleSpec right) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Day;
    node->children = {std::move(left), std::move(right)};
    return ModuleSpec(std::move(node));
}

ModuleSpec ModuleSpec::pullback(std::vector<Rational> num, std::vector<Rational> den,
                                long gen_degree) {
    num = trimmed(std::move(num));
    den = trimmed(std::move(den));
    if (poly_zero(den)) throw std::invalid_argument("pullback: zero denominator");
    if (poly_zero(num)) {
        num.assign(1, Rational(0));
        den.assign(1, Rational(1));
    } else {
        while (num[0] == 0 && den[0] == 0) {
            num.erase(num.begin());
            den.erase(den.begin());
        }
        if (den[0] == 0) throw std::invalid_argument("pullback: pole at t = 0");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Pullback;
    node->num = std::move(num);
    node->den = std::move(den);
    node->gen_d = gen_degree >= 0 ? gen_degree : static_cast<long>(node->den.size()) - 1;
    return ModuleSpec(std::move(node));
}

ModuleSpec ModuleSpec::direct_sum(std::vector<ModuleSpec> parts) {
    if (parts.empty()) throw std::invalid_argument("sum: needs at least one summand");
    auto node = std::make_shared<Node>();
    node->kind = Kind::DirectSum;
    node->children = std::move(parts);
    return ModuleSpec(std::move(node));
}

ModuleSpec::Kind ModuleSpec::kind() const { return node_->kind; }

long ModuleSpec::gen_degree() const {
    switch (node_->kind) {
        case Kind::Free: return node_->m;
        case Kind::Trivial: return 1;
        case Kind::QW: return 1;
        case Kind::Day: return node_->children[0].gen_degree() + node_->children[1].gen_degree();
        case Kind::Pullback: return node_->gen_d;
        case Kind::DirectSum: {
            long d = 0;
            for (const auto& part : node_->children) d = std::max(d, part.gen_degree());
            return d;
        }
    }
    throw std::logic_error("gen_degree: unreachable");
}

long ModuleSpec::free_rank() const {
    if (node_->kind != Kind::Free) throw std::logic_error("free_rank: not a free node");
    return node_->m;
}

const GrothElement& ModuleSpec::weight() const {
    if (node_->kind != Kind::QW) throw std::logic_error("weight: not a qw node");
    return *node_->w;
}

const ModuleSpec& ModuleSpec::left() const {
    if (node_->kind != Kind::Day) throw std::logic_error("left: not a day node");
    return node_->children[0];
}

const ModuleSpec& ModuleSpec::right() const {
    if (node_->kind != Kind::Day) throw std::logic_error("right: not a day node");
    return node_->children[1];
}

const std::vector<ModuleSpec>& ModuleSpec::parts() const {
    if (node_->kind != Kind::DirectSum) throw std::logic_error("parts: not a sum node");
    return node_->children;
}

Integer ModuleSpec::pullback_term(long n) const {
    if (node_->kind != Kind::Pullback) throw std::logic_error("pullback_term: not a pullback node");
    if (n < 0) throw std::invalid_argument("pullback_term: negative degree");
    const Poly& num = node_->num;
    const Poly& den = node_->den;
    std::vector<Rational> h(static_cast<std::size_t>(n) + 1, Rational(0));
    for (long i = 0; i <= n; ++i) {
        Rational acc = static_cast<std::size_t>(i) < num.size() ? num[i] : Rational(0);
        for (long j = 1; j <= i && static_cast<std::size_t>(j) < den.size(); ++j)
            acc -= den[j] * h[i - j];
        acc /= den[0];
        if (acc.get_den() != 1 || acc < 0)
            throw std::domain_error("pullback: expansion coefficient at t^" + std::to_string(i) +
                                    " is not a non-negative integer");
        h[i] = acc;
    }
    return h[n].get_num();
}

std::string ModuleSpec::str() const {
    switch (node_->kind) {
        case Kind::Free: return "free(" + std::to_string(node_->m) + ")";
        case Kind::Trivial: return "trivial";
        case Kind::QW: return "qw(" + (node_->label.empty() ? "?" : node_->label) + ")";
        case Kind::Day: return "day(" + node_->children[0].str() + "," + node_->children[1].str() + ")";
        case Kind::Pullback: {
            std::string body = "(" + poly_str(node_->num) + ")";
            if (node_->den.size() != 1 || node_->den[0] != 1)
                body += "/(" + poly_str(node_->den) + ")";
            if (node_->gen_d != static_cast<long>(node_->den.size()) - 1)
                body += ", " + std::to_string(node_->gen_d);
            return "pullback(" + body + ")";
        }
        case Kind::DirectSum: {
            std::string body = "sum(";
            for (std::size_t i = 0; i < node_->children.size(); ++i)
                body += (i ? "," : "") + node_->children[i].str();
            return body + ")";
        }
    }
    throw std::logic_error("str: unreachable");
}

// ---------------------------------------------------------------------------
// mini-language parser

namespace {

struct RatFunc {
    Poly num{Rational(0)};
    Poly den{Rational(1)};
};

RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
    return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

RatFunc rf_add(const RatFunc& a, const RatFunc& b, int sign) {
    return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den), sign),
            poly_mul(a.den, b.den)};
}

class SpecParser {
public:
    SpecParser(std::string text, TablePtr table) : text_(std::move(text)), table_(std::move(table)) {}

    ModuleSpec run() {
        ModuleSpec spec = module();
        ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return spec;
    }

private:
    std::string text_;
    TablePtr table_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("module spec: " + msg + " (at offset " +
                                    std::to_string(pos_) + ")");
    }

    void ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::string ident() {
        ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        return text_.substr(start, pos_ - start);
    }

    long uint_lit() {
        ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected an integer");
        return std::stol(text_.substr(start, pos_ - start));
    }

    ModuleSpec module() {
        std::string name = ident();
        if (name == "trivial") return ModuleSpec::trivial();
        if (name == "free") {
            expect('(');
            long m = uint_lit();
            expect(')');
            return ModuleSpec::free_module(m);
        }
        if (name == "qw") {
            expect('(');
            std::string label = ident();
            if (label == "proj" && eat(':')) label += ":" + ident();
            expect(')');
            return ModuleSpec::qw(resolve_weight(label), label);
        }
        if (name == "day") {
            expect('(');
            ModuleSpec a = module();
            expect(',');
            ModuleSpec b = module();
            expect(')');
            return ModuleSpec::day(std::move(a), std::move(b));
        }
        if (name == "sum") {
            expect('(');
            std::vector<ModuleSpec> parts;
            parts.push_back(module());
            while (eat(',')) parts.push_back(module());
            expect(')');
            return ModuleSpec::direct_sum(std::move(parts));
        }
        if (name == "pullback") {
            expect('(');
            RatFunc h = expr();
            long d = -1;
            if (eat(',')) d = uint_lit();
            expect(')');
            return ModuleSpec::pullback(std::move(h.num), std::move(h.den), d);
        }
        fail("unknown module '" + name + "'");
    }

    GrothElement resolve_weight(const std::string& label) {
        if (!table_) fail("qw needs a group table");
        if (label == "triv") return GrothElement::simple(table_, table_->trivial_simple());
        if (label == "regular") {
            Vec traces(table_->class_count(), Cyclo(0));
            traces[table_->identity_class()] = Cyclo(table_->order());
            return recompose(table_, traces);
        }
        std::string simple = label;
        bool projective = label.rfind("proj:", 0) == 0;
        if (projective) simple = label.substr(5);
        const auto& simples = table_->simples();
        for (std::size_t s = 0; s < simples.size(); ++s) {
            if (simples[s] != simple) continue;
            if (!projective) return GrothElement::simple(table_, s);
            Vec traces(table_->class_count());
            for (std::size_t c = 0; c < table_->class_count(); ++c) traces[c] = table_->Phi(s, c);
            return recompose(table_, traces);
        }
        fail("unknown weight '" + label + "'");
    }

    RatFunc expr() {
        bool negate = eat('-');
        RatFunc acc = term();
        if (negate) for (auto& c : acc.num) c = -c;
        while (true) {
            if (eat('+'))
                acc = rf_add(acc, term(), 1);
            else if (eat('-'))
                acc = rf_add(acc, term(), -1);
            else
                return acc;
        }
    }

    RatFunc term() {
        RatFunc acc = factor();
        while (true) {
            if (eat('*')) {
                acc = rf_mul(acc, factor());
            } else if (eat('/')) {
                RatFunc rhs = factor();
                if (poly_zero(rhs.num)) fail("division by zero");
                acc = rf_mul(acc, RatFunc{rhs.den, rhs.num});
            } else {
                return acc;
            }
        }
    }

    RatFunc factor() {
        RatFunc base_value = base();
        if (!eat('^')) return base_value;
        long e = uint_lit();
        RatFunc acc{{Rational(1)}, {Rational(1)}};
        for (long i = 0; i < e; ++i) acc = rf_mul(acc, base_value);
        return acc;
    }

    RatFunc base() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)))
            return {{Rational(uint_lit())}, {Rational(1)}};
        if (c == 't') {
            ++pos_;
            return {{Rational(0), Rational(1)}, {Rational(1)}};
        }
        if (eat('(')) {
            RatFunc inner = expr();
            expect(')');
            return inner;
        }
        fail("expected a number, 't' or '('");
    }
};

}  // namespace

ModuleSpec ModuleSpec::parse(const std::string& text, const TablePtr& table) {
    return SpecParser(text, table).run();
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

long content_degree(const Exponents& kappa) {
    return std::accumulate(kappa.begin(), kappa.end(), 0L);
}

void check_tables(const ModuleSpec& spec, const TablePtr& table) {
    switch (spec.kind()) {
        case ModuleSpec::Kind::QW:
            if (spec.weight().table() != table)
                throw std::invalid_argument("qw: the weight belongs to a different table");
            return;
        case ModuleSpec::Kind::Day:
            check_tables(spec.left(), table);
            check_tables(spec.right(), table);
            return;
        case ModuleSpec::Kind::DirectSum:
            for (const auto& part : spec.parts()) check_tables(part, table);
            return;
        default: return;
    }
}

void check_tuple_cap(std::size_t k, int n, long cap) {
    Integer tuples = ipow(Integer(static_cast<long>(k)), n);
    if (tuples > cap)
        throw std::domain_error("brute force: " + tuples.get_str() +
                                " class tuples exceed the enumeration cap of " +
                                std::to_string(cap));
}

/// Linear form L_c = sum_S trace_to_coords(S, c) y_S, one per class.
std::vector<MultiSeries> content_forms(const TablePtr& table, int truncation) {
    std::size_t k = table->class_count();
    std::vector<MultiSeries> forms;
    forms.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        MultiSeries form(table, Basis::Simple, Flavor::None, truncation);
        Exponents e(k, 0);
        for (std::size_t s = 0; s < k; ++s) {
            e[s] = 1;
            form.set_coefficient(e, table->trace_to_coords().at(s, c));
            e[s] = 0;
        }
        forms.push_back(std::move(form));
    }
    return forms;
}

template <typename Fn>
void for_each_content(int n, std::size_t k, Exponents& kappa, std::size_t pos, Fn&& fn) {
    if (pos + 1 == k) {
        kappa[pos] = n;
        fn(const_cast<const Exponents&>(kappa));
        return;
    }
    for (int v = 0; v <= n; ++v) {
        kappa[pos] = v;
        for_each_content(n - v, k, kappa, pos + 1, fn);
    }
}

Rational multinomial(long n, const Exponents& kappa) {
    Rational coeff(factorial(n));
    for (int e : kappa) coeff /= Rational(factorial(e));
    return coeff;
}

}  // namespace

Integer surjection_count(long n, long m) {
    if (n == 0) return Integer(1);
    Integer acc(0);
    for (long j = 0; j <= m; ++j) {
        Integer term = binomial(m, j) * ipow(Integer(j), n);
        acc += ((m - j) % 2 == 0) ? term : -term;
    }
    return acc;
}

Cyclo content_character(const ModuleSpec& spec, const GroupTable& table, const Exponents& kappa) {
    const auto& node = *spec.node_;
    long n = content_degree(kappa);
    switch (node.kind) {
        case ModuleSpec::Kind::Trivial: return Cyclo(1);
        case ModuleSpec::Kind::Free: {
            for (std::size_t c = 0; c < kappa.size(); ++c)
                if (c != table.identity_class() && kappa[c] != 0) return Cyclo(0);
            return Cyclo(Rational(surjection_count(n, node.m) * ipow(Integer(table.order()), n)));
        }
        case ModuleSpec::Kind::QW: {
            if (table.characteristic() != 0)
                throw std::domain_error("qw: brute force needs characteristic 0");
            const GrothElement& w = *node.w;
            std::size_t support = 0, cls = 0;
            for (std::size_t c = 0; c < kappa.size(); ++c)
                if (kappa[c] != 0) ++support, cls = c;
            if (support > 1) return Cyclo(0);
            if (support == 0) {
                Cyclo acc(0);
                for (std::size_t b = 0; b < table.class_count(); ++b)
                    acc += Cyclo(table.class_fraction(b)) * trace(b, w).conj();
                return acc;
            }
            Cyclo rate(Rational(ipow(Integer(table.centralizer_order(cls)), kappa[cls])));
            return Cyclo(table.class_fraction(cls)) * trace(table.inverse_class(cls), w).conj() *
                   rate;
        }
        case ModuleSpec::Kind::Day: {
            std::size_t k = kappa.size();
            Exponents alpha(k, 0), beta(kappa.begin(), kappa.end());
            Cyclo acc(0);
            while (true) {
                Rational ways(1);
                for (std::size_t c = 0; c < k; ++c) ways *= Rational(binomial(kappa[c], alpha[c]));
                Cyclo lhs = content_character(node.children[0], table, alpha);
                if (!lhs.is_zero()) {
                    Cyclo rhs = content_character(node.children[1], table, beta);
                    if (!rhs.is_zero()) acc += Cyclo(ways) * lhs * rhs;
                }
                std::size_t c = 0;
                while (c < k && alpha[c] == kappa[c]) {
                    alpha[c] = 0;
                    beta[c] = kappa[c];
                    ++c;
                }
                if (c == k) break;
                ++alpha[c];
                --beta[c];
            }
            return acc;
        }
        case ModuleSpec::Kind::Pullback: return Cyclo(Rational(spec.pullback_term(n)));
        case ModuleSpec::Kind::DirectSum: {
            Cyclo acc(0);
            for (const auto& part : node.children) acc += content_character(part, table, kappa);
            return acc;
        }
    }
    throw std::logic_error("content_character: unreachable");
}

Cyclo tuple_character(const ModuleSpec& spec, const GroupTable& table,
                      const std::vector<std::size_t>& tuple) {
    const auto& node = *spec.node_;
    long n = static_cast<long>(tuple.size());
    switch (node.kind) {
        case ModuleSpec::Kind::Trivial: return Cyclo(1);
        case ModuleSpec::Kind::Free: {
            for (std::size_t c : tuple)
                if (c != table.identity_class()) return Cyclo(0);
            return Cyclo(Rational(surjection_count(n, node.m) * ipow(Integer(table.order()), n)));
        }
        case ModuleSpec::Kind::QW: {
            if (table.characteristic() != 0)
                throw std::domain_error("qw: brute force needs characteristic 0");
            const GrothElement& w = *node.w;
            Cyclo acc(0);
            for (std::size_t b = 0; b < table.class_count(); ++b) {
                Rational fixed(1);
                for (std::size_t c : tuple) {
                    if (table.inverse_class(c) != b) {
                        fixed = 0;
                        break;
                    }
                    fixed *= table.centralizer_order(c);
                }
                if (fixed == 0) continue;
                acc += Cyclo(table.class_fraction(b) * fixed) * trace(b, w).conj();
            }
            return acc;
        }
        case ModuleSpec::Kind::Day: {
            if (n >= 63) throw std::domain_error("day: tuplewise evaluation limited to n < 63");
            Cyclo acc(0);
            for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
                std::vector<std::size_t> left_part, right_part;
                for (long i = 0; i < n; ++i)
                    (mask >> i & 1 ? left_part : right_part).push_back(tuple[i]);
                Cyclo lhs = tuple_character(node.children[0], table, left_part);
                if (lhs.is_zero()) continue;
                acc += lhs * tuple_character(node.children[1], table, right_part);
            }
            return acc;
        }
        case ModuleSpec::Kind::Pullback: return Cyclo(Rational(spec.pullback_term(n)));
        case ModuleSpec::Kind::DirectSum: {
            Cyclo acc(0);
            for (const auto& part : node.children) acc += tuple_character(part, table, tuple);
            return acc;
        }
    }
    throw std::logic_error("tuple_character: unreachable");
}

MultiSeries brute_force_class(const ModuleSpec& spec, const TablePtr& table, int n, long cap) {
    if (n < 0) throw std::invalid_argument("brute_force_class: negative degree");
    check_tables(spec, table);
    std::size_t k = table->class_count();
    check_tuple_cap(k, n, cap);

    auto forms = content_forms(table, std::max(n, 1));
    std::vector<std::vector<MultiSeries>> powers(k);
    auto power = [&](std::size_t c, int p) -> const MultiSeries& {
        auto& cache = powers[c];
        if (cache.empty())
            cache.push_back(MultiSeries::constant(table, Basis::Simple, Flavor::None, n, Cyclo(1)));
        while (cache.size() <= static_cast<std::size_t>(p))
            cache.push_back(cache.back() * forms[c]);
        return cache[static_cast<std::size_t>(p)];
    };

    MultiSeries acc(table, Basis::Simple, Flavor::None, n);
    Exponents kappa(k, 0);
    for_each_content(n, k, kappa, 0, [&](const Exponents& content) {
        Cyclo x = content_character(spec, *table, content);
        if (x.is_zero()) return;
        MultiSeries term = MultiSeries::constant(table, Basis::Simple, Flavor::None, n,
                                                 x * Cyclo(multinomial(n, content)));
        for (std::size_t c = 0; c < k; ++c)
            if (content[c] > 0) term = term * power(c, content[c]);
        acc += term;
    });
    return acc.with_flavor(Flavor::H);
}

MultiSeries brute_force_class_tuplewise(const ModuleSpec& spec, const TablePtr& table, int n,
                                        long cap) {
    if (n < 0) throw std::invalid_argument("brute_force_class: negative degree");
    check_tables(spec, table);
    std::size_t k = table->class_count();
    check_tuple_cap(k, n, cap);

    auto forms = content_forms(table, std::max(n, 1));
    MultiSeries acc(table, Basis::Simple, Flavor::None, n);
    std::vector<std::size_t> tuple(static_cast<std::size_t>(n), 0);
    while (true) {
        Cyclo x = tuple_character(spec, *table, tuple);
        if (!x.is_zero()) {
            MultiSeries term = MultiSeries::constant(table, Basis::Simple, Flavor::None, n, x);
            for (std::size_t c : tuple) term = term * forms[c];
            acc += term;
        }
        std::size_t i = 0;
        while (i < tuple.size() && tuple[i] + 1 == k) tuple[i++] = 0;
        if (i == tuple.size()) break;
        ++tuple[i];
    }
    return acc.with_flavor(Flavor::H);
}

MultiSeries brute_force_series(const ModuleSpec& spec, const TablePtr& table, int truncation,
                               Flavor flavor, long cap) {
    if (truncation < 0) throw std::invalid_argument("brute_force_series: negative truncation");
    if (flavor == Flavor::None)
        throw std::invalid_argument("brute_force_series: choose H, E or Htilde");
    MultiSeries acc(table, Basis::Simple, Flavor::H, truncation);
    for (int n = 0; n <= truncation; ++n) {
        MultiSeries slice = brute_force_class(spec, table, n, cap);
        for (const auto& [e, c] : slice.terms()) acc.set_coefficient(e, c);
    }
    return acc.transform(flavor);
}

MultiSeries closed_form_E(const ModuleSpec& spec, const TablePtr& table, int truncation) {
    check_tables(spec, table);
    std::size_t k = table->class_count();
    switch (spec.kind()) {
        case ModuleSpec::Kind::Trivial:
            return exp_series(MultiSeries::variable(table, Basis::Simple, Flavor::None, truncation,
                                                    table->trivial_simple()))
                .with_flavor(Flavor::E);
        case ModuleSpec::Kind::Free: {
            if (spec.free_rank() != 1)
                throw std::domain_error("free(" + std::to_string(spec.free_rank()) +
                                        "): no closed form; use brute_force_series");
            MultiSeries form(table, Basis::Simple, Flavor::None, truncation);
            Exponents e(k, 0);
            for (std::size_t s = 0; s < k; ++s) {
                e[s] = 1;
                form.set_coefficient(e, Cyclo(table->projective_dim(s)));
                e[s] = 0;
            }
            return exp_series(form).with_flavor(Flavor::E);
        }
        case ModuleSpec::Kind::QW: {
            const GrothElement& w = spec.weight();
            MultiSeries acc(table, Basis::Class, Flavor::None, truncation);
            for (std::size_t c = 0; c < k; ++c) {
                Cyclo coeff = Cyclo(table->class_fraction(c)) *
                              trace(table->inverse_class(c), w).conj();
                if (coeff.is_zero()) continue;
                auto x_c = MultiSeries::variable(table, Basis::Class, Flavor::None, truncation, c);
                acc += exp_series(x_c * Cyclo(table->centralizer_order(c))) * coeff;
            }
            return acc.change_basis(Basis::Simple).with_flavor(Flavor::E);
        }
        case ModuleSpec::Kind::Day:
            return closed_form_E(spec.left(), table, truncation) *
                   closed_form_E(spec.right(), table, truncation);
        case ModuleSpec::Kind::Pullback: {
            MultiSeries h(table, Basis::Simple, Flavor::H, truncation);
            Exponents e(k, 0);
            for (int n = 0; n <= truncation; ++n) {
                e[table->trivial_simple()] = n;
                h.set_coefficient(e, Cyclo(Rational(spec.pullback_term(n))));
            }
            return h.transform(Flavor::E);
        }
        case ModuleSpec::Kind::DirectSum: {
            MultiSeries acc(table, Basis::Simple, Flavor::E, truncation);
            for (const auto& part : spec.parts()) acc += closed_form_E(part, table, truncation);
            return acc;
        }
    }
    throw std::logic_error("closed_form_E: unreachable");
}

}  // namespace fsg
