#include "fsg/group_table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

namespace fsg {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw TableError(origin + ":" + std::to_string(line) + ": " + msg);
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// value := term (('+'|'-') term)*
// term  := rational ['*' 'z' ['^' int]] | 'z' ['^' int]
// with z the fixed primitive conductor-th root of unity.
class ValueParser {
public:
    ValueParser(const std::string& text, long conductor, const std::string& origin,
                std::size_t line)
        : s_(text), e_(conductor), origin_(origin), line_(line) {}

    Cyclo parse() {
        Cyclo acc(0);
        skip_ws();
        if (done()) fail(origin_, line_, "empty character value");
        int sign = 1;
        if (peek() == '+' || peek() == '-') sign = get() == '-' ? -1 : 1;
        while (true) {
            Cyclo t = term();
            acc += sign == 1 ? t : -t;
            skip_ws();
            if (done()) return acc;
            char c = get();
            if (c != '+' && c != '-')
                fail(origin_, line_, std::string("expected '+' or '-' before \"") + c + "\"");
            sign = c == '-' ? -1 : 1;
        }
    }

private:
    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    Integer digits() {
        skip_ws();
        std::string d;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) d += get();
        if (d.empty()) fail(origin_, line_, "expected a number in character value");
        return Integer(d);
    }

    Cyclo term() {
        skip_ws();
        if (done()) fail(origin_, line_, "missing term in character value");
        Rational coeff(1);
        bool have_coeff = false;
        if (peek() != 'z') {
            Integer num = digits();
            Integer den(1);
            skip_ws();
            if (!done() && peek() == '/') {
                get();
                den = digits();
                if (den == 0) fail(origin_, line_, "zero denominator in character value");
            }
            coeff = Rational(num) / Rational(den);
            have_coeff = true;
            skip_ws();
            if (done() || peek() != '*') return Cyclo(coeff);
            get();
            skip_ws();
        }
        if (done() || get() != 'z')
            fail(origin_, line_, have_coeff ? "expected 'z' after '*'" : "malformed term");
        long k = 1;
        skip_ws();
        if (!done() && peek() == '^') {
            get();
            skip_ws();
            bool neg = false;
            if (!done() && (peek() == '-' || peek() == '+')) neg = get() == '-';
            Integer raw = digits();
            if (!raw.fits_slong_p()) fail(origin_, line_, "exponent out of range");
            k = raw.get_si();
            if (neg) k = -k;
        }
        return Cyclo(coeff) * Cyclo::root_of_unity(e_, k);
    }

    const std::string& s_;
    long e_;
    const std::string& origin_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::string trimmed(std::string line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    return line.substr(i);
}

long parse_long(const std::string& tok, const std::string& origin, std::size_t line,
                const std::string& what) {
    try {
        std::size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "malformed " + what + " \"" + tok + "\"");
    }
}

struct MatrixRow {
    std::string label;
    std::vector<Cyclo> values;
};

MatrixRow parse_matrix_row(const std::string& line, long conductor, const std::string& origin,
                           std::size_t lineno) {
    auto colon = line.find(':');
    if (colon == std::string::npos) fail(origin, lineno, "expected '<label> : v1, ..., vk'");
    MatrixRow row;
    row.label = trimmed(line.substr(0, colon));
    if (row.label.empty()) fail(origin, lineno, "missing row label");
    std::string rest = line.substr(colon + 1);
    std::size_t start = 0;
    while (true) {
        auto comma = rest.find(',', start);
        std::string piece = rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
        row.values.push_back(ValueParser(piece, conductor, origin, lineno).parse());
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return row;
}

}  // namespace

std::size_t GroupTable::class_index(const std::string& label) const {
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].label == label) return i;
    throw TableError("unknown class \"" + label + "\" in table " + name_);
}

std::size_t GroupTable::simple_index(const std::string& label) const {
    for (std::size_t i = 0; i < simples_.size(); ++i)
        if (simples_[i] == label) return i;
    throw TableError("unknown simple \"" + label + "\" in table " + name_);
}

Rational GroupTable::class_fraction(std::size_t c) const {
    Rational q(classes_[c].size, order_);
    q.canonicalize();
    return q;
}

long GroupTable::centralizer_order(std::size_t c) const { return order_ / classes_[c].size; }

long GroupTable::projective_dim(std::size_t s) const {
    return static_cast<long>(Phi_.at(s, identity_class_).to_integer().get_si());
}

Cyclo GroupTable::x_class_coeff(std::size_t s, std::size_t c) const {
    return Cyclo(class_fraction(c)) * Phi_.at(s, c).conj();
}

std::vector<OrthogonalityEntry> GroupTable::verify_orthogonality() const {
    std::vector<OrthogonalityEntry> report;
    std::size_t k = classes_.size();
    for (std::size_t g = 0; g < k; ++g)
        for (std::size_t h = 0; h < k; ++h) {
            OrthogonalityEntry entry;
            entry.g = g;
            entry.h = h;
            for (std::size_t s = 0; s < simples_.size(); ++s)
                entry.computed += Phi_.at(s, g).conj() * phi_.at(s, h);
            entry.expected = Cyclo(g == h ? centralizer_order(g) : 0);
            entry.ok = entry.computed == entry.expected;
            report.push_back(std::move(entry));
        }
    return report;
}

std::shared_ptr<const GroupTable> GroupTable::load(const std::string& text,
                                                   const std::string& origin) {
    GroupTable t;
    bool have_order = false, have_char = false, have_cond = false;
    std::vector<MatrixRow> simple_rows, proj_rows;
    bool have_proj_block = false;

    enum class Section { Header, Classes, Simples, Projectives };
    Section section = Section::Header;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trimmed(raw);
        if (line.empty()) continue;

        if (line == "classes") {
            if (section != Section::Header) fail(origin, lineno, "unexpected 'classes' block");
            if (t.name_.empty() || !have_order || !have_char || !have_cond)
                fail(origin, lineno,
                     "group/order/characteristic/conductor must precede the classes block");
            section = Section::Classes;
            continue;
        }
        if (line == "simples") {
            if (section != Section::Classes || t.classes_.empty())
                fail(origin, lineno, "'simples' must follow a non-empty classes block");
            section = Section::Simples;
            continue;
        }
        if (line == "projectives") {
            if (section != Section::Simples)
                fail(origin, lineno, "'projectives' must follow the simples block");
            section = Section::Projectives;
            have_proj_block = true;
            continue;
        }

        switch (section) {
            case Section::Header: {
                std::istringstream ls(line);
                std::string key, value;
                ls >> key;
                std::getline(ls, value);
                value = trimmed(value);
                if (value.empty()) fail(origin, lineno, "header line \"" + key + "\" needs a value");
                if (key == "group") {
                    t.name_ = value;
                } else if (key == "order") {
                    t.order_ = parse_long(value, origin, lineno, "order");
                    have_order = true;
                } else if (key == "characteristic") {
                    t.characteristic_ = parse_long(value, origin, lineno, "characteristic");
                    have_char = true;
                } else if (key == "conductor") {
                    t.conductor_ = parse_long(value, origin, lineno, "conductor");
                    have_cond = true;
                } else {
                    fail(origin, lineno, "unknown header \"" + key + "\"");
                }
                break;
            }
            case Section::Classes: {
                std::istringstream ls(line);
                std::string label, size_tok, order_tok, extra;
                ls >> label >> size_tok >> order_tok;
                if (order_tok.empty() || (ls >> extra))
                    fail(origin, lineno, "expected '<label> <size> <element_order>'");
                ConjClass c;
                c.label = label;
                c.size = parse_long(size_tok, origin, lineno, "class size");
                c.element_order = parse_long(order_tok, origin, lineno, "element order");
                t.classes_.push_back(std::move(c));
                break;
            }
            case Section::Simples:
                simple_rows.push_back(parse_matrix_row(line, t.conductor_, origin, lineno));
                break;
            case Section::Projectives:
                proj_rows.push_back(parse_matrix_row(line, t.conductor_, origin, lineno));
                break;
        }
    }

    if (section == Section::Header) fail(origin, lineno, "missing 'classes' block");
    if (simple_rows.empty()) fail(origin, lineno, "missing or empty 'simples' block");

    std::size_t k = t.classes_.size();
    for (const auto& row : simple_rows) {
        if (row.values.size() != k)
            throw TableError(origin + ": simple \"" + row.label + "\" has " +
                             std::to_string(row.values.size()) + " values, expected " +
                             std::to_string(k));
        t.simples_.push_back(row.label);
    }
    t.phi_ = Matrix(simple_rows.size(), k);
    for (std::size_t s = 0; s < simple_rows.size(); ++s)
        for (std::size_t c = 0; c < k; ++c) t.phi_.at(s, c) = simple_rows[s].values[c];

    if (have_proj_block) {
        if (proj_rows.size() != simple_rows.size())
            throw TableError(origin + ": projectives block must list every simple exactly once");
        t.Phi_ = Matrix(simple_rows.size(), k);
        for (const auto& row : proj_rows) {
            std::size_t s = 0;
            while (s < t.simples_.size() && t.simples_[s] != row.label) ++s;
            if (s == t.simples_.size())
                throw TableError(origin + ": projective row for unknown simple \"" + row.label +
                                 "\"");
            if (row.values.size() != k)
                throw TableError(origin + ": projective \"" + row.label + "\" has " +
                                 std::to_string(row.values.size()) + " values, expected " +
                                 std::to_string(k));
            for (std::size_t c = 0; c < k; ++c) t.Phi_.at(s, c) = row.values[c];
        }
    } else {
        if (t.characteristic_ != 0)
            throw TableError(origin +
                             ": projectives block is required when characteristic > 0");
        t.Phi_ = t.phi_;
    }

    t.validate(origin);
    return std::shared_ptr<const GroupTable>(new GroupTable(std::move(t)));
}

std::shared_ptr<const GroupTable> GroupTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableError("cannot open table file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load(buf.str(), path);
}

void GroupTable::validate(const std::string& origin) {
    auto bad = [&](const std::string& msg) { throw TableError(origin + ": " + msg); };

    if (order_ < 1) bad("group order must be positive");
    if (characteristic_ != 0 && !is_prime(characteristic_))
        bad("characteristic must be 0 or a prime");

    long lcm_orders = 1;
    long size_sum = 0;
    std::size_t identity_count = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const auto& c = classes_[i];
        if (c.size < 1 || order_ % c.size != 0)
            bad("class \"" + c.label + "\": size must divide the group order");
        if (c.element_order < 1 || order_ % c.element_order != 0)
            bad("class \"" + c.label + "\": element order must divide the group order");
        if (characteristic_ > 0 && c.element_order % characteristic_ == 0)
            bad("class \"" + c.label + "\" is not p-regular");
        for (std::size_t j = i + 1; j < classes_.size(); ++j)
            if (classes_[j].label == c.label) bad("duplicate class label \"" + c.label + "\"");
        if (c.element_order == 1) {
            if (c.size != 1) bad("identity class must have size 1");
            identity_class_ = i;
            ++identity_count;
        }
        lcm_orders = std::lcm(lcm_orders, c.element_order);
        size_sum += c.size;
    }
    if (identity_count != 1) bad("exactly one class of element order 1 is required");
    if (conductor_ != lcm_orders)
        bad("conductor must equal the lcm of the element orders (" +
            std::to_string(lcm_orders) + ")");

    if (simples_.size() != classes_.size())
        bad("need as many simples as p-regular classes (got " + std::to_string(simples_.size()) +
            " and " + std::to_string(classes_.size()) + ")");
    for (std::size_t i = 0; i < simples_.size(); ++i)
        for (std::size_t j = i + 1; j < simples_.size(); ++j)
            if (simples_[i] == simples_[j]) bad("duplicate simple label \"" + simples_[i] + "\"");

    if (characteristic_ == 0) {
        if (size_sum != order_) bad("class sizes must sum to the group order when p = 0");
        for (std::size_t s = 0; s < simples_.size(); ++s)
            for (std::size_t c = 0; c < classes_.size(); ++c)
                if (Phi_.at(s, c) != phi_.at(s, c))
                    bad("projective characters must equal simple characters when p = 0 "
                        "(simple \"" + simples_[s] + "\", class \"" + classes_[c].label + "\")");
    }

    for (std::size_t s = 0; s < simples_.size(); ++s) {
        const Cyclo& d = phi_.at(s, identity_class_);
        const Cyclo& D = Phi_.at(s, identity_class_);
        if (!d.is_integer() || d.to_integer() <= 0)
            bad("dim of simple \"" + simples_[s] + "\" must be a positive integer");
        if (!D.is_integer() || D.to_integer() <= 0)
            bad("dim of projective cover of \"" + simples_[s] + "\" must be a positive integer");
    }

    if (determinant(phi_).is_zero()) bad("character matrix phi is singular");

    for (const auto& entry : verify_orthogonality())
        if (!entry.ok)
            bad("orthogonality fails at (" + classes_[entry.g].label + ", " +
                classes_[entry.h].label + "): computed " + entry.computed.str() + ", expected " +
                entry.expected.str());

    bool found_trivial = false;
    for (std::size_t s = 0; s < simples_.size() && !found_trivial; ++s) {
        bool all_ones = true;
        for (std::size_t c = 0; c < classes_.size(); ++c)
            if (phi_.at(s, c) != Cyclo(1)) all_ones = false;
        if (all_ones) {
            trivial_simple_ = s;
            found_trivial = true;
        }
    }
    if (!found_trivial) bad("no trivial simple (constant character 1) present");

    inverse_class_.assign(classes_.size(), classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        for (std::size_t d = 0; d < classes_.size(); ++d) {
            bool match = true;
            for (std::size_t s = 0; s < simples_.size(); ++s)
                if (phi_.at(s, c).conj() != phi_.at(s, d)) match = false;
            if (match) {
                if (inverse_class_[c] != classes_.size())
                    bad("class \"" + classes_[c].label + "\" has an ambiguous inverse class");
                inverse_class_[c] = d;
            }
        }
        if (inverse_class_[c] == classes_.size())
            bad("class \"" + classes_[c].label + "\" has no inverse class in the table");
    }

    for (std::size_t s = 0; s < simples_.size(); ++s) {
        bool found = false;
        for (std::size_t r = 0; r < simples_.size() && !found; ++r) {
            bool match = true;
            for (std::size_t c = 0; c < classes_.size(); ++c)
                if (phi_.at(s, c).conj() != phi_.at(r, c)) match = false;
            found = match;
        }
        if (!found) bad("conjugate of simple \"" + simples_[s] + "\" is not a row of phi");
    }

    trace_to_coords_ = inverse(phi_.transpose());
}

std::string GroupTable::str() const {
    std::ostringstream out;
    out << "group " << name_ << "\n";
    out << "order " << order_ << "\n";
    out << "characteristic " << characteristic_ << "\n";
    out << "conductor " << conductor_ << "\n";
    out << "classes\n";
    for (const auto& c : classes_)
        out << c.label << " " << c.size << " " << c.element_order << "\n";
    auto block = [&](const Matrix& m) {
        for (std::size_t s = 0; s < simples_.size(); ++s) {
            out << simples_[s] << " :";
            for (std::size_t c = 0; c < classes_.size(); ++c)
                out << (c ? ", " : " ") << m.at(s, c).str();
            out << "\n";
        }
    };
    out << "simples\n";
    block(phi_);
    if (characteristic_ != 0) {
        out << "projectives\n";
        block(Phi_);
    }
    return out.str();
}

namespace {

const std::map<std::string, const char*>& builtin_sources() {
    static const std::map<std::string, const char*> sources = {
        {"C2", R"(group C2
order 2
characteristic 0
conductor 2
classes
e 1 1
s 1 2
simples
triv : 1, 1
sgn : 1, -1
)"},
        {"C3", R"(group C3
order 3
characteristic 0
conductor 3
classes
e 1 1
g 1 3
g2 1 3
simples
triv : 1, 1, 1
chi1 : 1, z, z^2
chi2 : 1, z^2, z
)"},
        {"C4", R"(group C4
order 4
characteristic 0
conductor 4
classes
e 1 1
g 1 4
g2 1 2
g3 1 4
simples
chi0 : 1, 1, 1, 1
chi1 : 1, z, -1, -1*z^1
chi2 : 1, -1, 1, -1
chi3 : 1, -1*z^1, -1, z
)"},
        {"S3", R"(group S3
order 6
characteristic 0
conductor 6
classes
e 1 1
(12) 3 2
(123) 2 3
simples
triv : 1, 1, 1
sgn : 1, -1, 1
std : 2, 0, -1
)"},
        {"S3mod3", R"(group S3mod3
order 6
characteristic 3
conductor 2
classes
e 1 1
(12) 3 2
simples
triv : 1, 1
sgn : 1, -1
projectives
triv : 3, 1
sgn : 3, -1
)"},
    };
    return sources;
}

}  // namespace

std::shared_ptr<const GroupTable> GroupTable::builtin(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const GroupTable>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto hit = cache.find(name);
    if (hit != cache.end()) return hit->second;
    auto src = builtin_sources().find(name);
    if (src == builtin_sources().end())
        throw TableError("unknown built-in table \"" + name + "\"");
    auto table = load(src->second, "builtin:" + name);
    cache.emplace(name, table);
    return table;
}

std::vector<std::string> GroupTable::builtin_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : builtin_sources()) names.push_back(name);
    return names;
}

}  // namespace fsg
