#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsg/fit.hpp"
#include "fsg/group_table.hpp"
#include "fsg/modules.hpp"
#include "fsg/series.hpp"

using namespace fsg;
using nlohmann::ordered_json;

namespace {

TablePtr resolve_table(const std::string& group, const std::string& table_file) {
    if (!table_file.empty()) return GroupTable::load_file(table_file);
    return GroupTable::builtin(group);
}

Flavor parse_flavor(const std::string& s) {
    if (s == "H") return Flavor::H;
    if (s == "E") return Flavor::E;
    if (s == "Htilde") return Flavor::Htilde;
    throw CLI::ValidationError("--flavor", "must be H, E or Htilde");
}

Basis parse_basis(const std::string& s) {
    if (s == "simple") return Basis::Simple;
    if (s == "class") return Basis::Class;
    throw CLI::ValidationError("--basis", "must be simple or class");
}

std::string monomial_of(const MultiSeries& s, const Exponents& e) {
    std::string out;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        if (!out.empty()) out += "*";
        out += s.var_name(v);
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
    }
    return out.empty() ? "1" : out;
}

ordered_json series_json(const MultiSeries& s) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : s.terms())
        terms.push_back(ordered_json{{"monomial", monomial_of(s, e)},
                                     {"exponents", e},
                                     {"coefficient", c.str()}});
    return ordered_json{{"basis", basis_name(s.basis())},
                        {"flavor", flavor_name(s.flavor())},
                        {"truncation", s.truncation()},
                        {"series", s.str()},
                        {"terms", terms}};
}

int cmd_table_show(const TablePtr& table, const std::string& format) {
    if (format == "json") {
        ordered_json classes = ordered_json::array();
        for (const auto& c : table->classes())
            classes.push_back(ordered_json{
                {"label", c.label}, {"size", c.size}, {"element_order", c.element_order}});
        ordered_json j{{"name", table->name()},
                       {"order", table->order()},
                       {"characteristic", table->characteristic()},
                       {"conductor", table->conductor()},
                       {"classes", classes},
                       {"simples", table->simples()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << table->str();
    }
    return 0;
}

int cmd_table_check(const TablePtr& table, const std::string& format) {
    auto entries = table->verify_orthogonality();
    std::size_t bad = 0;
    for (const auto& e : entries)
        if (!e.ok) ++bad;
    if (format == "json") {
        ordered_json j{{"group", table->name()}, {"pairs", entries.size()}, {"ok", bad == 0}};
        if (bad != 0) {
            ordered_json fails = ordered_json::array();
            for (const auto& e : entries)
                if (!e.ok)
                    fails.push_back(ordered_json{{"g", table->classes()[e.g].label},
                                                 {"h", table->classes()[e.h].label},
                                                 {"computed", e.computed.str()},
                                                 {"expected", e.expected.str()}});
            j["failures"] = fails;
        }
        std::cout << j.dump(2) << "\n";
    } else if (bad == 0) {
        std::cout << "orthogonality OK (" << entries.size() << " pairs)\n";
    } else {
        std::cout << "orthogonality FAILED (" << bad << " of " << entries.size() << " pairs)\n";
        for (const auto& e : entries)
            if (!e.ok)
                std::cout << "  (" << table->classes()[e.g].label << ", "
                          << table->classes()[e.h].label << "): got " << e.computed.str()
                          << ", want " << e.expected.str() << "\n";
    }
    return bad == 0 ? 0 : 1;
}

MultiSeries module_series(const ModuleSpec& spec, const TablePtr& table, int degree,
                          Flavor flavor, Basis basis, bool oracle, long cap) {
    if (flavor == Flavor::Htilde && basis == Basis::Class)
        throw std::invalid_argument("Htilde only exists in the simple basis");
    if (oracle) {
        MultiSeries s = brute_force_series(spec, table, degree, flavor, cap);
        return basis == Basis::Class ? s.change_basis(Basis::Class) : s;
    }
    MultiSeries s = closed_form_E(spec, table, degree);
    if (basis == Basis::Class) s = s.change_basis(Basis::Class);
    if (flavor != Flavor::E) s = s.transform(flavor);
    return s;
}

int cmd_series(const ModuleSpec& spec, const TablePtr& table, int degree, Flavor flavor,
               Basis basis, bool oracle, long cap, const std::string& format) {
    MultiSeries s = module_series(spec, table, degree, flavor, basis, oracle, cap);
    if (format == "json") {
        ordered_json j{{"module", spec.str()}, {"group", table->name()}};
        j.update(series_json(s));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << s.str() << "\n";
    }
    return 0;
}

int cmd_oracle_compare(const ModuleSpec& spec, const TablePtr& table, int degree, long cap,
                       const std::string& format) {
    MultiSeries closed = closed_form_E(spec, table, degree);
    MultiSeries brute = brute_force_series(spec, table, degree, Flavor::E, cap);
    MultiSeries diff = closed - brute;
    bool ok = diff.is_zero();
    if (format == "json") {
        ordered_json j{{"module", spec.str()},
                       {"group", table->name()},
                       {"degree", degree},
                       {"coefficients", degree + 1},
                       {"match", ok}};
        if (!ok) {
            const auto& [e, c] = *diff.terms().begin();
            j["mismatch"] = ordered_json{{"monomial", monomial_of(closed, e)},
                                         {"closed_form", closed.coefficient(e).str()},
                                         {"oracle", brute.coefficient(e).str()}};
        }
        std::cout << j.dump(2) << "\n";
    } else if (ok) {
        std::cout << "MATCH (" << degree + 1 << " coefficients)\n";
    } else {
        const auto& [e, c] = *diff.terms().begin();
        std::cout << "MISMATCH at " << monomial_of(closed, e) << ": closed form "
                  << closed.coefficient(e).str() << ", oracle " << brute.coefficient(e).str()
                  << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_verify_diffeq(const ModuleSpec& spec, const TablePtr& table, long gen_degree,
                      long r_max, long cap, const std::string& format) {
    long d = gen_degree >= 0 ? gen_degree : spec.gen_degree();
    long m = d * table->order() + 1;
    int window = static_cast<int>(m * r_max);
    MultiSeries E = brute_force_series(spec, table, window, Flavor::E, cap)
                        .change_basis(Basis::Class);
    bool all_ok = true;
    std::vector<std::pair<std::string, long>> orders;
    for (std::size_t g = 0; g < table->class_count(); ++g) {
        long r = annihilator_order(E, g, m, r_max);
        orders.emplace_back(table->classes()[g].label, r);
        if (r < 0) all_ok = false;
    }
    if (format == "json") {
        ordered_json obj = ordered_json::object();
        for (const auto& [label, r] : orders) {
            if (r < 0)
                obj[label] = nullptr;
            else
                obj[label] = r;
        }
        ordered_json j{{"module", spec.str()}, {"group", table->name()},   {"m", m},
                       {"r_max", r_max},       {"window", window},         {"orders", obj},
                       {"ok", all_ok}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "diffeq: m = " << m << ", r_max = " << r_max << ", window = " << window
                  << "\n";
        for (const auto& [label, r] : orders) {
            std::cout << "  class " << label << ": ";
            if (r < 0)
                std::cout << "no order up to r_max\n";
            else
                std::cout << "r = " << r << "\n";
        }
        std::cout << (all_ok ? "diffeq OK" : "diffeq FAILED") << "\n";
    }
    return all_ok ? 0 : 1;
}

int cmd_fit(const ModuleSpec& spec, const TablePtr& table, long gen_degree, int degree,
            long r_max, int extra, long cap, const std::string& format) {
    FitReport rep = run_fit(spec, table, gen_degree, degree, r_max, extra, cap);
    if (format == "json")
        std::cout << rep.json() << "\n";
    else
        std::cout << rep.text();
    return rep.prediction.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enhanced Hilbert series of modules over finite free G-sets"};
    app.require_subcommand(1);

    std::string group = "C2";
    std::string table_file;
    std::string module_text = "trivial";
    std::string flavor_text = "H";
    std::string basis_text = "simple";
    std::string format = "text";
    int degree = 4;
    long gen_degree = -1;
    long r_max = 3;
    int extra = 2;
    long cap = kDefaultTupleCap;
    bool oracle = false;

    auto add_table_opts = [&](CLI::App* cmd) {
        cmd->add_option("--group", group, "Built-in table name")->capture_default_str();
        cmd->add_option("--table-file", table_file, "Load the table from a file instead");
        cmd->add_option("--format", format, "Output format: text or json")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };
    auto add_module_opts = [&](CLI::App* cmd) {
        cmd->add_option("--module", module_text, "Module spec expression")
            ->capture_default_str();
        cmd->add_option("--cap", cap, "Brute-force enumeration cap")->capture_default_str();
    };

    CLI::App* table_cmd = app.add_subcommand("table", "Inspect or validate a character table");
    table_cmd->require_subcommand(1);
    CLI::App* table_show = table_cmd->add_subcommand("show", "Print the table");
    add_table_opts(table_show);
    CLI::App* table_check = table_cmd->add_subcommand("check", "Verify column orthogonality");
    add_table_opts(table_check);

    CLI::App* series_cmd =
        app.add_subcommand("series", "Print a module's truncated enhanced Hilbert series");
    add_table_opts(series_cmd);
    add_module_opts(series_cmd);
    series_cmd->add_option("--degree", degree, "Truncation degree")->capture_default_str();
    series_cmd->add_option("--flavor", flavor_text, "H, E or Htilde")->capture_default_str();
    series_cmd->add_option("--basis", basis_text, "simple or class")->capture_default_str();
    series_cmd->add_flag("--oracle", oracle, "Use the brute-force oracle, not the closed form");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference computations");
    oracle_cmd->require_subcommand(1);
    CLI::App* oracle_compare =
        oracle_cmd->add_subcommand("compare", "Diff the closed form against the oracle");
    add_table_opts(oracle_compare);
    add_module_opts(oracle_compare);
    oracle_compare->add_option("--degree", degree, "Truncation degree")->capture_default_str();

    CLI::App* verify_cmd = app.add_subcommand("verify", "Verification suites");
    verify_cmd->require_subcommand(1);
    CLI::App* verify_diffeq =
        verify_cmd->add_subcommand("diffeq", "Annihilator orders for every class");
    add_table_opts(verify_diffeq);
    add_module_opts(verify_diffeq);
    verify_diffeq->add_option("--gen-degree", gen_degree,
                              "Generation degree d (default: from the module)");
    verify_diffeq->add_option("--r-max", r_max, "Largest order to try")->capture_default_str();

    CLI::App* fit_cmd =
        app.add_subcommand("fit", "Fit an exp-polynomial form and report rational shapes");
    add_table_opts(fit_cmd);
    add_module_opts(fit_cmd);
    fit_cmd->add_option("--degree", degree, "Fit window truncation")->capture_default_str();
    fit_cmd->add_option("--gen-degree", gen_degree,
                        "Generation degree d (default: from the module)");
    fit_cmd->add_option("--r-max", r_max, "Power budget per class")->capture_default_str();
    fit_cmd->add_option("--extra", extra, "Degrees predicted beyond the window")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        TablePtr table = resolve_table(group, table_file);
        if (table_show->parsed()) return cmd_table_show(table, format);
        if (table_check->parsed()) return cmd_table_check(table, format);
        if (series_cmd->parsed())
            return cmd_series(ModuleSpec::parse(module_text, table), table, degree,
                              parse_flavor(flavor_text), parse_basis(basis_text), oracle, cap,
                              format);
        if (oracle_compare->parsed())
            return cmd_oracle_compare(ModuleSpec::parse(module_text, table), table, degree, cap,
                                      format);
        if (verify_diffeq->parsed())
            return cmd_verify_diffeq(ModuleSpec::parse(module_text, table), table, gen_degree,
                                     r_max, cap, format);
        if (fit_cmd->parsed())
            return cmd_fit(ModuleSpec::parse(module_text, table), table, gen_degree, degree,
                           r_max, extra, cap, format);
    } catch (const CLI::Error& err) {
        std::cerr << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
