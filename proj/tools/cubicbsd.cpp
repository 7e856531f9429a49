// cubicbsd: per-prime verification, scans and class-group table reproduction.
// Every command writes JSON lines to stdout; diagnostics go to stderr.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicbsd/cubicfield.hpp"
#include "cubicbsd/descent.hpp"
#include "cubicbsd/errors.hpp"
#include "cubicbsd/heckeoracle.hpp"
#include "cubicbsd/lattice.hpp"
#include "cubicbsd/lvalue.hpp"
#include "cubicbsd/records.hpp"

using namespace cubicbsd;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kUsage = 2, kCertification = 3 };

struct Globals {
    long precision = 0;
    bool timings = false;
};

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t) { return std::chrono::duration<double>(clock_type::now() - t).count(); }

int digits_for(long bits) { return static_cast<int>(static_cast<double>(bits) * 0.30103) + 1; }

void emit(json j) {
    j["schema_version"] = kSchemaVersion;
    std::cout << j.dump() << '\n';
    std::cout.flush();
}

json divisors_json(const std::vector<BigInt>& d) {
    json a = json::array();
    for (const auto& x : d) a.push_back(x.str());
    return a;
}

int cmd_omega(const Globals& g) {
    auto t = clock_type::now();
    auto per = compute_period(g.precision);
    int dg = digits_for(g.precision);
    json j{{"command", "omega"},
           {"precision_bits", per.precision_bits},
           {"omega", per.omega.str(dg)},
           {"a_of_L", per.a_of_L.str(dg)},
           {"s2_of_L", per.s2_of_L.str(20)},
           {"zeta_half", per.zeta_half.str(dg)},
           {"wp_third", {per.wp_third.first.re.str(dg), per.wp_third.second.re.str(dg)}}};
    if (g.timings) j["seconds"] = since(t);
    emit(j);
    return kPass;
}

// n = 2^i m with i <= 2 and m = p or p^2.
long prime_of_shape(long n) {
    long m = n;
    int i = 0;
    while (m % 2 == 0) {
        m /= 2;
        ++i;
    }
    long p = m;
    long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(m))));
    for (long c = r - 1; c <= r + 1; ++c)
        if (c > 1 && c * c == m) p = c;
    bool ok = i <= 2 && p > 3 && is_family_prime(p);
    long p2 = p * p;
    ok = ok && (n == p || n == p2 || n == 2 * p || n == 4 * p || n == 2 * p2 || n == 4 * p2);
    if (!ok) throw DomainError("n must be one of p, p^2, 2p, 4p, 2p^2, 4p^2 for a prime p = 2,5 (mod 9)");
    return p;
}

int cmd_lvalue(const Globals& g, long n, bool oracle) {
    long p = prime_of_shape(n);
    auto t = clock_type::now();
    AlgebraicLValue v;
    long prec = g.precision;
    for (;;) {
        try {
            auto per = compute_period(prec);
            v = (n == p || n == p * p) ? lvalue_p_family(p, n, per) : lvalue_2p_family(p, n, per);
            break;
        } catch (const PrecisionExhausted&) {
            if (prec * 2 > 4 * g.precision) throw;
            prec *= 2;
        }
    }
    json j{{"command", "lvalue"},
           {"n", n},
           {"p", p},
           {"precision_bits", v.precision_bits},
           {"value", v.complex_value.re.str(30)},
           {"period", v.period.str(30)},
           {"algebraic_part", v.algebraic_part.str()},
           {"error_bound", v.error_bound.str(6)},
           {"forced_zero", v.is_forced_zero}};
    int code = kPass;
    if (oracle) {
        auto o = lvalue_oracle(n, 128);
        mp::Real diff = mp::abs(o.value - v.complex_value.re);
        mp::Real scale = mp::abs(o.value);
        bool agree = v.is_forced_zero ? diff < mp::Real(1e-8, 128) : diff <= scale * mp::Real(1e-8, 128);
        j["oracle"] = {{"value", o.value.str(30)},
                       {"conductor", o.conductor},
                       {"root_number", o.root_number},
                       {"agree", agree}};
        if (!agree) code = kMismatch;
    }
    if (g.timings) j["seconds"] = since(t);
    emit(j);
    return code;
}

int cmd_congruence(const Globals& g, long p, const std::vector<long>& range) {
    std::vector<long> ps;
    if (!range.empty()) {
        ps = family_primes(range[0], range[1]);
    } else {
        require_family_prime(p);
        ps = {p};
    }
    int code = kPass;
    for (long q : ps) {
        auto t = clock_type::now();
        auto rep = to_record(congruence_report(q, g.precision));
        json checks = json::array();
        for (const auto& c : rep.checks)
            checks.push_back({{"label", c.label}, {"claim", c.claim}, {"observed", c.observed}, {"pass", c.pass}});
        json parts = json::object();
        for (const auto& [n, v] : rep.algebraic_parts) parts[std::to_string(n)] = v;
        json j{{"command", "congruence"},
               {"p", q},
               {"family_class", q % 9},
               {"precision_bits", rep.precision_bits},
               {"all_pass", rep.all_pass},
               {"max_error_bound", rep.max_error_bound},
               {"checks", checks},
               {"algebraic_parts", parts}};
        if (g.timings) j["seconds"] = since(t);
        emit(j);
        if (!rep.all_pass) code = kMismatch;
    }
    return code;
}

ClassGroupOptions cg_options(const std::string& effort, std::uint64_t seed, bool grh) {
    ClassGroupOptions o;
    o.effort = effort_from_string(effort);
    o.seed = seed;
    o.force_grh = grh;
    return o;
}

json classgroup_json(const ClassGroupStructure& cg) {
    return {{"p", cg.p},
            {"divisors", divisors_json(cg.elementary_divisors)},
            {"two_rank", cg.two_rank},
            {"class_number", cg.class_number.str()},
            {"certificate", to_string(cg.certificate)},
            {"regulator", cg.regulator},
            {"analytic_hR", cg.analytic_hR},
            {"ratio", cg.ratio},
            {"l1_rho", cg.l1_rho},
            {"factor_base_bound", cg.factor_base_bound},
            {"factor_base_size", cg.factor_base_size},
            {"relations", cg.relations},
            {"relations_verified", cg.relations_verified},
            {"seed", cg.seed},
            {"rounds", cg.rounds}};
}

int cmd_classgroup(const Globals& g, long p, const ClassGroupOptions& o, bool unit) {
    require_family_prime(p);
    auto t = clock_type::now();
    auto cg = class_group(p, o);
    json j = classgroup_json(cg);
    j["command"] = "classgroup";
    j["effort"] = to_string(o.effort);
    if (unit) {
        auto u = fundamental_unit(p, o);
        j["unit"] = {{"a", u.unit.a.str()},
                     {"b", u.unit.b.str()},
                     {"c", u.unit.c.str()},
                     {"log", u.log_unit.str(20)},
                     {"certified", u.certified}};
    }
    if (g.timings) j["seconds"] = since(t);
    emit(j);
    return kPass;
}

int cmd_selmer(const Globals& g, long p, const ClassGroupOptions& o, long oracle_limit) {
    require_family_prime(p);
    auto t = clock_type::now();
    auto cg = class_group(p, o);
    auto s = sha2_report(p, cg, oracle_limit);
    json local = json::object();
    for (long q : {kInfinitePlace, 2L, 3L, p})
        local[q == kInfinitePlace ? std::string("inf") : std::to_string(q)] = local_image_dimension(p, s.j, q);
    json j{{"command", "selmer"},
           {"p", p},
           {"family_class", p % 9},
           {"curve_n", s.curve_n()},
           {"j", s.j},
           {"k", s.k},
           {"epsilon", s.epsilon},
           {"sel2_dim", s.sel2_dim},
           {"sha2_dim", s.sha2_dim},
           {"sha2_nontrivial", s.sha2_nontrivial},
           {"oracle_checked", s.oracle_checked},
           {"local_image_dims", local},
           {"divisors", divisors_json(cg.elementary_divisors)},
           {"certificate", to_string(cg.certificate)}};
    if (s.oracle_checked) j["conductor"] = s.conductor;
    if (g.timings) j["seconds"] = since(t);
    emit(j);
    return kPass;
}

void write_csv(const std::string& records, const std::string& csv) {
    std::ifstream in(records);
    std::ofstream out(csv, std::ios::trunc);
    if (!out) throw ConfigurationError("cannot write " + csv);
    out << "# primes with 2-rank of Cl(L) at least 2\n";
    out << "p,table,cl,sha2\n";
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto r = parse_line(line, lineno);
        if (r.status != "ok" || !r.selmer || r.selmer->k < 2) continue;
        out << r.p << ',' << r.family_class << ',';
        for (std::size_t i = 0; i < r.class_group->divisors.size(); ++i)
            out << (i ? " " : "") << r.class_group->divisors[i];
        out << ',';
        for (int i = 0; i < r.selmer->sha2_dim; ++i) out << (i ? " " : "") << 2;
        out << '\n';
    }
}

int cmd_scan(const Globals& g, ScanOptions so, const std::string& csv) {
    if (!(3 <= so.min && so.min < so.max)) throw ConfigurationError("scan needs 3 <= min < max");
    so.record.precision_bits = g.precision;
    so.record.timings = g.timings;
    auto t = clock_type::now();
    auto s = run_scan(so, [](const std::string& w) { std::cerr << "warning: " << w << '\n'; });
    if (!csv.empty()) write_csv(so.out, csv);
    json classes = json::object();
    long errors = 0;
    for (const auto& [c, v] : s.by_class) {
        classes[std::to_string(c)] = {
            {"primes", v.primes}, {"k_ge_2", v.k_ge_2}, {"fraction", v.fraction()}, {"errors", v.errors}};
        errors += v.errors;
    }
    json j{{"command", "scan"},
           {"min", so.min},
           {"max", so.max},
           {"written", s.written},
           {"computed", s.computed},
           {"reused", s.reused},
           {"quarantined", s.quarantined},
           {"classes", classes}};
    if (g.timings) j["seconds"] = since(t);
    emit(j);
    return errors ? kCertification : kPass;
}

std::vector<long> as_long(const std::vector<BigInt>& v) {
    std::vector<long> out;
    for (const auto& x : v) out.push_back(x.convert_to<long>());
    return out;
}

int cmd_verify_appendix(const Globals& g, const std::string& rows_path, long max_p, const ClassGroupOptions& base,
                        long escalate_limit) {
    auto rows = read_appendix(rows_path);
    long checked = 0, matched = 0, skipped = 0;
    for (const auto& row : rows) {
        if (row.p > max_p) {
            ++skipped;
            continue;
        }
        ++checked;
        auto t = clock_type::now();
        auto cg = class_group(row.p, base);
        bool escalated = false;
        if (as_long(cg.elementary_divisors) != row.cl && cg.certificate == Certificate::GrhAnalytic &&
            row.p <= escalate_limit) {
            ClassGroupOptions o = base;
            o.proved_limit = row.p;
            o.force_grh = false;
            o.effort = Effort::High;
            cg = class_group(row.p, o);
            escalated = true;
        }
        auto s = sha2_report(row.p, cg, 0);
        auto cl = as_long(cg.elementary_divisors);
        bool cl_match = cl == row.cl;
        bool sha_match = s.sha2_dim == static_cast<int>(row.sha2.size());
        bool match = cl_match && sha_match;
        if (match) ++matched;
        json j{{"command", "verify-appendix"},
               {"p", row.p},
               {"line", row.line},
               {"table", row.table},
               {"family_class", row.p % 9},
               {"cl_expected", row.cl},
               {"cl_computed", cl},
               {"sha2_dim_expected", row.sha2.size()},
               {"sha2_dim_computed", s.sha2_dim},
               {"certificate", to_string(cg.certificate)},
               {"escalated", escalated},
               {"match", match}};
        if (row.table != row.p % 9) j["table_class_note"] = "row printed in the table of the other residue class";
        if (g.timings) j["seconds"] = since(t);
        emit(j);
    }
    emit({{"command", "verify-appendix"},
          {"summary", {{"rows", rows.size()}, {"checked", checked}, {"matched", matched}, {"skipped", skipped}}}});
    return matched == checked ? kPass : kMismatch;
}

int fail(int code, const std::string& kind, const std::string& what) {
    json j{{"error", kind}, {"message", what}, {"exit_code", code}};
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify mod-3 BSD congruences and 2-Selmer data for x^3 + y^3 = 2^i p^j"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    long precision_flag = 0;
    unsigned threads = 0;
    app.add_option("--precision", precision_flag, "working precision in bits (default: CUBICBSD_PRECISION or 256)")
        ->check(CLI::Range(64L, 65536L));
    app.add_flag("--timings", g.timings, "include wall-clock timings in the output");
    app.add_option("--threads", threads, "threads for the L-value sums (0 = all cores)");

    auto* omega = app.add_subcommand("omega", "real period and lattice constants");

    auto* lvalue = app.add_subcommand("lvalue", "algebraic part of L(C_n, 1)");
    long n = 0;
    bool oracle = false;
    lvalue->add_option("--n", n, "n = p, p^2, 2p, 4p, 2p^2 or 4p^2")->required();
    lvalue->add_flag("--oracle", oracle, "compare with the Hecke-series value");

    auto* congruence = app.add_subcommand("congruence", "mod-3 congruence verdicts");
    long cp = 0;
    std::vector<long> range;
    auto* cp_opt = congruence->add_option("--p", cp, "family prime");
    auto* range_opt = congruence->add_option("--range", range, "all family primes in [A, B]")->expected(2);
    cp_opt->excludes(range_opt);
    congruence->require_option(1);

    std::string effort = "default";
    std::uint64_t seed = 0x5eed;
    bool grh = false;
    auto add_cg_flags = [&](CLI::App* sub) {
        sub->add_option("--effort", effort, "relation search effort")
            ->check(CLI::IsMember({"low", "default", "high"}));
        sub->add_option("--seed", seed, "relation sampling seed");
        sub->add_flag("--grh", grh, "use the Bach factor base even when the proved path applies");
    };

    auto* classgroup = app.add_subcommand("classgroup", "class group of Q(cbrt p)");
    long gp = 0;
    bool unit = false;
    classgroup->add_option("--p", gp, "family prime")->required();
    classgroup->add_flag("--unit", unit, "also reconstruct the fundamental unit");
    add_cg_flags(classgroup);

    auto* selmer = app.add_subcommand("selmer", "2-Selmer and Sha[2] prediction");
    long sp = 0;
    long oracle_limit = 200;
    selmer->add_option("--p", sp, "family prime")->required();
    selmer->add_option("--oracle-limit", oracle_limit, "cross-check epsilon with the oracle below this p");
    add_cg_flags(selmer);

    auto* scan = app.add_subcommand("scan", "batch scan with a resumable cache");
    ScanOptions so;
    std::string csv;
    scan->add_option("--min", so.min)->required();
    scan->add_option("--max", so.max)->required();
    scan->add_option("--out", so.out, "JSON-lines output and cache")->required();
    scan->add_option("--jobs", so.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
    scan->add_option("--congruence-max", so.record.congruence_max, "run the congruence suite for p up to this");
    scan->add_option("--oracle-limit", so.record.oracle_limit, "cross-check epsilon with the oracle below this p");
    scan->add_option("--csv", csv, "also export primes with k >= 2 as an appendix-style CSV table");
    add_cg_flags(scan);

    auto* verify = app.add_subcommand("verify-appendix", "recompute the rows of the class-group table");
    std::string rows_path;
    long max_p = 5000;
    long escalate_limit = 20000;
    verify->add_option("--rows", rows_path, "appendix CSV")->required();
    verify->add_option("--max-p", max_p, "only rows with p up to this");
    verify->add_option("--escalate-limit", escalate_limit, "retry grh mismatches on the proved path up to this p");
    add_cg_flags(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        g.precision = precision_flag ? precision_flag : default_precision();
        set_lvalue_threads(threads);
        if (*omega) return cmd_omega(g);
        if (*lvalue) return cmd_lvalue(g, n, oracle);
        if (*congruence) return cmd_congruence(g, cp, range);
        if (*classgroup) return cmd_classgroup(g, gp, cg_options(effort, seed, grh), unit);
        if (*selmer) return cmd_selmer(g, sp, cg_options(effort, seed, grh), oracle_limit);
        if (*scan) {
            so.record.effort = effort_from_string(effort);
            so.record.seed = seed;
            if (grh) return fail(kUsage, "usage", "--grh is not supported for scan");
            return cmd_scan(g, so, csv);
        }
        if (*verify) return cmd_verify_appendix(g, rows_path, max_p, cg_options(effort, seed, grh), escalate_limit);
    } catch (const ParseError& e) {
        return fail(kUsage, "parse", e.what());
    } catch (const RecognitionFailure& e) {
        return fail(kCertification, "recognition", e.what());
    } catch (const PrecisionExhausted& e) {
        return fail(kCertification, "precision", e.what());
    } catch (const NeedsMoreEffort& e) {
        return fail(kCertification, "needs-more-effort", e.what());
    } catch (const ConsistencyFailure& e) {
        return fail(kCertification, "consistency", e.what());
    } catch (const ConductorResolutionFailure& e) {
        return fail(kCertification, "conductor", e.what());
    } catch (const Error& e) {
        return fail(kUsage, "usage", e.what());
    } catch (const std::exception& e) {
        return fail(kCertification, "internal", e.what());
    }
    return kUsage;
}
