#include "cubicbsd/records.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubicbsd/errors.hpp"

namespace cubicbsd {

using nlohmann::json;

namespace {

std::int64_t to_i64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw DomainError("integer does not fit the record schema: " + v.str());
    return v.convert_to<std::int64_t>();
}

json check_json(const CheckRecord& c) {
    return {{"label", c.label}, {"claim", c.claim}, {"observed", c.observed}, {"pass", c.pass}};
}

}  // namespace

json to_json(const ResultRecord& r) {
    json j;
    j["schema_version"] = r.schema_version;
    j["p"] = r.p;
    j["family_class"] = r.family_class;
    j["seed"] = r.seed;
    j["precision_bits"] = r.precision_bits;
    j["status"] = r.status;
    if (!r.error.empty()) j["error"] = r.error;
    if (r.congruence) {
        const auto& c = *r.congruence;
        json checks = json::array();
        for (const auto& x : c.checks) checks.push_back(check_json(x));
        json parts = json::object();
        for (const auto& [n, v] : c.algebraic_parts) parts[std::to_string(n)] = v;
        j["congruence"] = {{"precision_bits", c.precision_bits},
                           {"all_pass", c.all_pass},
                           {"max_error_bound", c.max_error_bound},
                           {"checks", checks},
                           {"algebraic_parts", parts}};
    }
    if (r.class_group) {
        const auto& c = *r.class_group;
        j["class_group"] = {{"divisors", c.divisors},
                            {"two_rank", c.two_rank},
                            {"certificate", c.certificate},
                            {"class_number", c.class_number},
                            {"regulator", c.regulator},
                            {"ratio", c.ratio},
                            {"effort", c.effort},
                            {"factor_base_bound", c.factor_base_bound},
                            {"relations", c.relations},
                            {"relations_verified", c.relations_verified}};
    }
    if (r.selmer) {
        const auto& s = *r.selmer;
        j["selmer"] = {{"j", s.j},
                       {"k", s.k},
                       {"epsilon", s.epsilon},
                       {"sel2_dim", s.sel2_dim},
                       {"sha2_dim", s.sha2_dim},
                       {"sha2_nontrivial", s.sha2_nontrivial},
                       {"oracle_checked", s.oracle_checked}};
    }
    if (!r.timings.empty()) j["timings"] = r.timings;
    return j;
}

ResultRecord record_from_json(const json& j) {
    ResultRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion)
        throw DomainError("unsupported schema_version " + std::to_string(r.schema_version));
    r.p = j.at("p").get<long>();
    r.family_class = j.at("family_class").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.precision_bits = j.at("precision_bits").get<long>();
    r.status = j.at("status").get<std::string>();
    if (r.status != "ok" && r.status != "error") throw DomainError("bad status " + r.status);
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    if (j.contains("congruence")) {
        const auto& c = j.at("congruence");
        CongruenceRecord cr;
        cr.precision_bits = c.at("precision_bits").get<long>();
        cr.all_pass = c.at("all_pass").get<bool>();
        cr.max_error_bound = c.at("max_error_bound").get<double>();
        for (const auto& x : c.at("checks")) {
            cr.checks.push_back({x.at("label").get<std::string>(), x.at("claim").get<std::string>(),
                                 x.at("observed").get<std::int64_t>(), x.at("pass").get<bool>()});
        }
        for (const auto& [k, v] : c.at("algebraic_parts").items()) cr.algebraic_parts[std::stol(k)] = v.get<std::int64_t>();
        r.congruence = cr;
    }
    if (j.contains("class_group")) {
        const auto& c = j.at("class_group");
        ClassGroupRecord cg;
        cg.divisors = c.at("divisors").get<std::vector<std::int64_t>>();
        cg.two_rank = c.at("two_rank").get<int>();
        cg.certificate = c.at("certificate").get<std::string>();
        certificate_from_string(cg.certificate);
        cg.class_number = c.at("class_number").get<std::int64_t>();
        cg.regulator = c.at("regulator").get<double>();
        cg.ratio = c.at("ratio").get<double>();
        cg.effort = c.at("effort").get<std::string>();
        cg.factor_base_bound = c.at("factor_base_bound").get<long>();
        cg.relations = c.at("relations").get<long>();
        cg.relations_verified = c.at("relations_verified").get<long>();
        r.class_group = cg;
    }
    if (j.contains("selmer")) {
        const auto& s = j.at("selmer");
        SelmerRecord sr;
        sr.j = s.at("j").get<int>();
        sr.k = s.at("k").get<int>();
        sr.epsilon = s.at("epsilon").get<int>();
        sr.sel2_dim = s.at("sel2_dim").get<int>();
        sr.sha2_dim = s.at("sha2_dim").get<int>();
        sr.sha2_nontrivial = s.at("sha2_nontrivial").get<bool>();
        sr.oracle_checked = s.at("oracle_checked").get<bool>();
        r.selmer = sr;
    }
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
}

std::string to_line(const ResultRecord& r) { return to_json(r).dump(); }

ResultRecord parse_line(const std::string& line, long lineno) {
    try {
        return record_from_json(json::parse(line));
    } catch (const json::exception& e) {
        throw ParseError(e.what(), lineno);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), lineno);
    }
}

ClassGroupRecord to_record(const ClassGroupStructure& cg, Effort effort) {
    ClassGroupRecord r;
    for (const auto& d : cg.elementary_divisors) r.divisors.push_back(to_i64(d));
    r.two_rank = cg.two_rank;
    r.certificate = to_string(cg.certificate);
    r.class_number = to_i64(cg.class_number);
    r.regulator = cg.regulator;
    r.ratio = cg.ratio;
    r.effort = to_string(effort);
    r.factor_base_bound = cg.factor_base_bound;
    r.relations = cg.relations;
    r.relations_verified = cg.relations_verified;
    return r;
}

CongruenceRecord to_record(const CongruenceReport& rep) {
    CongruenceRecord r;
    r.precision_bits = rep.precision_bits;
    r.all_pass = rep.all_pass();
    r.max_error_bound = rep.max_error_bound;
    for (const auto& c : rep.checks) r.checks.push_back({c.label, c.claim, to_i64(c.observed), c.pass});
    for (const auto& [n, v] : rep.algebraic_parts) r.algebraic_parts[n] = to_i64(v);
    return r;
}

SelmerRecord to_record(const SelmerReport& rep) {
    return {rep.j, rep.k, rep.epsilon, rep.sel2_dim, rep.sha2_dim, rep.sha2_nontrivial, rep.oracle_checked};
}

ResultRecord make_record(long p, const RecordOptions& opt) {
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
    ResultRecord r;
    r.p = p;
    r.family_class = static_cast<int>(p % 9);
    r.seed = opt.seed;
    r.precision_bits = opt.precision_bits;
    try {
        require_family_prime(p);
        if (p <= opt.congruence_max) {
            auto t = clock::now();
            r.congruence = to_record(congruence_report(p, opt.precision_bits));
            if (opt.timings) r.timings["congruence"] = secs(t);
        }
        auto t = clock::now();
        ClassGroupOptions co;
        co.effort = opt.effort;
        co.seed = opt.seed;
        auto cg = class_group(p, co);
        r.class_group = to_record(cg, opt.effort);
        if (opt.timings) r.timings["class_group"] = secs(t);
        t = clock::now();
        r.selmer = to_record(sha2_report(p, cg, opt.oracle_limit));
        if (opt.timings) r.timings["selmer"] = secs(t);
    } catch (const std::exception& e) {
        r.status = "error";
        r.error = e.what();
    }
    return r;
}

std::vector<long> family_primes(long lo, long hi) {
    std::vector<long> out;
    for (long p = std::max(lo, 3L); p <= hi; ++p) {
        long m = p % 9;
        if ((m == 2 || m == 5) && is_prime(static_cast<std::uint64_t>(p))) out.push_back(p);
    }
    return out;
}

long default_precision() {
    const char* s = std::getenv("CUBICBSD_PRECISION");
    if (!s || !*s) return 256;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 64 || v > 65536)
        throw ConfigurationError(std::string("CUBICBSD_PRECISION must be an integer in [64, 65536], got '") + s + "'");
    return v;
}

namespace {

std::vector<long> parse_divisors(const std::string& field, long lineno, const char* what) {
    std::vector<long> out;
    std::istringstream in(field);
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || v < 2) throw ParseError(std::string("bad ") + what + " entry '" + tok + "'", lineno);
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            f.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    f.push_back(cur);
    return f;
}

}  // namespace

std::vector<AppendixRow> read_appendix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open " + path);
    std::vector<AppendixRow> rows;
    std::string line;
    long lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv(line);
        if (!header) {
            if (f.size() != 4 || f[0] != "p" || f[1] != "table" || f[2] != "cl" || f[3] != "sha2")
                throw ParseError("expected header p,table,cl,sha2", lineno);
            header = true;
            continue;
        }
        if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), lineno);
        AppendixRow row;
        row.line = lineno;
        try {
            std::size_t pos = 0;
            row.p = std::stol(f[0], &pos);
            if (pos != f[0].size()) throw std::invalid_argument("p");
            row.table = std::stoi(f[1], &pos);
            if (pos != f[1].size()) throw std::invalid_argument("table");
        } catch (const std::exception&) {
            throw ParseError("bad p or table field", lineno);
        }
        if (row.table != 2 && row.table != 5) throw ParseError("table must be 2 or 5", lineno);
        if (!is_family_prime(row.p)) throw ParseError(std::to_string(row.p) + " is not a family prime", lineno);
        row.cl = parse_divisors(f[2], lineno, "cl");
        row.sha2 = parse_divisors(f[3], lineno, "sha2");
        for (long d : row.sha2)
            if (d != 2) throw ParseError("sha2 entries must be 2", lineno);
        rows.push_back(std::move(row));
    }
    if (!header) throw ParseError("missing header", lineno);
    return rows;
}

namespace {

bool reusable(const ResultRecord& r, const RecordOptions& opt) {
    return r.status == "ok" && r.seed == opt.seed && r.precision_bits == opt.precision_bits && r.class_group &&
           r.selmer && r.congruence.has_value() == (r.p <= opt.congruence_max);
}

// Reads out (and a leftover .partial from an interrupted run) into by_p.
void load_existing(const std::string& path, const RecordOptions& opt, std::map<long, std::string>& by_p,
                   std::ofstream& quarantine, const std::string& qpath, ScanSummary& s,
                   const std::function<void(const std::string&)>& warn) {
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto r = parse_line(line, lineno);
            if (!is_family_prime(r.p)) throw ParseError("not a family prime", lineno);
            if (!reusable(r, opt)) continue;
            if (!opt.timings) r.timings.clear();
            by_p[r.p] = to_line(r);
        } catch (const ParseError& e) {
            if (!quarantine.is_open()) quarantine.open(qpath, std::ios::app);
            quarantine << line << '\n';
            ++s.quarantined;
            warn(path + ": " + e.what() + "; quarantined to " + qpath + " and recomputing");
        }
    }
}

}  // namespace

ScanSummary run_scan(const ScanOptions& opt, const std::function<void(const std::string&)>& warn) {
    if (opt.out.empty()) throw ConfigurationError("scan needs an output path");
    if (opt.min > opt.max) throw ConfigurationError("scan range is empty");
    ScanSummary s;
    const std::string partial = opt.out + ".partial";
    const std::string qpath = opt.out + ".quarantine";
    std::map<long, std::string> existing;
    std::ofstream quarantine;
    load_existing(opt.out, opt.record, existing, quarantine, qpath, s, warn);
    load_existing(partial, opt.record, existing, quarantine, qpath, s, warn);

    const auto targets = family_primes(opt.min, opt.max);
    std::vector<long> todo;
    for (long p : targets)
        if (!existing.count(p)) todo.push_back(p);

    // every p that will appear in the output, ascending
    std::map<long, bool> order;
    for (const auto& [p, _] : existing) order[p] = false;
    for (long p : todo) order[p] = true;

    std::mutex mu;
    std::condition_variable cv;
    std::map<long, std::string> done;
    std::atomic<std::size_t> next{0};
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs > 1) set_lvalue_threads(1);
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            std::string line = to_line(make_record(todo[i], opt.record));
            {
                std::lock_guard<std::mutex> lk(mu);
                done[todo[i]] = std::move(line);
            }
            cv.notify_all();
        }
    };
    std::ofstream out(partial, std::ios::trunc);
    if (!out) throw ConfigurationError("cannot write " + partial);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs && t < todo.size(); ++t) pool.emplace_back(worker);
    for (const auto& [p, fresh] : order) {
        std::string line;
        if (fresh) {
            std::unique_lock<std::mutex> lk(mu);
            cv.wait(lk, [&] { return done.count(p) > 0; });
            line = std::move(done[p]);
            done.erase(p);
            ++s.computed;
        } else {
            line = existing[p];
            ++s.reused;
        }
        out << line << '\n';
        out.flush();
        ++s.written;
        if (p >= opt.min && p <= opt.max) {
            auto r = parse_line(line, s.written);
            auto& c = s.by_class[r.family_class];
            ++c.primes;
            if (r.status != "ok")
                ++c.errors;
            else if (r.selmer && r.selmer->k >= 2)
                ++c.k_ge_2;
        }
    }
    for (auto& t : pool) t.join();
    out.close();
    std::filesystem::rename(partial, opt.out);
    return s;
}

}  // namespace cubicbsd
