#pragma once
// One JSON object per line: per-prime results, the class-group table, batch scans.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicbsd/cubicfield.hpp"
#include "cubicbsd/descent.hpp"
#include "cubicbsd/lvalue.hpp"

namespace cubicbsd {

constexpr int kSchemaVersion = 1;

struct CheckRecord {
    std::string label;
    std::string claim;
    std::int64_t observed = 0;
    bool pass = false;
    bool operator==(const CheckRecord&) const = default;
};

struct CongruenceRecord {
    long precision_bits = 0;
    bool all_pass = false;
    double max_error_bound = 0;
    std::vector<CheckRecord> checks;
    std::map<long, std::int64_t> algebraic_parts;
    bool operator==(const CongruenceRecord&) const = default;
};

struct ClassGroupRecord {
    std::vector<std::int64_t> divisors;
    int two_rank = 0;
    std::string certificate;
    std::int64_t class_number = 1;
    double regulator = 0;
    double ratio = 0;
    std::string effort;
    long factor_base_bound = 0;
    long relations = 0;
    long relations_verified = 0;
    bool operator==(const ClassGroupRecord&) const = default;
};

struct SelmerRecord {
    int j = 0;
    int k = 0;
    int epsilon = -1;
    int sel2_dim = 0;
    int sha2_dim = 0;
    bool sha2_nontrivial = false;
    bool oracle_checked = false;
    bool operator==(const SelmerRecord&) const = default;
};

struct ResultRecord {
    int schema_version = kSchemaVersion;
    long p = 0;
    int family_class = 0;  // p mod 9
    std::uint64_t seed = 0;
    long precision_bits = 0;
    std::string status = "ok";  // "ok" or "error"
    std::string error;
    std::optional<CongruenceRecord> congruence;
    std::optional<ClassGroupRecord> class_group;
    std::optional<SelmerRecord> selmer;
    std::map<std::string, double> timings;  // seconds; empty unless requested
    bool operator==(const ResultRecord&) const = default;
};

nlohmann::json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);
std::string to_line(const ResultRecord& r);
// Throws ParseError carrying the line number.
ResultRecord parse_line(const std::string& line, long lineno);

ClassGroupRecord to_record(const ClassGroupStructure& cg, Effort effort);
CongruenceRecord to_record(const CongruenceReport& rep);
SelmerRecord to_record(const SelmerReport& rep);

struct RecordOptions {
    long precision_bits = 256;
    std::uint64_t seed = 0x5eed;
    Effort effort = Effort::Default;
    long congruence_max = 500;  // congruence suite only for p up to this
    long oracle_limit = 200;
    bool timings = false;
};

// Never throws for a family prime: failures land in status/error.
ResultRecord make_record(long p, const RecordOptions& opt);

// Odd primes p = 2 or 5 (mod 9) with lo <= p <= hi.
std::vector<long> family_primes(long lo, long hi);

// Default working precision: CUBICBSD_PRECISION or 256.
long default_precision();

struct AppendixRow {
    long p = 0;
    int table = 0;  // residue class of the table the row is printed in
    std::vector<long> cl;
    std::vector<long> sha2;
    long line = 0;
};

std::vector<AppendixRow> read_appendix(const std::string& path);

struct ScanClassSummary {
    long primes = 0;
    long k_ge_2 = 0;
    long errors = 0;
    double fraction() const { return primes ? static_cast<double>(k_ge_2) / static_cast<double>(primes) : 0.0; }
};

struct ScanSummary {
    long written = 0;
    long computed = 0;
    long reused = 0;
    long quarantined = 0;
    std::map<int, ScanClassSummary> by_class;  // keyed by 2 and 5, over [min, max]
};

struct ScanOptions {
    long min = 0;
    long max = 0;
    std::string out;
    unsigned jobs = 1;
    RecordOptions record;
};

// Records are written in ascending p to out; valid existing records are reused,
// corrupted lines go to out + ".quarantine" and are recomputed.
ScanSummary run_scan(const ScanOptions& opt, const std::function<void(const std::string&)>& warn);

}  // namespace cubicbsd
