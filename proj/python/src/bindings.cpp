#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubicbsd/cubicfield.hpp"
#include "cubicbsd/descent.hpp"
#include "cubicbsd/errors.hpp"
#include "cubicbsd/heckeoracle.hpp"
#include "cubicbsd/lattice.hpp"
#include "cubicbsd/lvalue.hpp"
#include "cubicbsd/records.hpp"

namespace py = pybind11;
using namespace cubicbsd;

namespace {

py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.str())); }

py::list to_py(const std::vector<BigInt>& v) {
    py::list out;
    for (const auto& x : v) out.append(to_py(x));
    return out;
}

py::dict congruence_dict(const CongruenceReport& r) {
    py::list checks;
    for (const auto& c : r.checks) {
        py::dict d;
        d["label"] = c.label;
        d["claim"] = c.claim;
        d["observed"] = to_py(c.observed);
        d["pass"] = c.pass;
        checks.append(d);
    }
    py::dict parts;
    for (const auto& [n, v] : r.algebraic_parts) parts[py::int_(n)] = to_py(v);
    py::dict d;
    d["p"] = r.p;
    d["residue_class"] = r.residue_class_mod9;
    d["precision_bits"] = r.precision_bits;
    d["all_pass"] = r.all_pass();
    d["max_error_bound"] = r.max_error_bound;
    d["checks"] = checks;
    d["algebraic_parts"] = parts;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mod-3 BSD congruences and 2-Selmer data for x^3 + y^3 = 2^i p^j";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UnsupportedPrime>(m, "UnsupportedPrime", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    auto prec = py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted", base.ptr());
    py::register_exception<RecognitionFailure>(m, "RecognitionFailure", prec.ptr());
    py::register_exception<NeedsMoreEffort>(m, "NeedsMoreEffort", base.ptr());
    py::register_exception<ConsistencyFailure>(m, "ConsistencyFailure", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    m.def("omega", [](long bits) { return compute_period(bits).omega.str(static_cast<int>(bits * 0.30103)); },
          py::arg("precision_bits") = 256, "Real period as a decimal string.");

    m.def("is_family_prime", &is_family_prime, py::arg("p"));
    m.def("family_primes", &family_primes, py::arg("lo"), py::arg("hi"));

    m.def("cubic_residue_symbol",
          [](long a, long b, long c, long d) -> py::object {
              auto s = cubic_residue_symbol(EisensteinInteger(a, b), EisensteinInteger(c, d));
              if (s.zero) return py::none();
              return py::int_(s.exponent);
          },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
          "(a + b w / c + d w)_3 as the exponent k of w^k, None when zero.");

    m.def("lvalue",
          [](long p, long n, long bits) {
              auto per = compute_period(bits);
              auto v = (n == p || n == p * p) ? lvalue_p_family(p, n, per) : lvalue_2p_family(p, n, per);
              py::dict d;
              d["n"] = v.n;
              d["p"] = v.p;
              d["value"] = v.complex_value.re.to_double();
              d["algebraic_part"] = to_py(v.algebraic_part);
              d["error_bound"] = v.error_bound.to_double();
              d["forced_zero"] = v.is_forced_zero;
              return d;
          },
          py::arg("p"), py::arg("n"), py::arg("precision_bits") = 256);

    m.def("oracle_lvalue",
          [](long n, long bits) {
              auto o = lvalue_oracle(n, bits);
              py::dict d;
              d["value"] = o.value.to_double();
              d["conductor"] = o.conductor;
              d["root_number"] = o.root_number;
              return d;
          },
          py::arg("n"), py::arg("precision_bits") = 128);

    m.def("congruence", [](long p, long bits) { return congruence_dict(congruence_report(p, bits)); }, py::arg("p"),
          py::arg("precision_bits") = 256);

    m.def("class_group",
          [](long p, const std::string& effort, std::uint64_t seed, bool grh) {
              ClassGroupOptions o;
              o.effort = effort_from_string(effort);
              o.seed = seed;
              o.force_grh = grh;
              auto cg = class_group(p, o);
              py::dict d;
              d["p"] = cg.p;
              d["divisors"] = to_py(cg.elementary_divisors);
              d["two_rank"] = cg.two_rank;
              d["class_number"] = to_py(cg.class_number);
              d["certificate"] = to_string(cg.certificate);
              d["regulator"] = cg.regulator;
              d["ratio"] = cg.ratio;
              d["relations"] = cg.relations;
              d["relations_verified"] = cg.relations_verified;
              return d;
          },
          py::arg("p"), py::arg("effort") = "default", py::arg("seed") = 0x5eed, py::arg("grh") = false);

    m.def("selmer",
          [](long p, long oracle_limit) {
              auto s = sha2_report(p, class_group(p), oracle_limit);
              py::dict d;
              d["p"] = s.p;
              d["j"] = s.j;
              d["k"] = s.k;
              d["epsilon"] = s.epsilon;
              d["sel2_dim"] = s.sel2_dim;
              d["sha2_dim"] = s.sha2_dim;
              d["sha2_nontrivial"] = s.sha2_nontrivial;
              d["curve_n"] = s.curve_n();
              return d;
          },
          py::arg("p"), py::arg("oracle_limit") = 0);

    m.def("sel2_dimension", &sel2_dimension, py::arg("k"), py::arg("epsilon") = -1);

    m.def("record",
          [](long p, long bits, long congruence_max) {
              RecordOptions o;
              o.precision_bits = bits;
              o.congruence_max = congruence_max;
              o.oracle_limit = 0;
              return to_line(make_record(p, o));
          },
          py::arg("p"), py::arg("precision_bits") = 256, py::arg("congruence_max") = 500,
          "One result record as a JSON line.");
    m.def("roundtrip", [](const std::string& line) { return to_line(parse_line(line, 1)); }, py::arg("line"));
}
