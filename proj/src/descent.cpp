#include "cubicbsd/descent.hpp"

#include "cubicbsd/errors.hpp"
#include "cubicbsd/heckeoracle.hpp"
#include "cubicbsd/lvalue.hpp"

namespace cubicbsd {

int local_image_dimension(long p, int j, long q) {
    if (j != 1 && j != 2) throw DomainError("j must be 1 or 2");
    if (q == kInfinitePlace) return 0;
    if (q < 2 || !is_prime(static_cast<std::uint64_t>(q))) throw DomainError("q must be prime or the infinite place");
    if (q == 2) return 2;
    // Q(cbrt(27 p^(2j))) = Q(cbrt p)
    return static_cast<int>(primes_above(p, q).size()) - 1;
}

int sel2_dimension(int k, int epsilon) {
    if (k < 0) throw DomainError("k must be non-negative");
    if (epsilon != 1 && epsilon != -1) throw DomainError("epsilon must be +1 or -1");
    int sign = k % 2 == 0 ? 1 : -1;
    return epsilon == sign ? k : k + 1;
}

SelmerReport sha2_report(long p, const ClassGroupStructure& cl, long oracle_limit) {
    require_family_prime(p);
    if (cl.p != p) throw ConfigurationError("class group belongs to p = " + std::to_string(cl.p));
    SelmerReport r;
    r.p = p;
    r.j = p % 9 == 2 ? 1 : 2;
    r.k = cl.two_rank;
    r.epsilon = -1;
    if (p < oracle_limit) {
        ConductorResolution res = resolve_conductor(r.curve_n());
        if (res.root_number != r.epsilon)
            throw ConsistencyFailure("oracle root number of C_" + std::to_string(r.curve_n()) + " is " +
                                     std::to_string(res.root_number));
        r.oracle_checked = true;
        r.conductor = res.conductor;
    }
    r.sel2_dim = sel2_dimension(r.k, r.epsilon);
    r.sha2_dim = r.sel2_dim - 1;
    r.sha2_nontrivial = r.sha2_dim > 0;
    return r;
}

}  // namespace cubicbsd
