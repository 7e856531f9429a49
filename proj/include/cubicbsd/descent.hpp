#pragma once
// 2-descent dictionary for the rank-one member E = C_{2p^j} of the family.

#include "cubicbsd/cubicfield.hpp"

namespace cubicbsd {

constexpr long kInfinitePlace = 0;

struct SelmerReport {
    long p = 0;
    int j = 0;        // E = C_{2p^j}; j = 1 iff p = 2 (mod 9)
    int k = 0;        // 2-rank of Cl(Q(cbrt p))
    int epsilon = -1;
    int sel2_dim = 0;
    int sha2_dim = 0;
    bool sha2_nontrivial = false;
    bool oracle_checked = false;  // epsilon confirmed by the Hecke oracle
    long conductor = 0;           // oracle conductor when checked

    long curve_n() const { return j == 1 ? 2 * p : 2 * p * p; }
};

// dim over F_2 of the image of the local Kummer map at q (q = kInfinitePlace for
// the real place). ell counts the places of L above q, i.e. the irreducible
// factors of x^3 - 27 p^(2j) over Q_q.
int local_image_dimension(long p, int j, long q);

int sel2_dimension(int k, int epsilon);

// Oracle cross-check of epsilon is done for p below oracle_limit.
SelmerReport sha2_report(long p, const ClassGroupStructure& cl, long oracle_limit = 200);

}  // namespace cubicbsd
