#include <doctest.h>

#include "cubicbsd/descent.hpp"
#include "cubicbsd/errors.hpp"

using namespace cubicbsd;

TEST_SUITE("descent") {

TEST_CASE("Selmer dimension from k and the root number") {
    CHECK(sel2_dimension(0, -1) == 1);
    CHECK(sel2_dimension(1, -1) == 1);
    CHECK(sel2_dimension(2, -1) == 3);
    CHECK(sel2_dimension(3, -1) == 3);
    CHECK(sel2_dimension(4, -1) == 5);
    CHECK(sel2_dimension(2, 1) == 2);
    for (int k = 0; k <= 6; ++k) CHECK(sel2_dimension(k, -1) % 2 == 1);
}

TEST_CASE("local images") {
    CHECK(local_image_dimension(113, 2, kInfinitePlace) == 0);
    CHECK(local_image_dimension(113, 2, 2) == 2);
    CHECK(local_image_dimension(113, 2, 3) == 0);
    CHECK(local_image_dimension(113, 2, 113) == 0);
    CHECK(local_image_dimension(443, 1, 2) == 2);
}

TEST_CASE("Sha[2] prediction") {
    struct Row {
        long p;
        int k;
        int sha;
    };
    for (const auto& r : std::vector<Row>{{113, 2, 2}, {443, 2, 2}, {857, 2, 2}, {4799, 3, 2}, {11, 1, 0}}) {
        auto s = sha2_report(r.p, class_group(r.p), 0);
        CHECK(s.k == r.k);
        CHECK(s.sha2_dim == r.sha);
        CHECK(s.sha2_nontrivial == (r.k >= 2));
        CHECK(s.j == (r.p % 9 == 2 ? 1 : 2));
    }
    auto checked = sha2_report(113, class_group(113), 200);
    CHECK(checked.oracle_checked);
    CHECK(checked.epsilon == -1);
    CHECK(checked.curve_n() == 2 * 113 * 113);
}

}
