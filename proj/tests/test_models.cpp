#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsym/models.hpp"

using namespace qsym;

TEST_CASE("examples build and are weakly symmetric where expected") {
    for (const auto& name : example_names()) {
        auto m = example(name);
        CHECK(m.rep.dim > 0);
        for (const auto& e : m.expect) {
            const Mat& U = m.symmetry(e.symmetry).U;
            CHECK(unitarity_defect(U) < 1e-12);
            double r = liouville_distance(m.rep, transform_representation(m.rep, U));
            if (e.I)
                CHECK(r < 1e-9);
            else
                CHECK(r > 1e-3);
        }
    }
    CHECK_THROWS_AS(example("nope"), Error);
}

TEST_CASE("literal two-qubit condition-I operators break the symmetry") {
    auto m = twoqubit_I({}, true);
    double r = liouville_distance(m.rep, transform_representation(m.rep, m.symmetry("XX").U));
    CHECK(r > 1e-2);
}

TEST_CASE("qutrit symmetries") {
    auto m = qutrit_chain();
    CHECK(m.rep.dim == 81);
    CHECK(m.rep.jumps.size() == 8);
    const Mat UT = qutrit_translation(4);
    // translation has order L
    Mat P = Mat::Identity(81, 81);
    for (int i = 0; i < 4; ++i) P = UT * P;
    CHECK((P - Mat::Identity(81, 81)).norm() < 1e-12);
    CHECK(unitary_order(UT) == 4);
    CHECK((m.symmetry("TR").U - m.symmetry("TR-shift").U).norm() < 1e-12);
    // TR maps J_a.1 to J_{a+1}.1 exactly
    const Mat& U = m.symmetry("TR").U;
    for (int a = 0; a < 4; ++a) {
        Mat img = U * m.rep.jumps[2 * a] * U.adjoint();
        CHECK((img - m.rep.jumps[(2 * a + 2) % 8]).norm() < 1e-12);
    }
}
