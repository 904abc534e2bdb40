#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "polyostat/moments.hpp"

using namespace polyostat;

namespace {

void check_rel(double got, double want, double tol) {
    CHECK(std::abs(got - want) <=
          tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("step exposure moments on hand-checked pairs") {
    auto sm = step_moments(FamilyId::cc, 1, 1);
    CHECK(sm.e_t == doctest::Approx(0.0));
    CHECK(sm.e_t2 == doctest::Approx(0.0));
    CHECK(step_moments(FamilyId::cc, 2, 1).e_t == doctest::Approx(1.0));

    CHECK(step_moments(FamilyId::dc, 2, 1).e_t ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(step_moments(FamilyId::dc, 2, 1).e_t2 ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(step_moments(FamilyId::dc, 2, 3).e_t == doctest::Approx(4.0));
    CHECK(step_moments(FamilyId::dc, 2, 3).e_t2 == doctest::Approx(16.0));

    CHECK(step_moments(FamilyId::es, 3, 2).e_t == doctest::Approx(1.0));
    CHECK(step_moments(FamilyId::es, 3, 2).e_t2 == doctest::Approx(1.0));
    CHECK(step_moments(FamilyId::es, 2, 5).e_t == doctest::Approx(3.0));
    CHECK(step_moments(FamilyId::es, 2, 5).e_t2 == doctest::Approx(9.0));

    CHECK(step_moments(FamilyId::st, 3, 2).e_t == doctest::Approx(2.0));
    CHECK(step_moments(FamilyId::st, 3, 2).e_t2 == doctest::Approx(5.0));

    // dcc decomposition: |j - U{1..k}| plus an independent U{0..j-1}
    CHECK(step_moments(FamilyId::dcc, 2, 1).e_t == doctest::Approx(0.5));
    CHECK(step_moments(FamilyId::dcc, 2, 1).e_t2 == doctest::Approx(0.5));
    CHECK(step_moments(FamilyId::dcc, 3, 2).e_t ==
          doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(step_moments(FamilyId::dcc, 3, 2).e_t2 ==
          doctest::Approx(11.0 / 6.0).epsilon(1e-12));
    CHECK(step_moments(FamilyId::wa, 4, 7).e_t == doctest::Approx(3.0));
}

TEST_CASE("forbidden pairs are rejected") {
    CHECK_THROWS_AS((void)step_moments(FamilyId::es, 5, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)step_moments(FamilyId::dc, 2, 4),
                    std::invalid_argument);
}

TEST_CASE("step moment inequalities over the reachable grid") {
    for (auto id : all_families) {
        for (long k = 1; k <= 40; ++k) {
            for (long j = 1; j <= 40; ++j) {
                if (gluing_count(id, k, j) == 0) continue;
                auto sm = step_moments(id, k, j);
                CHECK(sm.e_t >= 0.0);
                CHECK(sm.e_t2 + 1e-12 >= sm.e_t * sm.e_t);
            }
        }
    }
}

TEST_CASE("vertical exposure rates") {
    check_rel(vertical_stats(FamilyId::dcc).mu3,
              (6.0 * std::sqrt(5.0) - 4.0) / 5.0, 1e-10);
    check_rel(vertical_stats(FamilyId::dcc).sigma3_sq,
              (114.0 - 4.0 * std::sqrt(5.0)) / 25.0, 1e-10);
    check_rel(vertical_stats(FamilyId::cc).mu3, 1.962459473004, 1e-9);
    check_rel(vertical_stats(FamilyId::cc).sigma3_sq, 2.387549944560, 1e-9);
    check_rel(vertical_stats(FamilyId::dc).mu3, 2.270585647536, 1e-9);
    check_rel(vertical_stats(FamilyId::st).mu3, 2.0, 1e-10);
    check_rel(vertical_stats(FamilyId::st).sigma3_sq, 3.310272316368, 1e-9);
    check_rel(vertical_stats(FamilyId::wa).mu3, 4.0 / 3.0, 1e-11);
    check_rel(vertical_stats(FamilyId::wa).sigma3_sq, 20.0 / 9.0, 1e-11);
    // es keeps the tabulated shallow normalization here
    check_rel(vertical_stats(FamilyId::es).mu3, 0.618862837965, 1e-9);
    check_rel(vertical_stats(FamilyId::es).sigma3_sq, 0.363155476745, 1e-9);
}

TEST_CASE("long-range covariance operator") {
    auto one = [](int, int) { return 1.0; };
    CHECK_THROWS_AS((void)xi5(FamilyId::dcc, one, one), std::invalid_argument);
    CHECK_THROWS_AS((void)xi5(FamilyId::wa, one, one), std::invalid_argument);

    // the column-size lag sums close the gap between the stationary
    // variance and the CLT rate
    auto f_ju = [](int, int j) { return double(j); };
    auto f_kk = [](int, int k) { return double(k); };
    for (auto id : {FamilyId::cc, FamilyId::dc, FamilyId::st, FamilyId::es}) {
        auto js = joint_stats(id);
        double gap = spectral_constants(id).sigma2_sq - js.sigma_x_station;
        CAPTURE(family_name(id));
        CHECK(std::abs(2.0 * xi5(id, f_ju, f_kk) - gap) < 1e-6);
    }

    auto f_et = [](int u, int j) {
        return step_moments(FamilyId::es, u, j).e_t;
    };
    auto f_j = [](int, int j) { return double(j); };
    auto f_k = [](int, int k) { return double(k); };
    check_rel(xi5(FamilyId::es, f_et, f_et), 0.0427147518202, 1e-8);
    check_rel(xi5(FamilyId::es, f_j, f_et), 0.106553357492, 1e-8);
    check_rel(xi5(FamilyId::es, f_et, f_k), 0.109314957776, 1e-8);
}

TEST_CASE("joint statistics, frozen converged rows") {
    struct Row {
        FamilyId id;
        double mu3, s3, sq, c, rxq, mu4, s4, mu4s, s4s;
    };
    const double s5 = std::sqrt(5.0);
    const Row rows[] = {
        {FamilyId::dcc, (6 * s5 - 4) / 5, (114 - 4 * s5) / 25,
         229.0 / 50 + s5 / 25, 13.0 / 5 + s5 / 25, 0.880065051591,
         1.7366563146, 0.60826311235, 0.8422291236, 0.69670893707},
        {FamilyId::cc, 1.962459473004, 2.387549944560, 3.834104283487,
         2.112395181494, 0.887392748268, 1.795289628362, 0.458898830739,
         0.889140485087, 0.564568334817},
        {FamilyId::dc, 2.270585647536, 0.980872549909, 0.362055589499,
         0.210547523734, 0.571302176898, 1.739405109901, 0.585727876266,
         1.739405109901, 0.585727876266},
        {FamilyId::st, 2.0, 3.310272316368, 6.199373098635, 3.682378738610,
         0.885312202012, 1.683524031255, 0.719804729351, 0.841762015628,
         0.832250781730},
        {FamilyId::es, 0.618986871326, 0.363151485855, 0.448580989495,
         0.418035859242, 0.628872308669, 1.610448110045, 1.018859877244,
         0.380622846179, 0.167909189320},
        {FamilyId::wa, 4.0 / 3, 20.0 / 9, 232.0 / 63, 20.0 / 9,
         0.818839474068, 5.0 / 3, 173.0 / 189, 2.0 / 3, 152.0 / 189},
    };
    for (const auto& r : rows) {
        auto js = joint_stats(r.id);
        CAPTURE(family_name(r.id));
        check_rel(js.mu3, r.mu3, 1e-9);
        check_rel(js.sigma3_sq, r.s3, 1e-9);
        check_rel(js.sigma_q_sq, r.sq, 1e-9);
        check_rel(js.c_xq, r.c, 1e-9);
        check_rel(js.rho_xq, r.rxq, 1e-9);
        check_rel(js.mu4, r.mu4, 1e-9);
        check_rel(js.sigma4_sq, r.s4, 1e-9);
        check_rel(js.mu4_sim, r.mu4s, 1e-9);
        check_rel(js.sigma4_sq_sim, r.s4s, 1e-9);
    }
}

TEST_CASE("limit-law constants satisfy their defining identities") {
    for (auto id : all_families) {
        auto js = joint_stats(id);
        auto sc = spectral_constants(id);
        int hinc = family_spec(id).horizontal_increment;
        CAPTURE(family_name(id));
        CHECK(js.mu4 ==
              doctest::Approx(sc.mu1 * (js.mu3 + hinc)).epsilon(1e-10));
        CHECK(js.mu4 ==
              doctest::Approx(js.alpha + js.beta * sc.mu1).epsilon(1e-10));
        CHECK(js.mu4_sim ==
              doctest::Approx(sc.mu1 * js.mu3).epsilon(1e-10));
        CHECK(js.alpha ==
              doctest::Approx(js.c_xq / sc.sigma2_sq).epsilon(1e-10));
        CHECK(js.gamma > 0.0);
        CHECK(std::abs(js.rho_xq) < 1.0);
        CHECK(js.sigma4_sq ==
              doctest::Approx(js.gamma * sc.mu1 +
                              sc.sigma1_sq * js.beta * js.beta)
                  .epsilon(1e-10));
        CHECK(js.sigma4_sq_sim ==
              doctest::Approx(js.gamma * sc.mu1 +
                              sc.sigma1_sq * js.beta_sim * js.beta_sim)
                  .epsilon(1e-10));
        CHECK(js.beta == doctest::Approx(js.beta_sim + hinc).epsilon(1e-10));
        check_rel(js.mu2_chain, sc.mu2, 1e-9);
    }
}

TEST_CASE("area rate recovered through the lag sums") {
    struct Row {
        FamilyId id;
        double station, clt;
    };
    const Row rows[] = {
        {FamilyId::dcc, 2.0, 2.0},
        {FamilyId::cc, 1.842538140709, 1.477932721579},
        {FamilyId::dc, 0.261192551739, 0.375139902850},
        {FamilyId::st, 1.968398042477, 2.790719803704},
        {FamilyId::es, 0.536526701891, 0.985056784534},
        {FamilyId::wa, 2.0, 2.0},
    };
    for (const auto& r : rows) {
        auto js = joint_stats(r.id);
        CAPTURE(family_name(r.id));
        check_rel(js.sigma_x_station, r.station, 1e-9);
        check_rel(js.sigma_x_clt, r.clt, 1e-9);
        CHECK(std::abs(js.sigma_x_clt - spectral_constants(r.id).sigma2_sq) <
              1e-6);
    }
    CHECK(joint_stats(FamilyId::wa).wa_closed_dev < 1e-10);
}

TEST_CASE("tabulated rows") {
    auto es = published_constants(FamilyId::es);
    check_rel(es.c2, 0.860010225031, 1e-9);
    check_rel(es.mu3, 0.618862837965, 1e-9);
    check_rel(es.sigma3_sq, 0.363155476745, 1e-9);
    check_rel(es.sigma_q_sq, 0.448567861915, 1e-9);
    check_rel(es.rho_xq, 0.628755494684, 1e-9);
    check_rel(es.mu4, 1.610371840364, 1e-9);
    check_rel(es.sigma4_sq, 1.018908117032, 1e-9);
    CHECK_FALSE(es.gf_supported);

    // everywhere else the tabulated row is the converged one
    auto dcc = published_constants(FamilyId::dcc);
    auto js = joint_stats(FamilyId::dcc);
    check_rel(dcc.rho, spectral_constants(FamilyId::dcc).rho, 1e-12);
    check_rel(dcc.mu4, js.mu4, 1e-12);
    check_rel(dcc.sigma4_sq, js.sigma4_sq, 1e-12);
    check_rel(dcc.c2_total, 0.61803398875, 1e-10);
    CHECK(dcc.gf_supported);
    CHECK(published_constants(FamilyId::cc).gf_supported);
    CHECK(published_constants(FamilyId::st).gf_supported);
    CHECK(published_constants(FamilyId::wa).gf_supported);
    CHECK_FALSE(published_constants(FamilyId::dc).gf_supported);

    // the tabulated scalar convention differs per family
    check_rel(published_constants(FamilyId::dcc).c2, 0.61803398875, 1e-9);
    check_rel(published_constants(FamilyId::cc).c2, 0.399306236118, 1e-9);
    check_rel(published_constants(FamilyId::dc).c2, 0.328340837624, 1e-9);
    check_rel(published_constants(FamilyId::st).c2, 0.306062247706, 1e-9);
    check_rel(published_constants(FamilyId::wa).c2, 1.0, 1e-9);
}
