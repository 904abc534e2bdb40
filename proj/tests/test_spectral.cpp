#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polyostat/spectral.hpp"

using namespace polyostat;

namespace {

void check_rel(double got, double want, double tol) {
    CHECK(std::abs(got - want) <=
          tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("dominant singularities at twelve digits") {
    check_rel(spectral_constants(FamilyId::dcc).rho, 0.381966011250, 1e-12);
    check_rel(spectral_constants(FamilyId::cc).rho, 0.311957055279, 1e-11);
    check_rel(spectral_constants(FamilyId::dc).rho, 0.375677448252, 1e-11);
    check_rel(spectral_constants(FamilyId::st).rho, 0.433061923129, 1e-11);
    check_rel(spectral_constants(FamilyId::es).rho, 0.576148769143, 1e-11);
    check_rel(spectral_constants(FamilyId::wa).rho, 0.5, 1e-14);
    // closed forms where they exist
    check_rel(spectral_constants(FamilyId::dcc).rho,
              (3.0 - std::sqrt(5.0)) / 2.0, 1e-14);
}

TEST_CASE("width constants per unit area") {
    auto dcc = spectral_constants(FamilyId::dcc);
    check_rel(dcc.mu1, std::sqrt(5.0) / 5.0, 1e-13);
    check_rel(dcc.sigma1_sq, 2.0 * std::sqrt(5.0) / 25.0, 1e-13);
    check_rel(dcc.mu2, std::sqrt(5.0), 1e-13);
    check_rel(dcc.sigma2_sq, 2.0, 1e-13);

    check_rel(spectral_constants(FamilyId::cc).mu1, 0.453074571638, 1e-11);
    check_rel(spectral_constants(FamilyId::dc).mu1, 0.766060118361, 1e-11);
    check_rel(spectral_constants(FamilyId::st).mu1, 0.420881007814, 1e-11);
    check_rel(spectral_constants(FamilyId::es).mu1, 0.614912631933, 1e-11);
    check_rel(spectral_constants(FamilyId::wa).mu1, 0.5, 1e-14);
    check_rel(spectral_constants(FamilyId::wa).sigma1_sq, 0.25, 1e-13);

    check_rel(spectral_constants(FamilyId::dc).sigma1_sq, 0.1686482431, 1e-9);
    check_rel(spectral_constants(FamilyId::dc).sigma2_sq, 0.375139902850,
              1e-11);
    check_rel(spectral_constants(FamilyId::st).sigma1_sq, 0.2080626954, 1e-9);
    check_rel(spectral_constants(FamilyId::es).sigma1_sq, 0.2290348188, 1e-9);
    check_rel(spectral_constants(FamilyId::es).sigma2_sq, 0.985056784534,
              1e-11);
}

TEST_CASE("derived identities between the width constants") {
    for (auto id : all_families) {
        auto c = spectral_constants(id);
        CHECK(c.mu2 == doctest::Approx(1.0 / c.mu1).epsilon(1e-13));
        CHECK(c.sigma2_sq ==
              doctest::Approx(c.sigma1_sq / (c.mu1 * c.mu1 * c.mu1))
                  .epsilon(1e-12));
        CHECK(c.mu1 > 0);
        CHECK(c.sigma1_sq > 0);
        CHECK(c.rho > 0);
        CHECK(c.rho < 1);
        // the root really is on the curve
        CHECK(c.r1 == doctest::Approx(-c.hw / c.hz).epsilon(1e-12));
    }
}

TEST_CASE("amplitudes and last-column weights") {
    auto c = [](FamilyId id) { return spectral_constants(id); };
    check_rel(c(FamilyId::dcc).c2_total, 0.61803398875, 1e-11);
    check_rel(c(FamilyId::dcc).c2_first, 0.2360679775, 1e-9);
    check_rel(c(FamilyId::dcc).c1, 0.27639320225, 1e-10);
    check_rel(c(FamilyId::cc).c2_total, 0.399306236118, 1e-11);
    check_rel(c(FamilyId::cc).c2_first, 0.218261726426, 1e-11);
    check_rel(c(FamilyId::cc).c1, 0.180915501882, 1e-11);
    check_rel(c(FamilyId::dc).c2_first, 0.328340837624, 1e-11);
    check_rel(c(FamilyId::dc).c2_total, 0.776912850476, 1e-11);
    check_rel(c(FamilyId::dc).c1, 0.595161950192, 1e-11);
    check_rel(c(FamilyId::st).c2_first, 0.306062247706, 1e-11);
    check_rel(c(FamilyId::st).c2_total, 0.706740148139, 1e-11);
    check_rel(c(FamilyId::st).c1, 0.297453505811, 1e-11);
    check_rel(c(FamilyId::es).c2_first, 0.860182589491, 1e-11);
    check_rel(c(FamilyId::es).c2_total, 1.492986942888, 1e-11);
    check_rel(c(FamilyId::es).c1, 0.918056530493, 1e-11);
    check_rel(c(FamilyId::wa).c2_first, 0.5, 1e-13);
    check_rel(c(FamilyId::wa).c2_total, 1.0, 1e-13);
    check_rel(c(FamilyId::wa).c1, 0.5, 1e-13);
}

TEST_CASE("weight vector sums to the aggregate amplitude") {
    for (auto id : all_families) {
        auto w = c2_weights(id);
        double sum = 0;
        for (std::size_t j = 1; j < w.size(); ++j) sum += w[j];
        check_rel(sum, spectral_constants(id).c2_total, 1e-10);
        CHECK(w[1] == doctest::Approx(spectral_constants(id).c2_first)
                          .epsilon(1e-12));
        // the deep tail underflows to noise; only its sign wobbles
        for (std::size_t j = 1; j <= 10; ++j) CHECK(w[j] > 0);
        for (std::size_t j = 11; j < w.size(); ++j) CHECK(w[j] > -1e-25);
    }
}

TEST_CASE("the dominant root is simple and unique in its disk") {
    for (auto id : all_families) {
        auto rc = verify_dominant_root(id);
        CHECK(rc.conclusive);
        CHECK(rc.winding == 1);
        CHECK(rc.radius > spectral_constants(id).rho);
    }
}

TEST_CASE("known generating-function route") {
    auto dcc = gf_perimeter_constants(FamilyId::dcc);
    REQUIRE(dcc.has_value());
    check_rel(dcc->rho, 0.38196601125, 1e-10);
    check_rel(dcc->mu4, 1.73665631460, 1e-9);
    check_rel(dcc->sigma4_sq, 0.60826311235, 1e-8);

    auto cc = gf_perimeter_constants(FamilyId::cc);
    REQUIRE(cc.has_value());
    check_rel(cc->mu4, 1.79528962836, 1e-9);
    check_rel(cc->sigma4_sq, 0.45889883074, 1e-8);

    auto st = gf_perimeter_constants(FamilyId::st);
    REQUIRE(st.has_value());
    check_rel(st->mu4, 1.68352403126, 1e-9);
    check_rel(st->sigma4_sq, 0.71980472935, 1e-8);

    auto wa = gf_perimeter_constants(FamilyId::wa);
    REQUIRE(wa.has_value());
    check_rel(wa->mu4, 5.0 / 3.0, 1e-9);
    check_rel(wa->sigma4_sq, 173.0 / 189.0, 1e-8);

    CHECK(!gf_perimeter_constants(FamilyId::dc).has_value());
    CHECK(!gf_perimeter_constants(FamilyId::es).has_value());
}

TEST_CASE("double profile agrees with the extended pipeline") {
    for (auto id : all_families) {
        const auto& d = spectral_core_d(id);
        const auto& e = spectral_core(id);
        CHECK(d.rho == doctest::Approx(to_double(e.rho)).epsilon(1e-12));
        CHECK(d.mu1 == doctest::Approx(to_double(e.mu1)).epsilon(1e-10));
        CHECK(d.sigma2_sq ==
              doctest::Approx(to_double(e.sigma2_sq)).epsilon(1e-8));
    }
}
