#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mqphi/marcum.hpp"

using namespace mqphi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("positive order anchors") {
    CHECK_THAT(marcum_q(1, 1.0, 1.0), WithinRel(0.73287980379682021825, 5e-14));
    CHECK_THAT(marcum_q(2, 2.0, 3.0), WithinRel(0.35269789604963452218, 5e-14));
    CHECK_THAT(marcum_q(3, 2.0, 1.0), WithinRel(0.99752949147674197007, 5e-14));
    CHECK_THAT(marcum_q(5, 0.5, 0.1), WithinRel(0.99999999999997711148, 5e-14));
    CHECK_THAT(marcum_q(6, 10.0, 10.0), WithinRel(0.70913228664465982789, 5e-14));
    CHECK_THAT(marcum_q(2, 0.1, 0.1), WithinRel(0.99998760362197202511, 5e-14));
    CHECK_THAT(marcum_q(4, 3.0, 0.31622776601683794),
               WithinRel(0.999999997093136533, 5e-14));
}

TEST_CASE("positive order deep tails keep relative accuracy") {
    CHECK_THAT(marcum_q(1, 0.1, 10.0), WithinRel(2.4406174538283000938e-22, 5e-13));
    CHECK_THAT(marcum_q(1, 3.1622776601683794, 10.0),
               WithinRel(7.232747682943090821e-12, 5e-13));
}

TEST_CASE("large noncentrality goes through the mode-start sweep") {
    CHECK_THAT(marcum_q(1, 40.0, 40.0), WithinRel(0.50498716823414383135, 5e-13));
    CHECK_THAT(marcum_q(2, 40.0, 41.0), WithinRel(0.16778446310547596856, 5e-13));
}

TEST_CASE("nonpositive order anchors") {
    CHECK_THAT(marcum_q(0, 1.0, 2.0), WithinRel(0.081892303630593996089, 5e-14));
    CHECK_THAT(marcum_q(0, 3.0, 0.5), WithinRel(0.98215632661351778808, 5e-14));
    CHECK_THAT(marcum_q(-1, 2.0, 0.5), WithinRel(0.56086484415940419002, 5e-14));
    CHECK_THAT(marcum_q(-2, 0.5, 3.0), WithinRel(3.7803996419669189978e-6, 5e-13));
    CHECK_THAT(marcum_q(-3, 0.1, 0.1), WithinRel(2.5808480822962876521e-11, 5e-13));
    CHECK_THAT(marcum_q(-5, 0.3, 8.0), WithinRel(1.7215959382785188556e-25, 5e-13));
}

TEST_CASE("zero threshold and domain limits") {
    CHECK(marcum_q(1, 2.0, 0.0) == 1.0);
    CHECK(marcum_q(7, 0.3, 0.0) == 1.0);
    CHECK_THROWS_AS(marcum_q(0, 1.0, 0.0), domain_error);
    CHECK_THROWS_AS(marcum_q(-2, 1.0, 0.0), domain_error);
    CHECK_THROWS_AS(marcum_q(1, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(marcum_q(1, -1.0, 1.0), domain_error);
    CHECK_THROWS_AS(marcum_q(1, 1.0, -1.0), domain_error);
}

TEST_CASE("order reflection residual stays at working precision") {
    const int orders[] = {-3, -1, 0, 1, 2, 4, 6};
    const double as[] = {0.2, 1.0, 2.5, 6.0};
    const double bs[] = {0.3, 1.0, 3.0, 8.0};
    for (int m : orders) {
        for (double a : as) {
            for (double b : bs) {
                double lhs = marcum_q(m, a, b);
                double rhs = 1.0 - marcum_q(1 - m, b, a);
                CHECK_THAT(lhs, WithinAbs(rhs, 1e-13));
            }
        }
    }
}

TEST_CASE("tail is monotone in threshold and order") {
    double prev = 1.0;
    for (double b : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        double q = marcum_q(2, 1.5, b);
        CHECK(q <= prev + 1e-15);
        prev = q;
    }
    for (int m = -2; m < 5; ++m)
        CHECK(marcum_q(m, 1.5, 2.0) <= marcum_q(m + 1, 1.5, 2.0) + 1e-15);
}

TEST_CASE("complement form agrees with the direct mixture") {
    const int orders[] = {-3, -1, 0, 1, 3, 6};
    const double as[] = {0.3, 1.0, 3.0};
    const double bs[] = {0.2, 1.1, 2.7};
    for (int m : orders) {
        for (double a : as) {
            for (double b : bs) {
                double direct = marcum_q(m, a, b);
                double viaphi = marcum_q_via_phi3(m, a, b);
                double scale = std::max(std::fabs(direct), std::fabs(viaphi));
                CHECK(std::fabs(direct - viaphi) <=
                      std::max(1e-11 * scale, 1e-13));
            }
        }
    }
    CHECK(marcum_q_via_phi3(3, 1.0, 0.0) == 1.0);
    CHECK_THROWS_AS(marcum_q_via_phi3(0, 1.0, 0.0), domain_error);
}
