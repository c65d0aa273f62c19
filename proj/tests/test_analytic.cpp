#include <doctest.h>

#include "tschsim/analytic.hpp"

using namespace tschsim;

namespace {

std::string s3(const Ratio& us) {
    return Ratio{us.num, us.den * kUsPerSecond}.fixed(3);
}

Baselines paper_baselines() {
    // TSCH tau1 row and PRIL-M "All" power column of the reference tables
    Baselines b;
    b.tsch_mean_us = Ratio{1'731'000, 1};
    b.tsch_max_us = Ratio{17'960'000, 1};
    b.pril_m_p_uw = Ratio{686, 10};
    b.pril_m_p_listen_uw = Ratio{4, 10};
    return b;
}

} // namespace

TEST_CASE("PRIL-M latency deltas are T_min/2 and T_min") {
    auto d = pril_m_deltas(seconds_us(60));
    CHECK(s3(d.mean_us) == "30.000");
    CHECK(s3(d.max_us) == "60.000");

    d = pril_m_deltas(0);
    CHECK(s3(d.mean_us) == "0.000");
    CHECK(s3(d.max_us) == "0.000");

    d = pril_m_deltas(seconds_us(600));
    CHECK(s3(d.mean_us) == "300.000");
    CHECK(s3(d.max_us) == "600.000");
}

TEST_CASE("PRIL-ML latency deltas use the slot-granular T_act") {
    auto d = pril_ml_deltas(seconds_us(60), 4, 20'000);
    CHECK(s3(d.mean_us) == "7.500");
    CHECK(s3(d.max_us) == "15.000");

    d = pril_ml_deltas(seconds_us(60), 1, 20'000);
    CHECK(s3(d.mean_us) == "30.000");
    CHECK(s3(d.max_us) == "60.000");

    d = pril_ml_deltas(seconds_us(600), 10, 20'000);
    CHECK(s3(d.mean_us) == "30.000");
    CHECK(s3(d.max_us) == "60.000");
}

TEST_CASE("delta P evaluates exactly") {
    CHECK(delta_p_uw(4, 303'300, seconds_us(60)).fixed(1) == "15.2");
    CHECK(delta_p_uw(1, 303'300, seconds_us(60)).fixed(1) == "0.0");
    CHECK(delta_p_uw(2, 303'300, seconds_us(600)).fixed(1) == "0.5");
}

TEST_CASE("deltas are monotone in r and consistent at r = 1") {
    double prev_mu = 1e18;
    double prev_dp = -1.0;
    for (int r = 1; r <= 16; ++r) {
        const auto d = pril_ml_deltas(seconds_us(60), r, 20'000);
        CHECK(d.mean_us.to_double() <= prev_mu);
        prev_mu = d.mean_us.to_double();
        const auto dp = delta_p_uw(r, 303'300, seconds_us(60));
        CHECK(dp.to_double() >= prev_dp);
        prev_dp = dp.to_double();
    }
    const auto ml1 = pril_ml_deltas(seconds_us(60), 1, 20'000);
    const auto m = pril_m_deltas(seconds_us(60));
    CHECK(ml1.mean_us.to_double() == m.mean_us.to_double());
    CHECK(ml1.max_us.to_double() == m.max_us.to_double());
}

TEST_CASE("composition reproduces the worked estimates exactly") {
    const auto p = compose_predictions(paper_baselines(), seconds_us(60), 4, 20'000, 303'300);
    CHECK(s3(p.mu_hat_m_us) == "31.731");
    CHECK(s3(p.dmax_hat_m_us) == "77.960");
    CHECK(s3(p.mu_hat_ml_us) == "9.231");
    CHECK(s3(p.dmax_hat_ml_us) == "32.960");
    CHECK(p.delta_p.fixed(1) == "15.2");
    CHECK(p.p_hat_uw.fixed(1) == "83.8");
    CHECK(p.p_listen_hat_uw.fixed(1) == "15.6");
}

TEST_CASE("parse_decimal handles plain decimals only") {
    Ratio r;
    REQUIRE(parse_decimal("17.96", r));
    CHECK(r.num == 1796);
    CHECK(r.den == 100);
    REQUIRE(parse_decimal("-1.5", r));
    CHECK(r.num == -15);
    REQUIRE(parse_decimal("60", r));
    CHECK(r.num == 60);
    CHECK(r.den == 1);
    CHECK(!parse_decimal("", r));
    CHECK(!parse_decimal("1e5", r));
    CHECK(!parse_decimal("1.2.3", r));
    CHECK(!parse_decimal("abc", r));
}
