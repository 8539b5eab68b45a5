#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "radio.hpp"

using namespace vanetflow;
using namespace vanetflow::radio;

TEST_CASE("friis received power") {
  RadioConfig c;
  CHECK(friis_received_power(100.0, c) ==
        doctest::Approx(oracle::friis(0.1, 1, 1, 0.0508, 1, 100.0)).epsilon(1e-14));
  CHECK(friis_received_power(100.0, c) == doctest::Approx(1.634e-10).epsilon(1e-3));
  const double four_pi = 4.0 * std::numbers::pi;
  CHECK(friis_received_power(1.0, c) ==
        doctest::Approx(0.1 * 0.0508 * 0.0508 / (four_pi * four_pi)).epsilon(1e-14));
  CHECK_THROWS_AS(friis_received_power(0.0, c), DomainError);
  CHECK_THROWS_AS(friis_received_power(-3.0, c), DomainError);

  c.gain_tx = 2.0;
  c.system_loss = 4.0;
  CHECK(friis_received_power(37.0, c) ==
        doctest::Approx(oracle::friis(0.1, 2, 1, 0.0508, 4, 37.0)).epsilon(1e-14));
}

TEST_CASE("range for sensitivity inverts friis") {
  RadioConfig c;
  const double d = range_for_sensitivity(-80.0, c);
  const double pr_dbm = 10.0 * std::log10(friis_received_power(d, c) / 1e-3);
  CHECK(pr_dbm == doctest::Approx(-80.0).epsilon(1e-12));
}

TEST_CASE("range tests are boundary inclusive") {
  CHECK(in_range(99.9, 100.0));
  CHECK(in_range(100.0, 100.0));
  CHECK_FALSE(in_range(250.0, 200.0));

  RadioConfig c;
  std::vector<double> none;
  CHECK_FALSE(medium_busy(500.0, none, c));
  std::vector<double> edge{700.0};
  CHECK(medium_busy(500.0, edge, c));
  std::vector<double> far{701.0, 250.0};
  CHECK_FALSE(medium_busy(500.0, far, c));
}

TEST_CASE("backoff window") {
  RadioConfig c;
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const int b0 = draw_backoff(0, c, rng);
    CHECK((b0 >= 0 && b0 <= 15));
    const int b2 = draw_backoff(2, c, rng);
    CHECK((b2 >= 0 && b2 <= 60));
  }
  c.backoff_max = 0;
  for (int n = 0; n <= 5; ++n) CHECK(draw_backoff(n, c, rng) == 0);
}

TEST_CASE("mac tick") {
  RadioConfig c;
  Rng rng(5);
  MacState s;

  SUBCASE("no pending message is the identity") {
    s.backoff_remaining = 4;
    s.backoff_stage = 2;
    const auto t = mac_tick(s, true, c, rng);
    CHECK_FALSE(t.transmit_now);
    CHECK(t.state.backoff_remaining == 4);
    CHECK(t.state.backoff_stage == 2);
    CHECK_FALSE(t.state.pending_message);
  }
  SUBCASE("expired timer on a free medium transmits") {
    s.pending_message = 1;
    s.backoff_stage = 3;
    const auto t = mac_tick(s, false, c, rng);
    CHECK(t.transmit_now);
    CHECK(t.state.backoff_stage == 0);
  }
  SUBCASE("timer keeps running while busy") {
    s.pending_message = 1;
    s.backoff_remaining = 3;
    std::vector<int> seen;
    MacState cur = s;
    for (int i = 0; i < 3; ++i) {
      const auto t = mac_tick(cur, true, c, rng);
      CHECK_FALSE(t.transmit_now);
      cur = t.state;
      seen.push_back(cur.backoff_remaining);
    }
    CHECK(seen == std::vector<int>{2, 1, 0});
    CHECK(cur.backoff_stage == 0);
  }
  SUBCASE("busy at expiry doubles the window") {
    s.pending_message = 1;
    const auto t = mac_tick(s, true, c, rng);
    CHECK_FALSE(t.transmit_now);
    CHECK(t.state.backoff_stage == 1);
    CHECK(t.state.backoff_remaining <= 30);
    CHECK(t.state.pending_message);
  }
  SUBCASE("stage saturates") {
    s.pending_message = 1;
    s.backoff_stage = c.max_backoff_stage;
    const auto t = mac_tick(s, true, c, rng);
    CHECK(t.state.backoff_stage == c.max_backoff_stage);
  }
}

TEST_CASE("reception roll") {
  RadioConfig c;
  Rng rng(9);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(receive_roll(100.5, c, rng));
  c.reception_prob = 1.0;
  for (int i = 0; i < 100; ++i) CHECK(receive_roll(100.0, c, rng));
  c.reception_prob = 0.8;
  int hits = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) hits += receive_roll(50.0, c, rng);
  CHECK(std::fabs(double(hits) / n - 0.8) < 0.02);
}

TEST_CASE("radio config validation") {
  RadioConfig c;
  CHECK_NOTHROW(c.validate());
  c.interference_range = 50.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RadioConfig{};
  c.reception_prob = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
