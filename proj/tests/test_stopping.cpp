#include <doctest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alstop/rng.hpp"
#include "alstop/stopping.hpp"

using namespace alstop;

TEST_CASE("agreement window evicts oldest values") {
  AgreementWindow w(3);
  CHECK_THROWS(w.mean());
  w.push(1.0);
  CHECK(!w.full());
  CHECK(w.mean() == doctest::Approx(1.0));
  w.push(2.0);
  w.push(3.0);
  CHECK(w.full());
  CHECK(w.mean() == doctest::Approx(2.0));
  w.push(4.0);  // evicts the 1.0
  CHECK(w.size() == 3);
  CHECK(w.mean() == doctest::Approx(3.0));
}

TEST_CASE("sp rule needs a full window above the cutoff") {
  SPConfig cfg;  // cutoff 0.99, window 3
  AgreementWindow w(cfg.longevity_window);

  w.push(0.992);
  w.push(0.998);
  auto d = sp_decide(w, cfg, 2);
  CHECK(!d.stop);  // mean over two is high but the window is not full

  w.push(0.991);
  d = sp_decide(w, cfg, 3);
  CHECK(d.stop);
  CHECK(d.criterion == "sp");
  CHECK(d.iteration == 3);
  CHECK(d.has_diagnostic);
  CHECK(d.diagnostic == doctest::Approx((0.992 + 0.998 + 0.991) / 3.0));

  AgreementWindow low(3);
  low.push(0.98);
  low.push(0.995);
  low.push(0.994);  // mean 0.98966... just below
  CHECK(!sp_decide(low, cfg, 3).stop);
}

TEST_CASE("sp replay finds the first qualifying window") {
  SPConfig cfg;
  const std::vector<double> kappas = {0.5, 0.992, 0.998, 0.991, 0.2};
  // Windows: iter3 {0.5,0.992,0.998} mean 0.83; iter4 {0.992,0.998,0.991}.
  const auto stop = sp_first_stop(kappas, cfg);
  REQUIRE(stop.has_value());
  CHECK(*stop == 4);
  CHECK(!sp_first_stop(std::vector<double>{0.9, 0.9}, cfg).has_value());
  const std::vector<double> never = {0.98, 0.98, 0.98, 0.98};
  CHECK(!sp_first_stop(never, cfg).has_value());
}

TEST_CASE("a stricter cutoff never stops earlier") {
  Rng rng(555);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> kappas;
    const int len = 5 + static_cast<int>(rng.below(30));
    double level = 0.5 + 0.5 * rng.unit();
    for (int i = 0; i < len; ++i) {
      level = std::min(1.0, level + 0.05 * rng.unit() - 0.01 * rng.unit());
      kappas.push_back(level);
    }
    SPConfig lo, hi;
    lo.intensity_cutoff = 0.97;
    hi.intensity_cutoff = 0.99;
    const auto s_lo = sp_first_stop(kappas, lo);
    const auto s_hi = sp_first_stop(kappas, hi);
    if (s_hi.has_value()) {
      REQUIRE(s_lo.has_value());
      REQUIRE(*s_lo <= *s_hi);
    }
  }
}

TEST_CASE("a longer window never stops earlier") {
  Rng rng(556);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> kappas;
    const int len = 5 + static_cast<int>(rng.below(30));
    for (int i = 0; i < len; ++i) kappas.push_back(0.9 + 0.1 * rng.unit());
    SPConfig small, big;
    small.longevity_window = 2;
    big.longevity_window = 4;
    const auto s_small = sp_first_stop(kappas, small);
    const auto s_big = sp_first_stop(kappas, big);
    if (s_big.has_value() && s_small.has_value()) REQUIRE(*s_small <= *s_big);
  }
}

TEST_CASE("margin exhaustion counts strictly-inside points") {
  SUBCASE("remaining points outside the margin stop the run") {
    const auto d = sc2000_decide_counts(true, 0, 5, 7);
    CHECK(d.stop);
    CHECK(d.criterion == "sc2000");
    CHECK(d.reason.find("margin") != std::string::npos);
  }
  SUBCASE("any point inside the margin keeps going") {
    CHECK(!sc2000_decide_counts(true, 1, 5, 7).stop);
    CHECK(!sc2000_decide_counts(true, 5, 5, 7).stop);
  }
  SUBCASE("an empty pool stops vacuously") {
    const auto d = sc2000_decide_counts(true, 0, 0, 7);
    CHECK(d.stop);
  }
  SUBCASE("not applicable without a geometric margin") {
    const auto d = sc2000_decide_counts(false, 0, 5, 7);
    CHECK(!d.stop);
    CHECK(d.reason == "not-applicable");
  }
}

TEST_CASE("margin exhaustion against a concrete model") {
  TrainedModel model;
  model.kind = LearnerKind::svm;
  model.weights = {2.0};
  Dataset data;
  data.dim = 1;
  for (int i = 0; i < 3; ++i) {
    SparseExample ex;
    ex.id = i;
    ex.features = {{0, 0.3 + 0.4 * i}};  // scores 0.6, 1.4, 2.2
    data.examples.push_back(ex);
  }
  const std::vector<int> all = {0, 1, 2};
  CHECK(!sc2000_decide(model, data, all, 1).stop);
  const std::vector<int> outside_only = {1, 2};
  CHECK(sc2000_decide(model, data, outside_only, 1).stop);
}

TEST_CASE("accuracy-plus-stability raises its threshold instead of stopping") {
  ZwhState state;
  // Accuracy met, but predictions still churn: threshold ratchets up.
  auto d = zwh2008_decide(state, 0.95, 3, 1);
  CHECK(!d.stop);
  CHECK(state.threshold == doctest::Approx(0.91));
  CHECK(d.has_diagnostic);
  CHECK(d.diagnostic == doctest::Approx(0.91));

  // Accuracy now below the raised threshold: nothing changes.
  d = zwh2008_decide(state, 0.905, 0, 2);
  CHECK(!d.stop);
  CHECK(state.threshold == doctest::Approx(0.91));

  // Accuracy met and the pool is stable: stop.
  d = zwh2008_decide(state, 0.95, 0, 3);
  CHECK(d.stop);
  CHECK(d.criterion == "zwh2008");
  CHECK(state.threshold == doctest::Approx(0.91));
}

TEST_CASE("the stability threshold caps at one") {
  ZwhState state;
  state.threshold = 0.995;
  const auto d = zwh2008_decide(state, 1.0, 2, 1);
  CHECK(!d.stop);
  CHECK(state.threshold == doctest::Approx(1.0));
  zwh2008_decide(state, 1.0, 2, 2);
  CHECK(state.threshold == doctest::Approx(1.0));
}

TEST_CASE("thresholds never decrease over random feeds") {
  Rng rng(77);
  ZwhState state;
  double last = state.threshold;
  for (int i = 0; i < 500; ++i) {
    zwh2008_decide(state, rng.unit(), static_cast<int>(rng.below(4)), i);
    REQUIRE(state.threshold >= last);
    REQUIRE(state.threshold <= 1.0);
    last = state.threshold;
  }
}

TEST_CASE("accuracy-only variant stops at its fixed threshold") {
  CHECK(minerr_decide(0.9, 0.9, 1).stop);
  CHECK(minerr_decide(0.95, 0.9, 1).stop);
  CHECK(!minerr_decide(0.89, 0.9, 1).stop);
  CHECK(minerr_decide(0.3, 0.9, 1).criterion == "minerr");
}

TEST_CASE("accuracy-only never fires after the conjunctive variant") {
  // Any iteration where the conjunctive rule stops has accuracy >= its
  // current threshold >= the shared initial threshold, so the accuracy-only
  // rule stops there too if it has not already.
  Rng rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    ZwhState state;
    std::optional<int> zwh_stop, minerr_stop;
    for (int it = 1; it <= 40; ++it) {
      const double acc = rng.unit();
      const int changes = static_cast<int>(rng.below(3));
      if (!zwh_stop && zwh2008_decide(state, acc, changes, it).stop) zwh_stop = it;
      if (!minerr_stop && minerr_decide(acc, 0.9, it).stop) minerr_stop = it;
    }
    if (zwh_stop) {
      REQUIRE(minerr_stop.has_value());
      REQUIRE(*minerr_stop <= *zwh_stop);
    }
  }
}

TEST_CASE("least-squares slope on simple sequences") {
  CHECK(least_squares_slope(std::vector<double>{0.0, 1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(least_squares_slope(std::vector<double>{5.0, 5.0, 5.0}) == doctest::Approx(0.0));
  CHECK(least_squares_slope(std::vector<double>{3.0, 2.0, 1.0}) == doctest::Approx(-1.0));
  // y = 2x + noise-free offset.
  CHECK(least_squares_slope(std::vector<double>{1.0, 3.0, 5.0, 7.0}) == doctest::Approx(2.0));
}

TEST_CASE("confidence-gradient waits for a full window then tests the slope") {
  const int window = 100;
  const double threshold = 0.00005;

  std::vector<double> flat(100, 0.8);
  auto d = ls2008_decide(flat, window, threshold, 9);
  CHECK(d.stop);
  CHECK(d.criterion == "ls2008");
  CHECK(d.has_diagnostic);
  CHECK(d.diagnostic == doctest::Approx(0.0));

  std::vector<double> short_history(99, 0.8);
  CHECK(!ls2008_decide(short_history, window, threshold, 9).stop);

  std::vector<double> rising(100);
  for (int i = 0; i < 100; ++i) rising[static_cast<std::size_t>(i)] = 0.5 + 1e-4 * i;
  CHECK(!ls2008_decide(rising, window, threshold, 9).stop);

  std::vector<double> barely(100);
  for (int i = 0; i < 100; ++i) barely[static_cast<std::size_t>(i)] = 0.5 + 1e-6 * i;
  CHECK(ls2008_decide(barely, window, threshold, 9).stop);

  // Only the last `window` entries matter: a steep old prefix is ignored.
  std::vector<double> mixed(50, 0.0);
  for (int i = 0; i < 100; ++i) mixed.push_back(0.9);
  CHECK(ls2008_decide(mixed, window, threshold, 9).stop);

  std::vector<double> falling(100);
  for (int i = 0; i < 100; ++i) falling[static_cast<std::size_t>(i)] = 0.9 - 1e-3 * i;
  CHECK(ls2008_decide(falling, window, threshold, 9).stop);
}

TEST_CASE("overall-confidence drop needs three strict consecutive falls") {
  auto decide = [](std::vector<double> h) { return v2008_decide(h, 5); };
  CHECK(decide({0.9, 0.8, 0.7, 0.6}).stop);
  CHECK(decide({0.5, 0.9, 0.8, 0.7, 0.6}).stop);     // drops at the tail
  CHECK(!decide({0.9, 0.8, 0.7}).stop);              // too short
  CHECK(!decide({0.9, 0.8, 0.8, 0.7}).stop);         // plateau breaks the run
  CHECK(!decide({0.9, 0.8, 0.7, 0.75}).stop);        // recovery breaks the run
  CHECK(!decide({0.6, 0.7, 0.8, 0.9}).stop);
  CHECK(decide({0.9, 0.8, 0.7, 0.6}).criterion == "v2008");
}

TEST_CASE("criterion names index consistently") {
  REQUIRE(kCriterionCount == 6);
  for (int i = 0; i < kCriterionCount; ++i)
    CHECK(criterion_index(kCriterionNames[i]) == i);
  CHECK_THROWS(criterion_index("nope"));
}
