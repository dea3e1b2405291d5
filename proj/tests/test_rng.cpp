// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "uqx/rng.hpp"

using uqx::RngStream;

TEST_CASE("substreams are independent of parent consumption") {
  RngStream a(42);
  RngStream b(42);
  (void)a.next_u64();
  (void)a.next_u64();
  RngStream ca = a.child(7);
  RngStream cb = b.child(7);
  for (int i = 0; i < 16; ++i) CHECK(ca.next_u64() == cb.next_u64());
}

TEST_CASE("child_path equals chained child") {
  RngStream root(9001);
  RngStream p1 = root.child_path({3, 5});
  RngStream p2 = root.child(3).child(5);
  for (int i = 0; i < 8; ++i) CHECK(p1.next_u64() == p2.next_u64());
}

TEST_CASE("distinct paths give distinct streams") {
  RngStream root(1);
  CHECK(root.child(0).next_u64() != root.child(1).next_u64());
  CHECK(root.child_path({0, 1}).next_u64() != root.child_path({1, 0}).next_u64());
}

TEST_CASE("same seed is bit-reproducible") {
  RngStream a(123456789);
  RngStream b(123456789);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("normal moments") {
  RngStream r(7);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gamma mean and variance match shape/rate") {
  RngStream r(11);
  const double shape = 5.5, rate = 2.0;
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.gamma(shape, rate);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(mean == doctest::Approx(shape / rate).epsilon(0.01));
  CHECK(var == doctest::Approx(shape / (rate * rate)).epsilon(0.03));
}

TEST_CASE("gamma with shape below one") {
  RngStream r(13);
  const double shape = 0.5, rate = 1.0;
  const int n = 200000;
  double s1 = 0.0;
  for (int i = 0; i < n; ++i) s1 += r.gamma(shape, rate);
  CHECK(s1 / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform_below covers range without bias") {
  RngStream r(17);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) counts[r.uniform_below(5)]++;
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}
