// test_sequence.cpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <map>

#include "doctest.h"
#include "matprod/error.hpp"
#include "matprod/rng.hpp"
#include "matprod/sequence.hpp"

using namespace matprod;

TEST_CASE("word parser") {
  CHECK(parse_word("012") == Word{0, 1, 2});
  CHECK(parse_word("(012)^40").size() == 120);
  CHECK(parse_word("0(1)^3 2") == Word{0, 1, 1, 1, 2});
  CHECK(parse_word("((01)^2 2)^2") == Word{0, 1, 0, 1, 2, 0, 1, 0, 1, 2});
  CHECK(parse_word("") == Word{});
  CHECK(word_to_string(parse_word("(21)^3")) == "212121");
  CHECK_THROWS_AS(parse_word("(01"), Error);
  CHECK_THROWS_AS(parse_word("01)"), Error);
  CHECK_THROWS_AS(parse_word("0a"), Error);
  CHECK_THROWS_AS(parse_word("(0)^"), Error);
  CHECK_THROWS_AS(parse_word("3", 3), Error);
}

TEST_CASE("sequence kinds") {
  auto w = SymbolSequence::word({0, 1, 2}, 3);
  CHECK(w.length() == 3u);
  CHECK(w.at(2) == 2);
  CHECK_THROWS_AS(w.at(3), Error);
  CHECK_THROWS_AS(SymbolSequence::word({3}, 3), Error);

  auto p = SymbolSequence::periodic({1}, {2, 0}, 3);
  CHECK(p.take(6) == Word{1, 2, 0, 2, 0, 2});
  CHECK(!p.length());
  CHECK_THROWS_AS(SymbolSequence::periodic({}, {}, 2), Error);
}

TEST_CASE("seeded random sequences are reproducible and follow the weights") {
  auto a = SymbolSequence::random({0.2, 0.3, 0.5}, 42);
  auto b = SymbolSequence::random({0.2, 0.3, 0.5}, 42);
  auto c = SymbolSequence::random({0.2, 0.3, 0.5}, 43);
  CHECK(a.take(500) == b.take(500));
  CHECK(a.take(500) != c.take(500));
  // Random access agrees with sequential generation.
  CHECK(a.at(1234) == a.take(1235).back());
  std::map<int, int> freq;
  const int n = 60000;
  for (int x : a.take(n)) freq[x]++;
  CHECK(freq[0] / double(n) == doctest::Approx(0.2).epsilon(0.05));
  CHECK(freq[1] / double(n) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(freq[2] / double(n) == doctest::Approx(0.5).epsilon(0.05));
  CHECK_THROWS_AS(SymbolSequence::random({0.0, 0.0}, 1), Error);
  CHECK_THROWS_AS(SymbolSequence::random({-1.0, 2.0}, 1), Error);
}

TEST_CASE("counter generator") {
  CounterRng r(7);
  double sum = 0.0, sq = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
  sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(CounterRng(7, 1).at(5) != CounterRng(7, 2).at(5));
  CHECK(CounterRng(7, 1).at(5) == CounterRng(7, 1).at(5));
}
