// sequence.cpp
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

#include "matprod/sequence.hpp"

#include <cctype>

#include "matprod/error.hpp"
#include "matprod/rng.hpp"

namespace matprod {

namespace {

[[noreturn]] void bad_word(const std::string& text, const std::string& why) {
  throw Error(ErrorCode::kInvalidArgument,
              "cannot parse word '" + text + "': " + why);
}

constexpr std::size_t kMaxWordLength = 10000000;

struct WordParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  Word sequence() {
    Word out;
    for (;;) {
      skip();
      if (pos >= s.size() || s[pos] == ')') return out;
      Word unit;
      if (s[pos] == '(') {
        ++pos;
        unit = sequence();
        skip();
        if (pos >= s.size() || s[pos] != ')') bad_word(s, "unbalanced '('");
        ++pos;
      } else if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        unit.push_back(s[pos++] - '0');
      } else {
        bad_word(s, std::string("unexpected character '") + s[pos] + "'");
      }
      skip();
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        skip();
        std::size_t count = 0;
        bool digits = false;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          count = count * 10 + (s[pos++] - '0');
          digits = true;
          if (count > kMaxWordLength) bad_word(s, "repetition count too large");
        }
        if (!digits) bad_word(s, "missing repetition count");
        if (unit.size() * count + out.size() > kMaxWordLength)
          bad_word(s, "word too long");
        for (std::size_t r = 0; r < count; ++r)
          out.insert(out.end(), unit.begin(), unit.end());
      } else {
        out.insert(out.end(), unit.begin(), unit.end());
      }
    }
  }
};

}  // namespace

Word parse_word(const std::string& text, int alphabet) {
  WordParser p{text};
  Word w = p.sequence();
  p.skip();
  if (p.pos != text.size()) bad_word(text, "unbalanced ')'");
  if (alphabet > 0)
    for (int x : w)
      if (x >= alphabet)
        bad_word(text, "symbol " + std::to_string(x) + " outside alphabet");
  return w;
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int x : w) {
    if (x >= 0 && x < 10)
      s += static_cast<char>('0' + x);
    else
      s += "[" + std::to_string(x) + "]";
  }
  return s;
}

SymbolSequence SymbolSequence::word(Word w, int alphabet) {
  for (int x : w)
    if (x < 0 || x >= alphabet)
      throw Error(ErrorCode::kInvalidArgument, "symbol outside alphabet");
  SymbolSequence s;
  s.kind_ = Kind::kWord;
  s.alphabet_ = alphabet;
  s.pre_ = std::move(w);
  return s;
}

SymbolSequence SymbolSequence::periodic(Word preperiod, Word period,
                                        int alphabet) {
  if (period.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty period");
  for (const Word* w : {&preperiod, &period})
    for (int x : *w)
      if (x < 0 || x >= alphabet)
        throw Error(ErrorCode::kInvalidArgument, "symbol outside alphabet");
  SymbolSequence s;
  s.kind_ = Kind::kPeriodic;
  s.alphabet_ = alphabet;
  s.pre_ = std::move(preperiod);
  s.period_ = std::move(period);
  return s;
}

SymbolSequence SymbolSequence::random(std::vector<double> weights,
                                      std::uint64_t seed) {
  if (weights.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero weights");
  SymbolSequence s;
  s.kind_ = Kind::kRandom;
  s.alphabet_ = static_cast<int>(weights.size());
  s.seed_ = seed;
  double acc = 0.0;
  for (double w : weights) {
    acc += w / total;
    s.cumulative_.push_back(acc);
  }
  s.cumulative_.back() = 1.0;
  return s;
}

SymbolSequence SymbolSequence::uniform(int alphabet, std::uint64_t seed) {
  return random(std::vector<double>(alphabet, 1.0), seed);
}

std::optional<std::size_t> SymbolSequence::length() const {
  if (kind_ == Kind::kWord) return pre_.size();
  return std::nullopt;
}

int SymbolSequence::at(std::size_t n) const {
  switch (kind_) {
    case Kind::kWord:
      if (n >= pre_.size())
        throw Error(ErrorCode::kInvalidArgument, "word shorter than depth");
      return pre_[n];
    case Kind::kPeriodic:
      if (n < pre_.size()) return pre_[n];
      return period_[(n - pre_.size()) % period_.size()];
    case Kind::kRandom: {
      double u = CounterRng(seed_).uniform_at(n);
      for (std::size_t i = 0; i < cumulative_.size(); ++i)
        if (u < cumulative_[i]) return static_cast<int>(i);
      return static_cast<int>(cumulative_.size()) - 1;
    }
  }
  return 0;
}

Word SymbolSequence::take(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

}  // namespace matprod
