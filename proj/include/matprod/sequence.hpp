// sequence.hpp
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
//
// Symbol sequences over {0..a-1}: explicit words, eventually periodic words
// and seeded i.i.d. draws.

#ifndef MATPROD_SEQUENCE_HPP_
#define MATPROD_SEQUENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace matprod {

using Word = std::vector<int>;

// Digits with repetition groups, e.g. "01(012)^40" or "((01)^2 2)^3".
// Whitespace is ignored. Digits must be < alphabet when alphabet > 0.
Word parse_word(const std::string& text, int alphabet = 0);
std::string word_to_string(const Word& w);

class SymbolSequence {
 public:
  enum class Kind { kWord, kPeriodic, kRandom };

  static SymbolSequence word(Word w, int alphabet);
  static SymbolSequence periodic(Word preperiod, Word period, int alphabet);
  static SymbolSequence random(std::vector<double> weights, std::uint64_t seed);
  static SymbolSequence uniform(int alphabet, std::uint64_t seed);

  Kind kind() const { return kind_; }
  int alphabet() const { return alphabet_; }
  // Finite length for explicit words, nullopt otherwise.
  std::optional<std::size_t> length() const;
  int at(std::size_t n) const;  // 0-based
  Word take(std::size_t n) const;

 private:
  Kind kind_ = Kind::kWord;
  int alphabet_ = 0;
  Word pre_;
  Word period_;
  std::vector<double> cumulative_;
  std::uint64_t seed_ = 0;
};

}  // namespace matprod

#endif  // MATPROD_SEQUENCE_HPP_
