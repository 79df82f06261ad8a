/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "pcheck/dataops/types.hpp"

namespace pcheck::ops {

bool same_value(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
}

int compare(std::int64_t x, const Rational& r) {
  const __int128 lhs = static_cast<__int128>(x) * r.den;
  const __int128 rhs = r.num;
  const int sign = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  return r.den < 0 ? -sign : sign;
}

}  // namespace pcheck::ops
