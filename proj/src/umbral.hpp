// Copyright 2026 The qdb Authors
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

#pragma once

#include <cstdint>
#include <vector>

namespace qdb::detail {

// Integer expansions of two symbolic contravariants of a quartic written as
// f = (a1 x + a2 y + a3 z)^4. A product of umbral coefficients a^al b^be ...
// becomes A_al A_be ..., where f = sum_al (4! / al!) A_al x^al.
//
// quadratic: (abu)^4, order 4 in u.
// cubic:     (abu)^2 (bcu)^2 (cau)^2, order 6 in u.
struct QuadTerm {
  std::uint8_t out, i, j;
  std::int64_t coef;
};

struct CubicTerm {
  std::uint8_t out, i, j, k;
  std::int64_t coef;
};

const std::vector<QuadTerm>& sigma_terms();
const std::vector<CubicTerm>& psi_terms();

}  // namespace qdb::detail
