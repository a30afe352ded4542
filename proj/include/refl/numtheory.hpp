#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace refl {

using i64 = long;

i64 euler_phi(i64 n);
std::vector<i64> divisors(i64 n);          // ascending
i64 lcm_i64(i64 a, i64 b);
i64 gcd_i64(i64 a, i64 b);
i64 mod_pos(i64 a, i64 m);                 // representative in [0, m)

}  // namespace refl
