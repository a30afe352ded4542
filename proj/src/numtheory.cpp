#include "refl/numtheory.hpp"

#include <stdexcept>

namespace refl {

i64 gcd_i64(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm_i64(i64 a, i64 b) {
  if (a == 0 || b == 0) throw std::invalid_argument("lcm of zero");
  return a / std::gcd(a, b) * b;
}

i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 euler_phi(i64 n) {
  i64 result = n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> small, large;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

}  // namespace refl
