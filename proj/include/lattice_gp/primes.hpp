#pragma once

#include "integer.hpp"

#include <cstdint>
#include <vector>

namespace lgp {

// Sieve of Eratosthenes: is_prime[k] for 0 <= k <= limit.
inline std::vector<bool> prime_sieve(std::uint64_t limit) {
  std::vector<bool> is_prime(limit + 1, true);
  is_prime[0] = false;
  if (limit >= 1) is_prime[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (is_prime[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) is_prime[j] = false;
  return is_prime;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  const auto sieve = prime_sieve(limit);
  for (std::uint64_t k = 2; k <= limit; ++k)
    if (sieve[k]) out.push_back(k);
  return out;
}

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::uint64_t f = 3; f <= v / f; f += 2)
    if (v % f == 0) return false;
  return true;
}

/// Largest prime p <= n. By Bertrand's postulate p > n/2.
inline std::uint64_t largest_prime_leq(std::uint64_t n) {
  require(n >= 2, "largest_prime_leq: n must be at least 2");
  for (std::uint64_t p = n;; --p)
    if (is_prime(p)) return p;
}

}  // namespace lgp
