#include "folia/sampling.hpp"

namespace folia {

namespace {
constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                     23, 29, 31, 37, 41, 43, 47, 53};
}

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

Vec halton_point(std::uint64_t i, int d) {
  if (d < 1 || d > 16) throw input_error("halton_point: dimension out of range");
  Vec p(d);
  for (int k = 0; k < d; ++k) p[k] = radical_inverse(i, kPrimes[k]);
  return p;
}

Vec halton_direction(std::uint64_t i, int d) {
  for (;; ++i) {
    Vec u = 2.0 * halton_point(i, d) - Vec::Ones(d);
    double n = u.norm();
    if (n > 1e-3) return u / n;
  }
}

std::vector<Vec> halton_directions(int n, int d, std::uint64_t seed) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out.push_back(halton_direction(seed + 1 + static_cast<std::uint64_t>(k), d));
  return out;
}

}  // namespace folia
