#include "numcore/rng.hpp"

#include <cmath>

namespace lesam::numcore {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a + kGamma) ^ (b + 0x632BE59BD9B4E019ull));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGamma;
  return splitmix64(state_);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double CounterRng::next_gauss() {
  if (has_cached_gauss_) {
    has_cached_gauss_ = false;
    return cached_gauss_;
  }
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_gauss_ = r * std::sin(theta);
  has_cached_gauss_ = true;
  return r * std::cos(theta);
}

int CounterRng::next_below(int bound) {
  if (bound <= 1) return 0;
  std::uint64_t b = static_cast<std::uint64_t>(bound);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % b);
}

double CounterRng::next_rademacher() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

Vec CounterRng::gauss_vec(int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = next_gauss();
  return v;
}

Vec CounterRng::rademacher_vec(int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = next_rademacher();
  return v;
}

void CounterRng::shuffle(std::vector<int>& idx) {
  for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
    int j = next_below(i + 1);
    std::swap(idx[i], idx[j]);
  }
}

}  // namespace lesam::numcore
