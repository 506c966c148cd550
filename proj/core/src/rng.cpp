#include "blindrz/rng.hpp"

#include <stdexcept>

namespace blindrz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ull));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(seed) ^ splitmix64(stream ^ 0x5bd1e995ull)) {}

double Rng::normal() { return normal_(engine_); }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

PadSource::Draw PadSource::draw() {
  const std::size_t id = log_.size();
  KeyBits bits{static_cast<std::uint8_t>(rng_.bit()), static_cast<std::uint8_t>(rng_.bit())};
  if (auto it = pinned_.find(id); it != pinned_.end()) bits = it->second;
  if (!enabled_) bits = {};
  log_.push_back(bits);
  return {id, bits};
}

}  // namespace blindrz
