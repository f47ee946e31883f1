#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace hetero {

// Replicate streams are keyed by (experiment seed, replicate index) so the
// result of replicate r never depends on which thread ran it.
using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);
Engine make_engine(std::uint64_t stream_seed);

double standard_normal(Engine& eng);
double uniform01(Engine& eng);
int rademacher(Engine& eng);

// Runs fn(i) for i in [0, count) on up to `threads` workers. fn must only
// write to slots owned by i.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace hetero
