// Copyright 2026 The RICCO Authors
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
/**
 * @file types.hpp
 * Scalar and matrix aliases shared by every module, plus the seedable
 * random stream used by all stochastic operations.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace ricco {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Named parameter values, e.g. {"u0": 0.3, "t1": -1.2}.
using Bindings = std::map<std::string, double>;

/// Largest register for which dense 2^n x 2^n matrices are built.
inline constexpr std::size_t kDenseQubitLimit = 12;

/**
 * @brief Portable seeded random stream.
 *
 * Wraps std::mt19937_64, whose output sequence is fixed by the standard.
 * The standard library distributions are implementation defined, so uniform
 * and normal variates are derived here directly from the raw 64-bit words to
 * keep results bit-identical across toolchains.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();

    std::uint64_t next() { return engine_(); }

    /// Independent child stream, e.g. one per circuit variant.
    Rng split(std::uint64_t stream_id);

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; mixes a seed with a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id);

} // namespace ricco
