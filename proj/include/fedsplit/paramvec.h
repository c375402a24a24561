// Copyright 2026 The FedSplit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSPLIT_PARAMVEC_H_
#define FEDSPLIT_PARAMVEC_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace fedsplit {

// Flat parameter/update vector of fixed dimension. Entries are finite after
// every public operation; operations that would produce NaN or Inf throw
// std::domain_error instead.
class ParamVector {
 public:
  // Zero vector of dimension `dim`.
  explicit ParamVector(std::size_t dim);
  explicit ParamVector(std::vector<double> values);
  ParamVector(std::initializer_list<double> values);

  static ParamVector Zeros(std::size_t dim) { return ParamVector(dim); }

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }

  // In-place arithmetic, all routed through the active SIMD kernel table.
  ParamVector& operator+=(const ParamVector& other);
  ParamVector& operator-=(const ParamVector& other);
  ParamVector& operator*=(double a);
  // this += a * x.
  ParamVector& AddScaled(double a, const ParamVector& x);

  bool IsZero() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

ParamVector operator+(ParamVector x, const ParamVector& y);
ParamVector operator-(ParamVector x, const ParamVector& y);
ParamVector operator*(double a, ParamVector x);

// Euclidean norm.
double L2Norm(const ParamVector& x);
double SquaredNorm(const ParamVector& x);
double Dot(const ParamVector& x, const ParamVector& y);
// Returns a * x + y. Throws std::invalid_argument on dimension mismatch.
ParamVector Axpy(double a, const ParamVector& x, const ParamVector& y);

// Throws std::invalid_argument if dims differ.
void CheckSameDim(const ParamVector& x, const ParamVector& y,
                  const char* context);
// Throws std::domain_error if any entry is NaN or Inf.
void CheckFinite(const ParamVector& x, const char* context);

// Deterministic random stream keyed by (global_seed, stream_id, round).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard; everything layered on top (uniforms, normals, shuffles) is
// implemented here rather than with <random> distributions, whose algorithms
// differ between standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t global_seed, std::uint64_t stream_id,
            std::uint64_t round);

  std::uint64_t global_seed() const { return global_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t round() const { return round_; }

  // A child stream with an independent key; `salt` distinguishes siblings.
  RngStream Derive(std::uint64_t salt) const;

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double Normal();
  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t global_seed_;
  std::uint64_t stream_id_;
  std::uint64_t round_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// SplitMix64 finalizer; used to fold seed components into engine seeds.
std::uint64_t MixBits(std::uint64_t x);

// `dim` i.i.d. N(0, sigma^2) draws. sigma == 0 returns the zero vector and
// consumes no randomness. Throws std::invalid_argument for dim == 0 or
// negative sigma.
ParamVector GaussianSample(RngStream& stream, std::size_t dim, double sigma);

}  // namespace fedsplit

#endif  // FEDSPLIT_PARAMVEC_H_
