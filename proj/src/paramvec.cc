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

#include "fedsplit/paramvec.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fedsplit/simd/kernels.h"

namespace fedsplit {

void CheckSameDim(const ParamVector& x, const ParamVector& y,
                  const char* context) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument(std::string(context) + ": dimension mismatch (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  }
}

void CheckFinite(const ParamVector& x, const char* context) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) {
      throw std::domain_error(std::string(context) + ": non-finite entry");
    }
  }
}

ParamVector::ParamVector(std::size_t dim) : values_(dim, 0.0) {}

ParamVector::ParamVector(std::vector<double> values)
    : values_(std::move(values)) {
  CheckFinite(*this, "ParamVector");
}

ParamVector::ParamVector(std::initializer_list<double> values)
    : values_(values) {
  CheckFinite(*this, "ParamVector");
}

ParamVector& ParamVector::operator+=(const ParamVector& other) {
  CheckSameDim(*this, other, "operator+=");
  simd::Active().add(other.data(), data(), dim());
  CheckFinite(*this, "operator+=");
  return *this;
}

ParamVector& ParamVector::operator-=(const ParamVector& other) {
  CheckSameDim(*this, other, "operator-=");
  simd::Active().sub(data(), other.data(), data(), dim());
  CheckFinite(*this, "operator-=");
  return *this;
}

ParamVector& ParamVector::operator*=(double a) {
  simd::Active().scale(a, data(), dim());
  CheckFinite(*this, "operator*=");
  return *this;
}

ParamVector& ParamVector::AddScaled(double a, const ParamVector& x) {
  CheckSameDim(*this, x, "AddScaled");
  simd::Active().axpy(a, x.data(), data(), dim());
  CheckFinite(*this, "AddScaled");
  return *this;
}

bool ParamVector::IsZero() const {
  for (double v : values_) {
    if (v != 0.0) return false;
  }
  return true;
}

ParamVector operator+(ParamVector x, const ParamVector& y) { return x += y; }
ParamVector operator-(ParamVector x, const ParamVector& y) { return x -= y; }
ParamVector operator*(double a, ParamVector x) { return x *= a; }

double SquaredNorm(const ParamVector& x) {
  return simd::Active().sum_squares(x.data(), x.dim());
}

double L2Norm(const ParamVector& x) { return std::sqrt(SquaredNorm(x)); }

double Dot(const ParamVector& x, const ParamVector& y) {
  CheckSameDim(x, y, "Dot");
  return simd::Active().dot(x.data(), y.data(), x.dim());
}

ParamVector Axpy(double a, const ParamVector& x, const ParamVector& y) {
  CheckSameDim(x, y, "Axpy");
  ParamVector out = y;
  out.AddScaled(a, x);
  return out;
}

std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t EngineSeed(std::uint64_t global_seed, std::uint64_t stream_id,
                         std::uint64_t round) {
  std::uint64_t h = MixBits(global_seed);
  h = MixBits(h ^ stream_id);
  h = MixBits(h ^ (round * 0xd1b54a32d192ed03ULL));
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t global_seed, std::uint64_t stream_id,
                     std::uint64_t round)
    : global_seed_(global_seed),
      stream_id_(stream_id),
      round_(round),
      engine_(EngineSeed(global_seed, stream_id, round)) {}

RngStream RngStream::Derive(std::uint64_t salt) const {
  return RngStream(MixBits(global_seed_ ^ MixBits(salt + 0x5bd1e995ULL)),
                   stream_id_, round_);
}

double RngStream::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::UniformInt(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformInt: n must be positive");
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double RngStream::Normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = Uniform();
  while (u1 == 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

ParamVector GaussianSample(RngStream& stream, std::size_t dim, double sigma) {
  if (dim == 0) throw std::invalid_argument("GaussianSample: empty vector");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("GaussianSample: sigma must be finite and >= 0");
  }
  ParamVector out(dim);
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < dim; ++i) out[i] = sigma * stream.Normal();
  return out;
}

}  // namespace fedsplit
