// Copyright 2026 The dlgain Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dlgain/types.hpp"

namespace dlgain {

// Sum |estimate - truth|^2 / sum |truth|^2 with real estimates and complex
// truths. Throws DomainError when the truths are all zero or lengths differ.
double nmse(std::span<const double> estimates, std::span<const Complex> truths);

// Streaming form of nmse for one user.
class NmseAccumulator {
 public:
  void add(double estimate, Complex truth) {
    error_ += std::norm(Complex(estimate, 0.0) - truth);
    power_ += std::norm(truth);
    ++count_;
  }
  void merge(const NmseAccumulator& other) {
    error_ += other.error_;
    power_ += other.power_;
    count_ += other.count_;
  }
  std::uint64_t count() const { return count_; }
  double value() const;

 private:
  double error_ = 0.0;
  double power_ = 0.0;
  std::uint64_t count_ = 0;
};

// Running moments of the equalized gains of one user for the blind SE bound.
// With x = alpha_own / alpha_bar it tracks E{x}, E{|x|^2}, per-source
// E{|alpha_src / alpha_bar|^2} and E{1 / alpha_bar^2}.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;
  explicit MomentAccumulator(int sources) : cross_(static_cast<std::size_t>(sources), 0.0) {}

  // alpha_row holds alpha_obs^src for every source; own indexes the user.
  // Blocks with a zero estimate are rejected and counted.
  void add(std::span<const Complex> alpha_row, int own, double alpha_bar);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const { return count_; }
  std::uint64_t rejected() const { return rejected_; }
  Complex mean_ratio() const;
  double mean_ratio_power() const;
  double mean_cross_power(int source) const;
  double mean_inverse_power() const;
  const std::vector<double>& cross_sums() const { return cross_; }

 private:
  Complex sum_ratio_{0.0, 0.0};
  double sum_ratio_power_ = 0.0;
  std::vector<double> cross_;
  double sum_inverse_power_ = 0.0;
  std::uint64_t count_ = 0;
  std::uint64_t rejected_ = 0;
};

struct SinrBreakdown {
  double signal = 0.0;
  double variance = 0.0;
  double interference = 0.0;
  double noise = 0.0;
  bool variance_clamped = false;

  double sinr() const { return signal / (variance + interference + noise); }
};

// Tolerance below which a negative sample variance is clamped to zero,
// relative to E{|x|^2}.
inline constexpr double kVarianceClampTolerance = 1e-12;

// eta holds the DL power fraction of every source user.
SinrBreakdown blind_sinr(const MomentAccumulator& acc, int own, std::span<const double> eta,
                         double sigma2_dl);

double prelog(int tau_p, int tau_c);

// (1 - tau_p/tau_c) log2(1 + SINR).
double spectral_efficiency(double sinr, int tau_p, int tau_c);

// Instantaneous perfect-CSI SINR for one observer.
double perfect_csi_sinr(std::span<const Complex> alpha_row, int own,
                        std::span<const double> eta, double sigma2_dl);

// Averages log2(1 + SINR) over blocks for the perfect-CSI bound.
class PerfectCsiAccumulator {
 public:
  void add(double sinr) {
    sum_ += std::log2(1.0 + sinr);
    ++count_;
  }
  void merge(const PerfectCsiAccumulator& other) {
    sum_ += other.sum_;
    count_ += other.count_;
  }
  std::uint64_t count() const { return count_; }
  double spectral_efficiency(int tau_p, int tau_c) const;

 private:
  double sum_ = 0.0;
  std::uint64_t count_ = 0;
};

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

// Sorted values with probabilities i/N, i = 1..N.
std::vector<CdfPoint> cdf(std::vector<double> values);
void write_cdf_csv(const std::filesystem::path& path, std::span<const CdfPoint> table);

// NMSE per group (e.g. per drop) for paired estimate/truth rows.
std::vector<double> grouped_nmse(std::span<const double> estimates,
                                 std::span<const double> truths,
                                 std::span<const std::uint64_t> groups);

double mean(std::span<const double> values);
double median(std::vector<double> values);

}  // namespace dlgain
