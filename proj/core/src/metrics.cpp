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

#include "dlgain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>

namespace dlgain {

double nmse(std::span<const double> estimates, std::span<const Complex> truths) {
  if (estimates.size() != truths.size() || estimates.empty()) {
    throw DomainError("nmse needs equally sized, nonempty inputs");
  }
  NmseAccumulator acc;
  for (std::size_t i = 0; i < estimates.size(); ++i) acc.add(estimates[i], truths[i]);
  return acc.value();
}

double NmseAccumulator::value() const {
  if (!(power_ > 0.0)) throw DomainError("nmse undefined: all truths are zero");
  return error_ / power_;
}

void MomentAccumulator::add(std::span<const Complex> alpha_row, int own, double alpha_bar) {
  if (cross_.size() != alpha_row.size()) cross_.assign(alpha_row.size(), 0.0);
  if (!(alpha_bar != 0.0) || !std::isfinite(alpha_bar)) {
    ++rejected_;
    return;
  }
  const double inv = 1.0 / alpha_bar;
  const Complex x = alpha_row[own] * inv;
  sum_ratio_ += x;
  sum_ratio_power_ += std::norm(x);
  for (std::size_t s = 0; s < alpha_row.size(); ++s) {
    cross_[s] += std::norm(alpha_row[s]) * inv * inv;
  }
  sum_inverse_power_ += inv * inv;
  ++count_;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (cross_.size() < other.cross_.size()) cross_.resize(other.cross_.size(), 0.0);
  for (std::size_t s = 0; s < other.cross_.size(); ++s) cross_[s] += other.cross_[s];
  sum_ratio_ += other.sum_ratio_;
  sum_ratio_power_ += other.sum_ratio_power_;
  sum_inverse_power_ += other.sum_inverse_power_;
  count_ += other.count_;
  rejected_ += other.rejected_;
}

namespace {

double checked_count(std::uint64_t n) {
  if (n == 0) throw NumericError("moment accumulator has no accepted blocks");
  return static_cast<double>(n);
}

}  // namespace

Complex MomentAccumulator::mean_ratio() const { return sum_ratio_ / checked_count(count_); }
double MomentAccumulator::mean_ratio_power() const {
  return sum_ratio_power_ / checked_count(count_);
}
double MomentAccumulator::mean_cross_power(int source) const {
  return cross_[static_cast<std::size_t>(source)] / checked_count(count_);
}
double MomentAccumulator::mean_inverse_power() const {
  return sum_inverse_power_ / checked_count(count_);
}

SinrBreakdown blind_sinr(const MomentAccumulator& acc, int own, std::span<const double> eta,
                         double sigma2_dl) {
  SinrBreakdown b;
  const Complex m = acc.mean_ratio();
  const double second = acc.mean_ratio_power();
  b.signal = std::norm(m);
  b.variance = second - b.signal;
  if (b.variance < 0.0) {
    if (b.variance < -kVarianceClampTolerance * second) {
      throw NumericError("negative variance beyond tolerance in SE moments");
    }
    b.variance = 0.0;
    b.variance_clamped = true;
  }
  const double eta_own = eta[static_cast<std::size_t>(own)];
  for (std::size_t s = 0; s < eta.size(); ++s) {
    if (static_cast<int>(s) == own) continue;
    b.interference += eta[s] / eta_own * acc.mean_cross_power(static_cast<int>(s));
  }
  b.noise = sigma2_dl / eta_own * acc.mean_inverse_power();
  return b;
}

double prelog(int tau_p, int tau_c) {
  return 1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c);
}

double spectral_efficiency(double sinr, int tau_p, int tau_c) {
  return prelog(tau_p, tau_c) * std::log2(1.0 + sinr);
}

double perfect_csi_sinr(std::span<const Complex> alpha_row, int own,
                        std::span<const double> eta, double sigma2_dl) {
  double interference = sigma2_dl;
  for (std::size_t s = 0; s < alpha_row.size(); ++s) {
    if (static_cast<int>(s) == own) continue;
    interference += eta[s] * std::norm(alpha_row[s]);
  }
  return eta[static_cast<std::size_t>(own)] * std::norm(alpha_row[own]) / interference;
}

double PerfectCsiAccumulator::spectral_efficiency(int tau_p, int tau_c) const {
  if (count_ == 0) throw NumericError("perfect-CSI accumulator is empty");
  return prelog(tau_p, tau_c) * sum_ / static_cast<double>(count_);
}

std::vector<CdfPoint> cdf(std::vector<double> values) {
  if (values.empty()) throw DomainError("cdf of an empty list");
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> out(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = {values[i], static_cast<double>(i + 1) / n};
  }
  return out;
}

void write_cdf_csv(const std::filesystem::path& path, std::span<const CdfPoint> table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "value,probability\n" << std::setprecision(17);
  for (const auto& p : table) out << p.value << ',' << p.probability << '\n';
}

std::vector<double> grouped_nmse(std::span<const double> estimates,
                                 std::span<const double> truths,
                                 std::span<const std::uint64_t> groups) {
  if (estimates.size() != truths.size() || estimates.size() != groups.size()) {
    throw DomainError("grouped_nmse needs equally sized inputs");
  }
  std::map<std::uint64_t, NmseAccumulator> acc;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    acc[groups[i]].add(estimates[i], Complex(truths[i], 0.0));
  }
  std::vector<double> out;
  out.reserve(acc.size());
  for (const auto& [group, a] : acc) out.push_back(a.value());
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean of an empty list");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace dlgain
