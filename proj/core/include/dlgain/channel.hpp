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

#include <filesystem>
#include <vector>

#include "dlgain/rng.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/types.hpp"

namespace dlgain {

// Spatial correlation of one (BS, user) channel together with a sampling
// factor A satisfying A A^H = R. A keeps only the numerically nonzero part of
// the spectrum, so it is M x rank.
struct CorrelationMatrix {
  CMatrix R;
  double beta = 0.0;
  CMatrix sqrt_factor;
  RVector eigenvalues;  // ascending, after clipping

  Eigen::Index antennas() const { return R.rows(); }
  Eigen::Index rank() const { return sqrt_factor.cols(); }
};

// Relative eigenvalue floor: eigenvalues below -kPsdTolerance * trace(R) mean
// the matrix is genuinely indefinite; anything above is clipped to zero.
inline constexpr double kPsdTolerance = 1e-9;
// Eigenvalues at or below this fraction of trace(R) are dropped from the
// sampling factor.
inline constexpr double kRankTolerance = 1e-14;

// Approximate Gaussian local scattering model for a half-wavelength ULA:
// [R]_{m,n} = beta e^{j pi (m-n) sin phi} e^{-(asd^2/2) (pi (m-n) cos phi)^2}.
CMatrix local_scattering_matrix(double beta, double phi_rad, double asd_rad, int M);

// Builds R and its sampling factor.
CorrelationMatrix local_scattering(double beta, double phi_rad, double asd_rad, int M);

// Factorizes an arbitrary Hermitian PSD matrix. Throws NumericError with the
// offending eigenvalue when R is indefinite beyond tolerance.
CorrelationMatrix make_correlation(CMatrix R);

// g = A z with z ~ CN(0, I).
CVector sample_channel(const CorrelationMatrix& corr, Rng& rng);
void sample_channel(const CorrelationMatrix& corr, Rng& rng, ComplexNormal& normal,
                    CVector& z_scratch, CVector& out);

// All correlation matrices of one drop, R^l_{u} for every BS l and user u.
class CorrelationBank {
 public:
  CorrelationBank() = default;
  CorrelationBank(const ScenarioConfig& config, const UserDrop& drop);
  // Explicit matrices, indexed [bs * users + user].
  CorrelationBank(int L, int users, std::vector<CorrelationMatrix> matrices);

  const CorrelationMatrix& at(int bs, int user) const {
    return matrices_[static_cast<std::size_t>(bs) * users_ + user];
  }
  int L() const { return L_; }
  int users() const { return users_; }
  int antennas() const { return M_; }

  void write_spectra_csv(const std::filesystem::path& path) const;

 private:
  int L_ = 0;
  int users_ = 0;
  int M_ = 0;
  std::vector<CorrelationMatrix> matrices_;
};

}  // namespace dlgain
