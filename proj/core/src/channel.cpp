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

#include "dlgain/channel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace dlgain {

CMatrix local_scattering_matrix(double beta, double phi_rad, double asd_rad, int M) {
  // Toeplitz: the first column determines the matrix.
  CVector first(M);
  const double s = std::sin(phi_rad);
  const double c = std::cos(phi_rad);
  for (int d = 0; d < M; ++d) {
    const double phase = std::numbers::pi * d * s;
    const double spread = std::numbers::pi * d * c;
    const double damping = std::exp(-0.5 * asd_rad * asd_rad * spread * spread);
    first[d] = beta * damping * Complex(std::cos(phase), std::sin(phase));
  }
  CMatrix R(M, M);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < M; ++n) {
      R(m, n) = m >= n ? first[m - n] : std::conj(first[n - m]);
    }
  }
  return R;
}

CorrelationMatrix make_correlation(CMatrix R) {
  CorrelationMatrix out;
  const Eigen::Index M = R.rows();
  const double trace = R.trace().real();
  out.beta = M > 0 ? trace / static_cast<double>(M) : 0.0;

  if (M == 0 || trace == 0.0) {
    out.eigenvalues = RVector::Zero(M);
    out.sqrt_factor = CMatrix(M, 0);
    out.R = std::move(R);
    return out;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(R);
  if (eig.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of correlation matrix failed");
  }
  RVector lambda = eig.eigenvalues();
  if (lambda[0] < -kPsdTolerance * trace) {
    std::ostringstream msg;
    msg << "correlation matrix is indefinite: min eigenvalue " << lambda[0]
        << " vs trace " << trace;
    throw NumericError(msg.str());
  }
  lambda = lambda.cwiseMax(0.0);

  Eigen::Index first_kept = 0;
  while (first_kept < M && lambda[first_kept] <= kRankTolerance * trace) ++first_kept;
  const Eigen::Index rank = M - first_kept;
  out.sqrt_factor = eig.eigenvectors().rightCols(rank) *
                    lambda.tail(rank).cwiseSqrt().asDiagonal();
  out.eigenvalues = std::move(lambda);
  out.R = std::move(R);
  return out;
}

CorrelationMatrix local_scattering(double beta, double phi_rad, double asd_rad, int M) {
  return make_correlation(local_scattering_matrix(beta, phi_rad, asd_rad, M));
}

void sample_channel(const CorrelationMatrix& corr, Rng& rng, ComplexNormal& normal,
                    CVector& z_scratch, CVector& out) {
  z_scratch.resize(corr.rank());
  normal.fill(rng, z_scratch);
  out.noalias() = corr.sqrt_factor * z_scratch;
}

CVector sample_channel(const CorrelationMatrix& corr, Rng& rng) {
  ComplexNormal normal;
  CVector z;
  CVector g(corr.antennas());
  sample_channel(corr, rng, normal, z, g);
  return g;
}

CorrelationBank::CorrelationBank(const ScenarioConfig& config, const UserDrop& drop)
    : L_(config.L), users_(config.users()), M_(config.M) {
  matrices_.reserve(static_cast<std::size_t>(L_) * users_);
  const double asd = config.asd_rad();
  for (int bs = 0; bs < L_; ++bs) {
    for (int u = 0; u < users_; ++u) {
      matrices_.push_back(local_scattering(drop.beta_of(bs, u),
                                           drop.aoa_rad[drop.pair(bs, u)], asd, M_));
    }
  }
}

CorrelationBank::CorrelationBank(int L, int users, std::vector<CorrelationMatrix> matrices)
    : L_(L), users_(users), matrices_(std::move(matrices)) {
  if (matrices_.size() != static_cast<std::size_t>(L) * users || matrices_.empty()) {
    throw ConfigError("correlation bank needs L * users matrices");
  }
  M_ = static_cast<int>(matrices_.front().antennas());
  for (const auto& m : matrices_) {
    if (m.antennas() != M_) throw ConfigError("correlation matrices differ in size");
  }
}

void CorrelationBank::write_spectra_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "bs,user,index,eigenvalue\n" << std::setprecision(17);
  for (int bs = 0; bs < L_; ++bs) {
    for (int u = 0; u < users_; ++u) {
      const RVector& lambda = at(bs, u).eigenvalues;
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        out << bs << ',' << u << ',' << i << ',' << lambda[i] << '\n';
      }
    }
  }
}

}  // namespace dlgain
