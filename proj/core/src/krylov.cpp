// Copyright 2026 The bimlab Authors.
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

#include "bimlab/krylov.hpp"

#include <cmath>
#include <vector>

#include "bimlab/errors.hpp"

namespace bimlab::em {

namespace {

struct Column {
  cplx rho_old{1.0, 0.0};
  cplx alpha{1.0, 0.0};
  cplx omega{1.0, 0.0};
  int restarts = 0;
  bool done = false;
};

}  // namespace

BlockKrylovResult bicgstab_block(const BlockOperator& apply, const CMatrix& b_in, const CMatrix& x0_in, int max_iters,
                                 double tol) {
  require(b_in.rows() == x0_in.rows() && b_in.cols() == x0_in.cols(), "bicgstab: b and x0 shapes differ");
  require(max_iters >= 0, "bicgstab: max_iters must be nonnegative");
  require(tol >= 0, "bicgstab: tol must be nonnegative");
  const Eigen::Index n = b_in.rows();
  const Eigen::Index k = b_in.cols();

  BlockKrylovResult out;
  out.x = CMatrix::Zero(n, k);
  out.residual = RVector::Zero(k);
  out.iterations = Eigen::VectorXi::Zero(k);
  out.breakdown = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(k, false);
  if (k == 0) return out;

  // Thresholds are relative: rho and omega-scaled products against |b|^2,
  // residuals against |b|.
  RVector bnorm(k);
  std::vector<Column> cols(static_cast<std::size_t>(k));
  const CMatrix& b = b_in;
  CMatrix x = x0_in;
  for (Eigen::Index c = 0; c < k; ++c) {
    bnorm(c) = b.col(c).norm();
    if (bnorm(c) == 0.0) {
      cols[std::size_t(c)].done = true;
      x.col(c).setZero();
    }
  }
  auto scale2 = [&](Eigen::Index c) { return bnorm(c) * bnorm(c); };

  auto apply_checked = [&](const CMatrix& m) {
    CMatrix r = apply(m);
    require(r.rows() == n && r.cols() == k, "bicgstab: operator returned wrong shape");
    return r;
  };

  CMatrix r = b - apply_checked(x);
  CMatrix rhat = r;
  CMatrix p = CMatrix::Zero(n, k);
  CMatrix v = CMatrix::Zero(n, k);
  CMatrix s(n, k);

  auto restart = [&](Eigen::Index c) {
    // r(c) must already hold the true residual of x(c).
    auto& col = cols[std::size_t(c)];
    rhat.col(c) = r.col(c);
    p.col(c).setZero();
    v.col(c).setZero();
    col.rho_old = col.alpha = col.omega = cplx(1.0, 0.0);
  };

  auto mark_breakdown = [&](Eigen::Index c) {
    auto& col = cols[std::size_t(c)];
    if (col.restarts == 0) {
      ++col.restarts;
      restart(c);
      return false;
    }
    out.breakdown(c) = true;
    col.done = true;
    return true;
  };

  for (Eigen::Index c = 0; c < k; ++c) {
    const double rn = r.col(c).norm();
    if (!cols[std::size_t(c)].done && (rn <= tol * bnorm(c) || rn == 0.0)) cols[std::size_t(c)].done = true;
  }

  for (int it = 0; it < max_iters; ++it) {
    bool any_active = false;
    for (Eigen::Index c = 0; c < k; ++c) {
      auto& col = cols[std::size_t(c)];
      if (col.done) {
        p.col(c).setZero();
        continue;
      }
      any_active = true;
      cplx rho = rhat.col(c).dot(r.col(c));
      if (std::abs(rho) < kBreakdownThreshold * scale2(c)) {
        r.col(c) = b.col(c) - apply_checked(x).col(c);
        if (mark_breakdown(c)) continue;
        rho = rhat.col(c).dot(r.col(c));
        if (std::abs(rho) < kBreakdownThreshold * scale2(c)) {
          out.breakdown(c) = true;
          col.done = true;
          p.col(c).setZero();
          continue;
        }
      }
      const cplx beta = (rho / col.rho_old) * (col.alpha / col.omega);
      p.col(c) = r.col(c) + beta * (p.col(c) - col.omega * v.col(c));
      col.rho_old = rho;
    }
    if (!any_active) break;

    v = apply_checked(p);
    bool need_t = false;
    for (Eigen::Index c = 0; c < k; ++c) {
      auto& col = cols[std::size_t(c)];
      if (col.done) {
        s.col(c).setZero();
        continue;
      }
      ++out.iterations(c);
      const cplx denom = rhat.col(c).dot(v.col(c));
      if (std::abs(denom) < kBreakdownThreshold * scale2(c)) {
        r.col(c) = b.col(c) - apply_checked(x).col(c);
        mark_breakdown(c);
        s.col(c).setZero();
        continue;
      }
      col.alpha = col.rho_old / denom;
      s.col(c) = r.col(c) - col.alpha * v.col(c);
      const double sn = s.col(c).norm();
      if (sn <= tol * bnorm(c) || sn == 0.0) {
        x.col(c) += col.alpha * p.col(c);
        r.col(c) = s.col(c);
        col.done = true;
        s.col(c).setZero();
        continue;
      }
      need_t = true;
    }
    if (!need_t) continue;

    const CMatrix t = apply_checked(s);
    for (Eigen::Index c = 0; c < k; ++c) {
      auto& col = cols[std::size_t(c)];
      if (col.done || s.col(c).squaredNorm() == 0.0) continue;
      const double tt = t.col(c).squaredNorm();
      const cplx omega = tt > 0 ? t.col(c).dot(s.col(c)) / tt : cplx(0.0);
      if (std::abs(omega) < kBreakdownThreshold) {
        // Keep the half step, which is a valid improvement, then restart.
        x.col(c) += col.alpha * p.col(c);
        r.col(c) = s.col(c);
        mark_breakdown(c);
        continue;
      }
      col.omega = omega;
      x.col(c) += col.alpha * p.col(c) + omega * s.col(c);
      r.col(c) = s.col(c) - omega * t.col(c);
      const double rn = r.col(c).norm();
      if (rn <= tol * bnorm(c) || rn == 0.0) col.done = true;
    }
  }

  for (Eigen::Index c = 0; c < k; ++c) {
    if (bnorm(c) == 0.0) continue;
    out.x.col(c) = x.col(c);
    out.residual(c) = r.col(c).norm() / bnorm(c);
  }
  return out;
}

KrylovResult bicgstab(const BlockOperator& apply, const CVector& b, const CVector& x0, int max_iters, double tol) {
  require(b.size() == x0.size(), "bicgstab: b and x0 lengths differ");
  const auto block = bicgstab_block(apply, CMatrix(b), CMatrix(x0), max_iters, tol);
  return {block.x.col(0), block.residual(0), block.iterations(0), block.breakdown(0)};
}

}  // namespace bimlab::em
