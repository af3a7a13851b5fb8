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

#include "bimlab/greens.hpp"

#include <cmath>
#include <string>

#include "bimlab/errors.hpp"
#include "bimlab/special.hpp"

namespace bimlab::em {

namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

cplx green(double k0, double r) { return hankel2(0, k0 * r) / (4.0 * kJ); }

}  // namespace

std::vector<Point> pixel_centers(const ProblemConfig& config) {
  std::vector<Point> out;
  out.reserve(std::size_t(config.pixel_count()));
  const double d = config.pixel_size_m;
  const double x0 = -0.5 * config.domain_width_m();
  const double y0 = -0.5 * config.domain_height_m();
  for (int iy = 0; iy < config.grid_ny; ++iy)
    for (int ix = 0; ix < config.grid_nx; ++ix) out.push_back({x0 + (ix + 0.5) * d, y0 + (iy + 0.5) * d});
  return out;
}

std::vector<Point> ring(int count, double radius) {
  std::vector<Point> out;
  out.reserve(std::size_t(count));
  for (int k = 0; k < count; ++k) {
    const double phi = 2.0 * kPi * k / count;
    out.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  }
  return out;
}

Geometry default_geometry(const ProblemConfig& config) {
  return {pixel_centers(config), ring(config.tx_count, config.transceiver_radius_m),
          ring(config.rx_count, config.transceiver_radius_m)};
}

cplx self_term(double k0, double pixel_size) {
  const double a = pixel_size / std::sqrt(kPi);
  const cplx disk = (2.0 * kPi * a / k0) * hankel2(1, k0 * a) - 4.0 * kJ / (k0 * k0);
  return k0 * disk / (4.0 * kJ);
}

GreensOperators build_greens(const ProblemConfig& config) { return build_greens(config, default_geometry(config)); }

GreensOperators build_greens(const ProblemConfig& config, const Geometry& geometry) {
  config.validate();
  const auto n = Eigen::Index(geometry.pixels.size());
  require(n == config.pixel_count(), "geometry pixel count does not match the grid");

  GreensOperators ops;
  ops.k0 = config.wavenumber();
  const double k0 = ops.k0;
  const double area = config.pixel_size_m * config.pixel_size_m;
  // Midpoint quadrature is meaningless if an observation point sits on a center.
  const double min_sep = 1e-9 * config.pixel_size_m;

  const auto rx = Eigen::Index(geometry.receivers.size());
  ops.g_rx.resize(rx, n);
  for (Eigen::Index m = 0; m < rx; ++m) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const double r = distance(geometry.receivers[std::size_t(m)], geometry.pixels[std::size_t(p)]);
      if (r < min_sep)
        throw ConfigError("receiver " + std::to_string(m) + " coincides with pixel center " + std::to_string(p));
      ops.g_rx(m, p) = k0 * area * green(k0, r);
    }
  }

  ops.a_dom.resize(n, n);
  const cplx diag = self_term(k0, config.pixel_size_m);
  for (Eigen::Index p = 0; p < n; ++p) {
    ops.a_dom(p, p) = diag;
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double r = distance(geometry.pixels[std::size_t(p)], geometry.pixels[std::size_t(q)]);
      const cplx v = k0 * area * green(k0, r);
      ops.a_dom(p, q) = v;
      ops.a_dom(q, p) = v;
    }
  }
  return ops;
}

FieldSet incident_fields(const ProblemConfig& config) { return incident_fields(config, default_geometry(config)); }

FieldSet incident_fields(const ProblemConfig& config, const Geometry& geometry) {
  config.validate();
  const double k0 = config.wavenumber();
  const auto n = Eigen::Index(geometry.pixels.size());
  const auto tx = Eigen::Index(geometry.transmitters.size());
  FieldSet e;
  e.kind = FieldKind::incident;
  e.per_tx.resize(n, tx);
  for (Eigen::Index t = 0; t < tx; ++t) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const double r = distance(geometry.transmitters[std::size_t(t)], geometry.pixels[std::size_t(p)]);
      if (!(r > 0)) throw ConfigError("transmitter " + std::to_string(t) + " coincides with a pixel center");
      e.per_tx(p, t) = green(k0, r);
    }
  }
  return e;
}

}  // namespace bimlab::em
