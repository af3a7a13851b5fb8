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

#pragma once

#include <vector>

#include "bimlab/config.hpp"
#include "bimlab/types.hpp"

namespace bimlab::em {

struct Point {
  double x = 0;
  double y = 0;
};

/// Pixel centers and transceiver positions. The grid is centered on the origin.
struct Geometry {
  std::vector<Point> pixels;
  std::vector<Point> transmitters;
  std::vector<Point> receivers;
};

std::vector<Point> pixel_centers(const ProblemConfig& config);

/// count points equispaced on a circle, the first one on the +x axis.
std::vector<Point> ring(int count, double radius);

/// Default layout: transmitters and receivers on concentric rings of
/// transceiver_radius_m around the grid.
Geometry default_geometry(const ProblemConfig& config);

/// Discretized contrast-field operators.
///   g_rx  (rx x N):  k0 * integral over pixel n of G(r', r_m)
///   a_dom (N x N):   same with r_m at pixel centers; analytic self-term on the diagonal
/// with G(r', r) = H2_0(k0 |r' - r|) / 4j.
struct GreensOperators {
  CMatrix g_rx;
  CMatrix a_dom;
  double k0 = 0;
};

/// Analytic integral of k0 * G over an equal-area disk around the observation point.
cplx self_term(double k0, double pixel_size);

GreensOperators build_greens(const ProblemConfig& config);
GreensOperators build_greens(const ProblemConfig& config, const Geometry& geometry);

/// Unit-strength line-source incident fields, one column per transmitter.
FieldSet incident_fields(const ProblemConfig& config);
FieldSet incident_fields(const ProblemConfig& config, const Geometry& geometry);

}  // namespace bimlab::em
