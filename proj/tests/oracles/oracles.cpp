// Copyright 2026 The qgyro Authors
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

#include "oracles.hpp"

#include <cmath>

namespace qgyro::oracle {

CartesianSpin cartesian_spin(int two_k) {
  CartesianSpin s;
  s.k = 0.5 * two_k;
  s.dim = two_k + 1;
  s.x = Mat::Zero(s.dim, s.dim);
  s.y = Mat::Zero(s.dim, s.dim);
  s.z = Mat::Zero(s.dim, s.dim);
  for (int a = 0; a < s.dim; ++a) {
    const double ma = s.k - a;
    s.z(a, a) = ma;
    for (int b = 0; b < s.dim; ++b) {
      const double mb = s.k - b;
      // <m+1|J_x|m> = <m|J_x|m+1> = sqrt((k-m)(k+m+1))/2
      if (std::abs(ma - mb - 1.0) < 1e-12) {
        const double c = 0.5 * std::sqrt((s.k - mb) * (s.k + mb + 1.0));
        s.x(a, b) = c;
        s.x(b, a) = c;
        s.y(a, b) = Cx(0.0, -c);
        s.y(b, a) = Cx(0.0, c);
      }
    }
  }
  return s;
}

Mat rhs(const Mat& rho, const ModelParams& p) {
  const CartesianSpin s = cartesian_spin(p.spin.two_k());
  const Cx i(0.0, 1.0);
  // Drive written through J_x, J_y:
  // (W/4i)(J+ e^{-ib} - J- e^{ib}) = (W/2)(J_y cos b - J_x sin b)
  const Mat h = p.omega * s.z + p.c_q * s.z * s.z +
                0.5 * p.omega_d *
                    (std::cos(p.beta) * s.y - std::sin(p.beta) * s.x);
  Mat out = -i * (h * rho - rho * h);

  const double casimir = s.k * (s.k + 1.0);
  out += p.gamma1 * (s.x * rho * s.x + s.y * rho * s.y + s.z * rho * s.z -
                     casimir * rho);
  const Mat z2 = s.z * s.z;
  out += p.gamma2 * (2.0 * s.z * rho * s.z - rho * z2 - z2 * rho);
  // J+ rho J- - J- rho J+ = 2i (J_y rho J_x - J_x rho J_y)
  out += p.gamma_p * (2.0 * i * (s.y * rho * s.x - s.x * rho * s.y) +
                      rho * s.z + s.z * rho);
  return out;
}

Mat generator(const ModelParams& p) {
  const int d = p.spin.dim();
  Mat g(d * d, d * d);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) {
      Mat unit = Mat::Zero(d, d);
      unit(row, col) = 1.0;
      const Mat image = rhs(unit, p);
      for (int b = 0; b < d; ++b) {
        for (int a = 0; a < d; ++a) g(a + b * d, row + col * d) = image(a, b);
      }
    }
  }
  return g;
}

Mat steady_state(const ModelParams& p) {
  const int d = p.spin.dim();
  Eigen::ComplexEigenSolver<Mat> es(generator(p));
  Eigen::Index best = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&best);
  const Eigen::VectorXcd v = es.eigenvectors().col(best);
  Mat rho(d, d);
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) rho(a, b) = v(a + b * d);
  }
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

Moments moments(const ModelParams& p) {
  const CartesianSpin s = cartesian_spin(p.spin.two_k());
  const Mat rho = steady_state(p);
  return {(s.x * rho).trace().real(), (s.y * rho).trace().real()};
}

std::vector<Root> shift_roots(const ModelParams& p, double lo, double hi,
                              int points) {
  auto ky = [&](double w) {
    ModelParams q = p;
    q.omega = w;
    return moments(q).k_y;
  };
  std::vector<Root> roots;
  double x0 = lo;
  double f0 = ky(x0);
  for (int n = 1; n < points; ++n) {
    const double x1 = lo + (hi - lo) * n / (points - 1);
    const double f1 = ky(x1);
    if (f0 == 0.0 || f0 * f1 < 0.0) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = ky(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      ModelParams q = p;
      q.omega = 0.5 * (a + b);
      roots.push_back({q.omega, moments(q).k_x});
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

std::vector<double> dft_amplitudes(const std::vector<Cx>& x, double dt,
                                   const std::vector<double>& w,
                                   const std::vector<double>& nus) {
  double wsum = 0.0;
  for (double v : w) wsum += v;
  std::vector<double> out;
  out.reserve(nus.size());
  for (double nu : nus) {
    Cx acc(0.0, 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
      acc += w[n] * x[n] * std::polar(1.0, -nu * dt * static_cast<double>(n));
    }
    out.push_back(std::abs(acc) / wsum);
  }
  return out;
}

}  // namespace qgyro::oracle
