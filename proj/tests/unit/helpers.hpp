#pragma once

#include <complex>
#include <initializer_list>
#include <random>

#include "kobball/complex_geometry.hpp"

namespace testing {

using kobball::Complex;
using kobball::CVector;

inline CVector cv(std::initializer_list<Complex> entries) {
  CVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index k = 0;
  for (const auto& e : entries) v[k++] = e;
  return v;
}

inline constexpr Complex I{0.0, 1.0};

inline kobball::CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  kobball::CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<kobball::CMatrix> qr(m);
  return qr.householderQ() * kobball::CMatrix::Identity(n, n);
}

}  // namespace testing
