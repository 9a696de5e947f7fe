#pragma once

// Shared fixtures for the unit tests.

#include <string>
#include <vector>

#include <curvjac/generate.hpp>

#include "oracles.hpp"

namespace support {

using namespace curvjac;

/// Two constant-curvature surfaces, K12 = 1 on {e1,e2}, K34 = 2 on {e3,e4}.
inline Model product_model() {
  const Model a = gen_constant(InnerProduct(2, 0), 1.0);
  const Model b = gen_constant(InnerProduct(2, 0), 2.0);
  const std::vector<Model> blocks{a, b};
  return direct_sum(blocks);
}

inline Model r_phi_diag1234() {
  Matrix phi = Matrix::Zero(4, 4);
  phi.diagonal() << 1, 2, 3, 4;
  return gen_r_phi(InnerProduct(4, 0), phi);
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Vector e(int m, int i) { return Vector::Unit(m, i); }

struct ZooEntry {
  std::string name;
  Model model;
};

/// Seeded random models over the signatures (m,0), (1,m-1) and (2,2).
inline std::vector<ZooEntry> random_zoo(int count, std::uint64_t seed) {
  std::vector<ZooEntry> out;
  for (int n = 0; n < count; ++n) {
    const int m = 3 + n % 4;
    InnerProduct g(m, 0);
    if (n % 3 == 1) g = InnerProduct(1, m - 1);
    if (n % 3 == 2) g = InnerProduct(2, 2);
    const int terms = 1 + n % 3;
    out.push_back({"random " + std::to_string(g.p()) + "," + std::to_string(g.q()),
                   gen_random_acurv(g, terms, derive_seed(seed, static_cast<std::uint64_t>(n)))});
  }
  return out;
}

/// Largest entrywise difference between an oracle matrix and an operator.
inline double diff(const oracle::Mat& a, const Operator& b) { return oracle::max_diff(a, b.matrix()); }

}  // namespace support
