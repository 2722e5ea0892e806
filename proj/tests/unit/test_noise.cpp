#include <cmath>
#include <cstring>

#include "doctest.h"
#include "sstokes/errors.hpp"
#include "sstokes/noise.hpp"

using namespace sstokes;

TEST_CASE("Q-Wiener eigenpairs") {
  CHECK(qw_eigenfunction(1, 1, Point(0.5, 0.5)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(qw_eigenvalue(2, 1) == doctest::Approx(0.2));
  CHECK(std::abs(qw_eigenfunction(3, 2, Point(0.0, 0.4))) < 1e-15);
  CHECK(std::abs(qw_eigenfunction(3, 2, Point(1.0, 0.4))) < 1e-14);
}

TEST_CASE("paths are deterministic in the seed") {
  const WienerPath a = WienerPath::sample(NoiseKind::TruncatedQW, 3, 1.0 / 64, 1.0, 7);
  const WienerPath b = WienerPath::sample(NoiseKind::TruncatedQW, 3, 1.0 / 64, 1.0, 7);
  const WienerPath c = WienerPath::sample(NoiseKind::TruncatedQW, 3, 1.0 / 64, 1.0, 8);
  CHECK(a.n_master_steps() == 64);
  CHECK(a.modes() == 9);
  bool same = true, differ = false;
  for (int n = 0; n < a.n_master_steps(); ++n) {
    for (int j = 0; j < 9; ++j) {
      same = same && a.master(n)[j] == b.master(n)[j];
      differ = differ || a.master(n)[j] != c.master(n)[j];
    }
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("scalar increments have variance k") {
  const int paths = 100000;
  const double k = 1.0 / 16;
  double sum = 0.0, sum2 = 0.0, cross = 0.0;
  for (int s = 0; s < paths; ++s) {
    const WienerPath p = WienerPath::sample(NoiseKind::ScalarBM, 1, k, 2 * k, 1000 + s);
    const double x = p.master(0)[0];
    const double y = p.master(1)[0];
    sum += x;
    sum2 += x * x;
    cross += x * y;
  }
  const double mean = sum / paths;
  const double var = sum2 / paths - mean * mean;
  // Standard errors: sqrt(k/N) for the mean, k*sqrt(2/N) for the variance.
  CHECK(std::abs(mean) < 4.0 * std::sqrt(k / paths));
  CHECK(std::abs(var - k) < 4.0 * k * std::sqrt(2.0 / paths));
  CHECK(std::abs(cross / paths) < 4.0 * k / std::sqrt(paths));
}

TEST_CASE("mode normals are standard and uncorrelated") {
  const WienerPath p = WienerPath::sample(NoiseKind::TruncatedQW, 4, 1e-4, 1.0, 99);
  const int n = p.n_master_steps();
  double s00 = 0.0, s01 = 0.0, s0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto m = p.master(i);
    s0 += m[0];
    s00 += m[0] * m[0];
    s01 += m[0] * m[5];
  }
  CHECK(std::abs(s0 / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s00 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s01 / n) < 4.0 / std::sqrt(n));
}

TEST_CASE("coarsening telescopes bitwise") {
  for (NoiseKind kind : {NoiseKind::ScalarBM, NoiseKind::TruncatedQW}) {
    const WienerPath p = WienerPath::sample(kind, 4, 1.0 / 512, 1.0, 31);
    const CoarsePath fine = coarsen(p, 1.0 / 64);
    const CoarsePath coarse = coarsen(p, 1.0 / 8);
    CHECK(coarse.ratio() == 64);
    CHECK(coarse.steps() == 8);
    for (int n = 0; n < coarse.steps(); ++n) {
      const auto direct = coarse.master_sums(n);
      std::vector<double> via(direct.size(), 0.0);
      for (int i = 0; i < 8; ++i) {
        const auto part = fine.master_sums(8 * n + i);
        for (std::size_t j = 0; j < via.size(); ++j) via[j] += part[j];
      }
      CHECK(std::memcmp(direct.data(), via.data(), direct.size() * sizeof(double)) == 0);
    }
    // The finest view returns the master data unchanged.
    const CoarsePath id = coarsen(p, p.master_k());
    for (int n = 0; n < id.steps(); ++n) {
      const auto s = id.master_sums(n);
      for (std::size_t j = 0; j < s.size(); ++j) CHECK(s[j] == p.master(n)[j]);
    }
  }
}

TEST_CASE("scalar coarse increments sum the master increments") {
  const WienerPath p = WienerPath::sample(NoiseKind::ScalarBM, 1, 1.0 / 100, 1.0, 5);
  const CoarsePath c = coarsen(p, 1.0 / 10);
  double total_master = 0.0, total_coarse = 0.0;
  for (int n = 0; n < p.n_master_steps(); ++n) total_master += p.master(n)[0];
  for (int n = 0; n < c.steps(); ++n) total_coarse += c.increment(n).scalar;
  CHECK(total_master == total_coarse);
}

TEST_CASE("Q-Wiener increment amplitudes") {
  const WienerPath p = WienerPath::sample(NoiseKind::TruncatedQW, 2, 1.0 / 60, 1.0, 3);
  const double k = 1.0 / 10;
  const CoarsePath a = coarsen(p, k, NoiseScaling::AsPrintedK);
  const CoarsePath b = coarsen(p, k, NoiseScaling::SqrtK);
  const Point x(0.3, 0.7);
  for (int n = 0; n < a.steps(); ++n) {
    const auto s = a.master_sums(n);
    double expect = 0.0;
    for (int j1 = 1; j1 <= 2; ++j1) {
      for (int j2 = 1; j2 <= 2; ++j2) {
        expect += std::sqrt(qw_eigenvalue(j1, j2)) * qw_eigenfunction(j1, j2, x) * s[(j1 - 1) * 2 + (j2 - 1)];
      }
    }
    CHECK(increment_field(a, n, x) == doctest::Approx(k * expect).epsilon(1e-13));
    CHECK(increment_field(b, n, x) == doctest::Approx(std::sqrt(p.master_k()) * expect).epsilon(1e-13));
  }
  const std::vector<Point> pts{x, Point(0.1, 0.2)};
  const ModeTable table(2, pts);
  std::vector<double> out(2);
  table.evaluate(a.increment(1), out);
  CHECK(out[0] == doctest::Approx(increment_field(a, 1, x)).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(increment_field(a, 1, pts[1])).epsilon(1e-14));
}

TEST_CASE("steps that do not divide the grid are rejected") {
  const WienerPath p = WienerPath::sample(NoiseKind::ScalarBM, 1, 1.0 / 600, 1.0, 1);
  CHECK_THROWS_AS(coarsen(p, 1.0 / 7), ConfigError);
  CHECK_THROWS_AS(WienerPath::sample(NoiseKind::ScalarBM, 1, 0.3, 1.0, 1), ConfigError);
  CHECK_NOTHROW(coarsen(p, 1.0 / 5));
}
