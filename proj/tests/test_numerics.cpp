#include <doctest.h>

#include "oracles.hpp"
#include "xalign/numerics.hpp"

using namespace xalign;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("rng streams are bit-identical for equal seeds and differ across seeds") {
  Rng a(RngSeed{42}), b(RngSeed{42}), c(RngSeed{43});
  bool same = true, differ = false;
  for (int i = 0; i < 256; ++i) {
    const Complex xa = a.next_cgauss(), xb = b.next_cgauss(), xc = c.next_cgauss();
    same = same && xa == xb;  // exact, not approximate
    differ = differ || xa != xc;
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("gaussian entries have roughly unit variance and zero mean") {
  Rng rng(RngSeed{7});
  const int n = 20000;
  double mean = 0, var = 0;
  for (int i = 0; i < n; ++i) {
    const Complex z = rng.next_cgauss();
    mean += z.real() + z.imag();
    var += std::norm(z);
  }
  mean /= 2.0 * n;
  var /= n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("random_channel_set is deterministic and correctly shaped") {
  const AntennaConfig cfg{2, 3, 4, 1};
  const ChannelSet s1 = random_channel_set(cfg, RngSeed{5});
  const ChannelSet s2 = random_channel_set(cfg, RngSeed{5});
  CHECK(s1.h11.rows() == 4);
  CHECK(s1.h11.cols() == 2);
  CHECK(s1.h12.rows() == 4);
  CHECK(s1.h12.cols() == 3);
  CHECK(s1.h21.rows() == 1);
  CHECK(s1.h21.cols() == 2);
  CHECK(s1.h22.rows() == 1);
  CHECK(s1.h22.cols() == 3);
  CHECK((s1.h11 - s2.h11).norm() == 0.0);
  CHECK((s1.h22 - s2.h22).norm() == 0.0);
  const ChannelSet s3 = random_channel_set(cfg, RngSeed{6});
  CHECK((s1.h11 - s3.h11).norm() > 0.0);
}

TEST_CASE("extend repeats blocks on the diagonal and duplicates spectra") {
  const ChannelSet base = random_channel_set(AntennaConfig{2, 2, 2, 2}, RngSeed{11});
  const ChannelSet ext = extend(base, 3);
  CHECK(ext.extension == 3);
  CHECK(ext.h11.rows() == 6);
  CHECK((ext.h11.block(2, 2, 2, 2) - base.h11).norm() == 0.0);
  CHECK(ext.h11.block(0, 2, 2, 2).norm() == 0.0);

  // Spectrum of the extended block = base spectrum repeated, checked against
  // the closed-form 2x2 oracle.
  const auto lam = oracles::eig2(base.h11);
  std::vector<Complex> want;
  for (int k = 0; k < 3; ++k) {
    want.push_back(lam[0]);
    want.push_back(lam[1]);
  }
  const EigResult ed = eig(ext.h11);
  std::vector<Complex> got;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) got.push_back(ed.values(i));
  CHECK(oracles::spectra_match(want, got, 1e-8 * base.h11.norm()));

  CHECK_THROWS_AS((void)extend(ext, 2), UsageError);
  CHECK_THROWS_AS((void)extend(base, 0), UsageError);
}

TEST_CASE("per_slot_channel_set builds diagonal per-slot links") {
  const ChannelSet ch = per_slot_channel_set(RngSeed{9}, 3);
  CHECK(ch.extension == 3);
  CHECK(ch.kind == ExtensionKind::per_slot_diagonal);
  CHECK(ch.h11.rows() == 3);
  for (const Matrix* h : {&ch.h11, &ch.h12, &ch.h21, &ch.h22}) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (r != c) CHECK((*h)(r, c) == Complex(0, 0));
  }
  // Slots hold independent draws: coefficients differ across the diagonal.
  CHECK(std::abs(ch.h11(0, 0) - ch.h11(1, 1)) > 1e-12);
  const ChannelSet again = per_slot_channel_set(RngSeed{9}, 3);
  CHECK((ch.h22 - again.h22).norm() == 0.0);
}

TEST_CASE("numerical_rank agrees with the elimination oracle") {
  Rng rng(RngSeed{21});
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = 2 + static_cast<int>(rng.next_u64() % 5);
    const int cols = 2 + static_cast<int>(rng.next_u64() % 5);
    const int r = static_cast<int>(rng.next_u64() % (std::min(rows, cols) + 1));
    // Product of r-column factors has rank exactly r almost surely.
    Matrix a = Matrix::Zero(rows, cols);
    if (r > 0) a = rng.gaussian_matrix(rows, r) * rng.gaussian_matrix(r, cols);
    CHECK(numerical_rank(a) == r);
    CHECK(oracles::ge_rank(a) == r);
  }
}

TEST_CASE("null_space returns an orthonormal exact kernel basis") {
  Rng rng(RngSeed{31});
  const Matrix a = rng.gaussian_matrix(3, 5);
  const Matrix n = null_space(a);
  REQUIRE(n.cols() == 2);
  CHECK((a * n).norm() <= 1e-10 * a.norm());
  CHECK((n.adjoint() * n - Matrix::Identity(2, 2)).norm() <= kOrthoTol);

  const Matrix full = rng.gaussian_matrix(4, 4);
  CHECK(null_space(full).cols() == 0);
}

TEST_CASE("orth_basis and orth_complement split the space") {
  Rng rng(RngSeed{41});
  const Matrix a = rng.gaussian_matrix(5, 2);
  const Matrix q = orth_basis(a);
  const Matrix qc = orth_complement(a);
  REQUIRE(q.cols() == 2);
  REQUIRE(qc.cols() == 3);
  CHECK((q.adjoint() * q - Matrix::Identity(2, 2)).norm() <= kOrthoTol);
  CHECK((qc.adjoint() * qc - Matrix::Identity(3, 3)).norm() <= kOrthoTol);
  CHECK((qc.adjoint() * a).norm() <= 1e-9 * a.norm());
}

TEST_CASE("cond_number: identity is 1, singular is infinite") {
  CHECK(cond_number(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  CHECK(std::isinf(cond_number(s)));
}

TEST_CASE("eig reproduces the 2x2 closed form") {
  Rng rng(RngSeed{51});
  const Matrix a = rng.gaussian_matrix(2, 2);
  const EigResult ed = eig(a);
  const auto lam = oracles::eig2(a);
  std::vector<Complex> got{ed.values(0), ed.values(1)};
  CHECK(oracles::spectra_match({lam[0], lam[1]}, got, 1e-9 * a.norm()));
  CHECK((a * ed.vectors - ed.vectors * ed.values.asDiagonal()).norm() <= 1e-8 * a.norm());
  CHECK_FALSE(ed.defective());
}

TEST_CASE("solve_invertible solves and names the failing operand") {
  Rng rng(RngSeed{61});
  const Matrix a = rng.gaussian_matrix(4, 4);
  const Matrix b = rng.gaussian_matrix(4, 2);
  const Matrix x = solve_invertible(a, b, "test operand");
  CHECK((a * x - b).norm() <= 1e-9 * b.norm());

  Matrix s = Matrix::Zero(3, 3);
  s(0, 0) = 1.0;
  try {
    (void)solve_invertible(s, Matrix::Identity(3, 3), "test operand");
    FAIL("expected DegenerateError");
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("test operand") != std::string::npos);
  }
}

TEST_CASE("random_orthonormal has orthonormal columns") {
  Rng rng(RngSeed{71});
  const Matrix q = random_orthonormal(rng, 6, 3);
  CHECK((q.adjoint() * q - Matrix::Identity(3, 3)).norm() <= kOrthoTol);
}

TEST_SUITE_END();
