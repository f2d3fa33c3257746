#include <doctest.h>

#include "gaussk/matfun.hpp"
#include "gaussk/random.hpp"

using namespace gaussk;

TEST_CASE("exp of zero is identity") {
  Mat Z = Mat::Zero(4, 4);
  CHECK(max_abs(Mat(matrix_exp(Z) - Mat::Identity(4, 4))) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sqrt halves the log-spectrum of a relative structure") {
  const double rho = 0.7;
  Rng rng(11);
  // Delta with eigenvalues (e^rho, e^-rho) conjugated by a random invertible map
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = std::exp(rho);
  D(1, 1) = std::exp(-rho);
  Mat V(2, 2);
  V << 1.0, 0.3, -0.2, 1.1;
  Mat A = V * D * V.inverse();
  Mat S = matrix_function(A, MatFun::Sqrt);
  CHECK(max_abs(Mat(S * S - A)) < 1e-12);
  CVec ev = eigenvalues(S);
  CHECK(ev.cwiseAbs().maxCoeff() == doctest::Approx(std::exp(rho / 2)).epsilon(1e-12));
  CHECK(ev.cwiseAbs().minCoeff() == doctest::Approx(std::exp(-rho / 2)).epsilon(1e-12));
}

TEST_CASE("log is a left inverse of exp on algebra elements") {
  Rng rng(5);
  for (Statistics stats : {Statistics::Boson, Statistics::Fermion}) {
    Mat K = random_algebra_element(rng, stats, 3, 0.2);
    Mat back = matrix_function(matrix_exp(K), MatFun::Log);
    CHECK(max_abs(Mat(back - K)) < 1e-9);
  }
}

TEST_CASE("principal sqrt refuses eigenvalues on the cut") {
  Mat A = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(matrix_function(A, MatFun::Sqrt), BranchViolation);
  CHECK_THROWS_AS(matrix_function(Mat(Mat::Zero(2, 2)), MatFun::Log), BranchViolation);
}

TEST_CASE("argh matches arctanh inside and arccoth outside the unit interval") {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = 0.5;
  A(1, 1) = 2.0;
  Mat R = matrix_function(A, MatFun::Argh);
  CHECK(R(0, 0) == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
  CHECK(R(1, 1) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));  // arccoth(2)
}

TEST_CASE("abs maps +-i eps pairs to eps") {
  Mat K(2, 2);
  K << 0, 1.5, -1.5, 0;
  Mat A = matrix_function(K, MatFun::Abs);
  CHECK(max_abs(Mat(A - 1.5 * Mat::Identity(2, 2))) < 1e-12);
}

TEST_CASE("expm1_over handles the zero eigenvalue by series") {
  Mat Z = Mat::Zero(3, 3);
  CHECK(max_abs(Mat(matrix_expm1_over(Z) - Mat::Identity(3, 3))) < 1e-14);
  Mat K(2, 2);
  K << 0, 1e-6, -1e-6, 0;
  Mat phi = matrix_expm1_over(K);
  // phi(A) = A^{-1}(1-e^{-A}) ~ 1 - A/2 for small A
  CHECK(max_abs(Mat(phi - (Mat::Identity(2, 2) - 0.5 * K))) < 1e-12);
}

TEST_CASE("pfaffian sign flips under odd reflections and negation") {
  Mat O2(2, 2);
  O2 << 0, 1, -1, 0;
  const int s = pfaffian_sign(O2);
  CHECK(s == 1);
  CHECK(pfaffian_sign(Mat(-O2)) == -1);

  Rng rng(3);
  for (int n : {2, 3, 4}) {
    Mat A = random_antisymmetric(rng, 2 * n, 1.0);
    Mat R = random_group_element(rng, Statistics::Fermion, n);  // det +1
    CHECK(pfaffian_sign(Mat(R * A * R.transpose())) == pfaffian_sign(A));
    Mat refl = Mat::Identity(2 * n, 2 * n);
    refl(0, 0) = -1;
    CHECK(pfaffian_sign(Mat(refl * A * refl.transpose())) == -pfaffian_sign(A));
  }
}

TEST_CASE("x/(e^x-1) and F(K) series agree with the closed forms") {
  Rng rng(7);
  Mat K = random_algebra_element(rng, Statistics::Boson, 2, 0.3);
  CMat Kc = K.cast<cplx>();
  CMat small = matrix_x_over_expm1(CMat(1e-6 * Kc));
  CHECK(max_abs(CMat(small - CMat::Identity(4, 4) + 0.5e-6 * Kc)) < 1e-10);

  // F odd: F(-K) = -F(K)
  CMat F1 = matrix_bch_F(Kc);
  CMat F2 = matrix_bch_F(CMat(-Kc));
  CHECK(max_abs(CMat(F1 + F2)) < 1e-12);
}
