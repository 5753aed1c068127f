#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "genbeta/contraction.hpp"

using namespace genbeta;

namespace {

Matrix haar_mc_sample(int m, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  Matrix G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = n(gen);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

Matrix random_general(int m, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  Matrix G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = n(gen);
  return G;
}

// word tr(A H X H') with argument ids a, x
CWord conj_word(int a, int x) {
  return {fixed_atom(a), random_atom(false), fixed_atom(x), random_atom(true)};
}

}  // namespace

TEST_CASE("pairing enumeration counts (2d-1)!!") {
  CHECK(enumerate_pairings(2).size() == 1);
  CHECK(enumerate_pairings(4).size() == 3);
  CHECK(enumerate_pairings(6).size() == 15);
  CHECK(enumerate_pairings(8).size() == 105);
}

TEST_CASE("Weingarten d=1,2 closed forms") {
  for (int m : {2, 3, 5}) {
    auto t1 = weingarten_orth(1, m);
    REQUIRE(t1.pairings.size() == 1);
    CHECK(t1.wg(0, 0) == Catch::Approx(1.0 / m));

    auto t2 = weingarten_orth(2, m);
    double denom = m * (m - 1.0) * (m + 2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(t2.wg(i, j) ==
              Catch::Approx(i == j ? (m + 1.0) / denom : -1.0 / denom).epsilon(1e-12));
    CHECK_FALSE(t2.gram_singular);
  }
  // pseudo-inverse path flags the degenerate Gram
  auto tsing = weingarten_orth(2, 1);
  CHECK(tsing.gram_singular);
}

TEST_CASE("haar_expect degree-1 identities") {
  std::mt19937_64 gen(1);
  int m = 3;
  Matrix A = random_general(m, gen), X = random_general(m, gen);
  // E tr(A H X H') = tr A tr X / m for arbitrary (not just symmetric) A, X
  CHECK(haar_expect({conj_word(0, 1)}, {A, X}, m) ==
        Catch::Approx(A.trace() * X.trace() / m).epsilon(1e-12));
  // E H_11^2 = 1/m
  Matrix E11 = Matrix::Zero(m, m);
  E11(0, 0) = 1.0;
  CHECK(haar_expect({conj_word(0, 1)}, {E11, E11}, m) == Catch::Approx(1.0 / 3.0));
  // E tr(A H X H) = tr(A X') / m  (second H untransposed)
  CWord w{fixed_atom(0), random_atom(false), fixed_atom(1), random_atom(false)};
  CHECK(haar_expect({w}, {A, X}, m) ==
        Catch::Approx((A * X.transpose()).trace() / m).epsilon(1e-12));
  // odd degree vanishes
  CWord odd{fixed_atom(0), random_atom(false)};
  CHECK(haar_expect({odd}, {A}, m) == 0.0);
  // degree-0 word products are plain traces
  CWord c{fixed_atom(0), fixed_atom(1)};
  CHECK(haar_expect({c}, {A, X}, m) == Catch::Approx((A * X).trace()));
}

TEST_CASE("haar_expect matches Monte Carlo at degree 2 and 3") {
  std::mt19937_64 gen(7);
  int m = 3;
  Matrix A = random_general(m, gen), B = random_general(m, gen);
  Matrix X = random_general(m, gen), Y = random_general(m, gen);

  double exact2 = haar_expect({conj_word(0, 2), conj_word(1, 3)}, {A, B, X, Y}, m);
  // integrand tr(H A H' B)^2 (both H's in non-conjugation positions)
  CWord wsq{random_atom(false), fixed_atom(0), random_atom(true), fixed_atom(1)};
  double exact_sq = haar_expect({wsq, wsq}, {A, B}, m);
  double exact3 =
      haar_expect({conj_word(0, 3), conj_word(1, 4), conj_word(2, 5)},
                  {A, B, A * B, X, Y, X + Y}, m);

  int n_draws = 200000;
  double s2 = 0, s2sq = 0, ssq = 0, ssqsq = 0, s3 = 0, s3sq = 0;
  for (int it = 0; it < n_draws; ++it) {
    Matrix H = haar_mc_sample(m, gen);
    double v2 = (A * H * X * H.transpose()).trace() * (B * H * Y * H.transpose()).trace();
    double vsq = std::pow((H * A * H.transpose() * B).trace(), 2);
    double v3 = (A * H * X * H.transpose()).trace() *
                (B * H * Y * H.transpose()).trace() *
                (A * B * H * (X + Y) * H.transpose()).trace();
    s2 += v2; s2sq += v2 * v2;
    ssq += vsq; ssqsq += vsq * vsq;
    s3 += v3; s3sq += v3 * v3;
  }
  auto check_mc = [&](double exact, double sum, double sumsq, const char* label) {
    double mean = sum / n_draws;
    double se = std::sqrt((sumsq / n_draws - mean * mean) / n_draws);
    INFO(label << ": exact " << exact << " mc " << mean << " se " << se);
    CHECK(std::abs(exact - mean) < 4.0 * se + 1e-12);
  };
  check_mc(exact2, s2, s2sq, "pair of conjugation traces");
  check_mc(exact_sq, ssq, ssqsq, "tr(HAH'B)^2");
  check_mc(exact3, s3, s3sq, "triple product");
}

TEST_CASE("haar_split_kernel reproduces the numeric expectation") {
  std::mt19937_64 gen(3);
  int m = 4;
  // sum_{p,q} K[p][q] T_p(A,B) T_q(X,Y) must equal E tr(AHXH') tr(BHYH')
  // for symmetric arguments.
  Matrix A = symmetrize(random_general(m, gen)), B = symmetrize(random_general(m, gen));
  Matrix X = symmetrize(random_general(m, gen)), Y = symmetrize(random_general(m, gen));
  auto kernel = haar_split_kernel({conj_word(0, 2), conj_word(1, 3)}, 2, m);
  double via_kernel = 0;
  for (const auto& [pq, coef] : kernel)
    via_kernel += coef * eval_trace_mono(pq.first, {A, B}) *
                  eval_trace_mono(pq.second, {X, Y});
  double direct = haar_expect({conj_word(0, 2), conj_word(1, 3)}, {A, B, X, Y}, m);
  CHECK(via_kernel == Catch::Approx(direct).epsilon(1e-12));
}

TEST_CASE("wick_matgamma_expect moments of the central matrix gamma") {
  double t = 2.5;  // n = 5
  for (int m : {1, 2, 3}) {
    Matrix I = Matrix::Identity(m, m);
    // E tr C = t m
    CWord w1{random_atom()};
    CHECK(wick_matgamma_expect({w1}, {}, m, 2 * t) == Catch::Approx(t * m));
    // E (tr C)^2 = t^2 m^2 + t m  (tr C is chi^2_{nm}/2)
    CHECK(wick_matgamma_expect({w1, w1}, {}, m, 2 * t) ==
          Catch::Approx(t * t * m * m + t * m));
    // E tr(C^2): C = W/2 with W ~ W_m(n, I), E[W^2] = n(n+m+1) I
    CWord w2{random_atom(), random_atom()};
    double n = 2 * t;
    CHECK(wick_matgamma_expect({w2}, {}, m, 2 * t) ==
          Catch::Approx(n * (n + m + 1) * m / 4.0));
  }
}

TEST_CASE("wick symbolic output matches numeric evaluation") {
  std::mt19937_64 gen(17);
  int m = 3;
  double n2t = 7.0;
  Matrix A0 = symmetrize(random_general(m, gen)), A1 = symmetrize(random_general(m, gen));
  // words tr(A0 C) tr(A1 C) and tr(A0 C A1 C)
  std::vector<CWord> prod{{fixed_atom(0), random_atom()}, {fixed_atom(1), random_atom()}};
  std::vector<CWord> mixed{{fixed_atom(0), random_atom(), fixed_atom(1), random_atom()}};
  for (const auto& words : {prod, mixed}) {
    auto sym = wick_matgamma_symbolic(words, m, n2t);
    double via_sym = 0;
    for (const auto& [mono, coef] : sym) via_sym += coef * eval_trace_mono(mono, {A0, A1});
    double direct = wick_matgamma_expect(words, {A0, A1}, m, n2t);
    CHECK(via_sym == Catch::Approx(direct).epsilon(1e-12));
  }
  // the known 2x2 dilation matrix on bidegree (1,1): images are
  //   E tr(A0 C) tr(A1 C) = t^2 b1 + t b2,  E tr(A0 C A1 C) = (t/2) b1 + (t^2 + t/2) b2
  double t = n2t / 2;
  auto sym = wick_matgamma_symbolic(prod, m, n2t);
  TraceMono b1 = make_trace_mono({{0}, {1}}, true);
  TraceMono b2 = make_trace_mono({{0, 1}}, true);
  CHECK(sym.at(b1) == Catch::Approx(t * t));
  CHECK(sym.at(b2) == Catch::Approx(t));
  auto sym2 = wick_matgamma_symbolic(mixed, m, n2t);
  CHECK(sym2.at(b1) == Catch::Approx(t / 2));
  CHECK(sym2.at(b2) == Catch::Approx(t * t + t / 2));
}

TEST_CASE("trace monomial bases have the expected dimensions") {
  CHECK(trace_monomial_basis({1, 1}, true).size() == 2);
  CHECK(trace_monomial_basis({2, 1}, true).size() == 4);
  CHECK(trace_monomial_basis({2, 2}, true).size() == 10);
  // tridegree (1,1,1): rotation-only sees 123 and 132 separately
  CHECK(trace_monomial_basis({1, 1, 1}, true).size() == 5);
  CHECK(trace_monomial_basis({1, 1, 1}, false).size() == 6);
}
