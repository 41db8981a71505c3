#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pdecode/gf2.hpp"
#include "pdecode/potential.hpp"
#include "pdecode/rng.hpp"

using namespace pdecode;

namespace {

RealVec to_real(const BipolarWord& w) {
  RealVec x(w.size());
  for (size_t j = 0; j < w.size(); ++j) x[j] = static_cast<double>(w[j]);
  return x;
}

RealVec random_x(RngStream& rng, size_t n, double min_mag = 0.0) {
  RealVec x(n);
  for (auto& v : x) {
    const double mag = min_mag + (2.0 - min_mag) * rng.uniform();
    v = rng.uniform() < 0.5 ? -mag : mag;
  }
  return x;
}

// central finite differences of the energy
RealVec fd_gradient(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p,
                    double step) {
  RealVec g(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    RealVec up = x, dn = x;
    up[j] += step;
    dn[j] -= step;
    g[j] = (potential_energy(up, H, p) - potential_energy(dn, H, p)) / (2 * step);
  }
  return g;
}

} // namespace

TEST_CASE("bmod definition") {
  CHECK(bmod(3.5) == doctest::Approx(1.5));
  CHECK(bmod(2.0) == doctest::Approx(0.0));
  CHECK(bmod(-0.5) == doctest::Approx(1.5));
  CHECK(bmod(0.0) == 0.0);
  CHECK_THROWS_AS(bmod(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(bmod(std::nan("")), std::invalid_argument);
}

TEST_CASE("energy vanishes exactly on codewords and nowhere nearby") {
  const ParityCheckMatrix H = load_parity_check_file(PDECODE_CODES_DIR "/hamming_7_4.pcm");
  const Codebook book = enumerate_codebook(H);
  PotentialParams p;
  for (const BipolarWord& w : book.words) CHECK(potential_energy(to_real(w), H, p) == 0.0);

  // zero vector: each bipolar term is 1, each parity term is 1
  CHECK(potential_energy(RealVec(7, 0.0), H, p) == doctest::Approx(7.0 + 3.0));

  // flipping one sign of a codeword costs 4 per parity row touching it
  const BipolarWord& w = book.words[5];
  for (size_t j = 0; j < 7; ++j) {
    RealVec x = to_real(w);
    x[j] = -x[j];
    CHECK(potential_energy(x, H, p) == doctest::Approx(4.0 * H.col_support(j).size()));
  }
  // column 4 of the systematic H has |B(j)| = 2 -> energy 8 (hand value)
  RealVec x = to_real(w);
  x[4] = -x[4];
  REQUIRE(H.col_support(4).size() == 2);
  CHECK(potential_energy(x, H, p) == doctest::Approx(8.0));
}

TEST_CASE("energy positive away from the codeword set") {
  const ParityCheckMatrix H = load_parity_check_file(PDECODE_CODES_DIR "/hamming_7_4.pcm");
  const Codebook book = enumerate_codebook(H);
  PotentialParams p;
  RngStream rng(11, {0});
  size_t tested = 0;
  while (tested < 1000) {
    RealVec x = random_x(rng, 7);
    double dist = 1e9;
    for (const BipolarWord& w : book.words) {
      double d2 = 0;
      for (size_t j = 0; j < 7; ++j) {
        const double d = x[j] - static_cast<double>(w[j]);
        d2 += d * d;
      }
      dist = std::min(dist, std::sqrt(d2));
    }
    if (dist < 0.1) continue;
    ++tested;
    CHECK(potential_energy(x, H, p) > 1e-6);
  }
}

TEST_CASE("naive gradient hand example") {
  // single row A(1) = {1, 2}, x = (2, 1):
  // component 1: 4(4-1)2 + 2(2-1)1 = 26; component 2: 0 + 2(2-1)2 = 4
  const ParityCheckMatrix H = load_parity_check("1 2\n1 1\n");
  PotentialParams p;
  const RealVec g = potential_gradient_naive({2.0, 1.0}, H, p);
  CHECK(g[0] == doctest::Approx(26.0));
  CHECK(g[1] == doctest::Approx(4.0));
}

TEST_CASE("gradients vanish at codewords") {
  const ParityCheckMatrix H = load_parity_check_file(PDECODE_CODES_DIR "/bch_15_7.pcm");
  const Codebook book = enumerate_codebook(H);
  PotentialParams p;
  for (size_t wi = 0; wi < book.words.size(); wi += 17) {
    const RealVec x = to_real(book.words[wi]);
    for (double v : potential_gradient(x, H, p)) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    for (double v : potential_gradient_naive(x, H, p)) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("vectorized gradient equals the naive oracle away from zero") {
  PotentialParams p;
  for (const char* path : {PDECODE_CODES_DIR "/hamming_7_4.pcm", PDECODE_CODES_DIR "/bch_15_7.pcm",
                           PDECODE_CODES_DIR "/bch_31_15.pcm"}) {
    const ParityCheckMatrix H = load_parity_check_file(path);
    RngStream rng(13, {H.cols()});
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      const RealVec x = random_x(rng, H.cols(), 0.1);
      const RealVec a = potential_gradient(x, H, p);
      const RealVec b = potential_gradient_naive(x, H, p);
      for (size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("gradients match finite differences of the energy") {
  const ParityCheckMatrix H = load_parity_check_file(PDECODE_CODES_DIR "/bch_15_7.pcm");
  PotentialParams p;
  RngStream rng(17, {0});
  for (int t = 0; t < 10; ++t) {
    const RealVec x = random_x(rng, 15, 0.1);
    const RealVec fd = fd_gradient(x, H, p, 1e-5);
    const RealVec a = potential_gradient(x, H, p);
    const RealVec b = potential_gradient_naive(x, H, p);
    double den = 0;
    for (double v : fd) den = std::max(den, std::abs(v));
    for (size_t j = 0; j < x.size(); ++j) {
      CHECK(std::abs(a[j] - fd[j]) / den <= 1e-6);
      CHECK(std::abs(b[j] - fd[j]) / den <= 1e-6);
    }
  }
}

TEST_CASE("sign part of d is the product of signs") {
  const ParityCheckMatrix H = load_parity_check_file(PDECODE_CODES_DIR "/bch_15_7.pcm");
  RngStream rng(23, {0});
  for (int t = 0; t < 50; ++t) {
    const RealVec x = random_x(rng, 15, 0.05);
    for (size_t i = 0; i < H.rows(); ++i) {
      double flip = 0, prod = 1;
      for (size_t j : H.row_support(i)) {
        flip += (1.0 - sign_pos(x[j])) * 0.5;
        prod *= sign_pos(x[j]);
      }
      CHECK(1.0 - 2.0 * bmod(flip) == doctest::Approx(prod));
    }
  }
}

TEST_CASE("bipolar term of the gradient is odd") {
  // with beta -> parity term excluded via a codeword-sign pattern, check
  // 4 alpha (x^2 - 1) x flips sign with x on a plain single-row code
  const ParityCheckMatrix H = load_parity_check("1 2\n1 1\n");
  PotentialParams p;
  RngStream rng(29, {0});
  for (int t = 0; t < 20; ++t) {
    RealVec x = random_x(rng, 2, 0.1);
    RealVec nx = x;
    for (auto& v : nx) v = -v;
    // the parity term is even in x for a row of even weight, so the odd part
    // of the full gradient is exactly the bipolar term
    const RealVec g = potential_gradient(x, H, p);
    const RealVec gn = potential_gradient(nx, H, p);
    for (size_t j = 0; j < 2; ++j) {
      const double odd = 0.5 * (g[j] - gn[j]);
      CHECK(odd == doctest::Approx(4.0 * (x[j] * x[j] - 1.0) * x[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("clamp keeps the gradient finite at zero coordinates") {
  const ParityCheckMatrix H = load_parity_check("1 2\n1 1\n");
  PotentialParams p;
  const RealVec g = potential_gradient({0.0, 1.0}, H, p);
  for (double v : g) CHECK(std::isfinite(v));
  // sgn(0) = +1: the clamped coordinate is treated as +epsilon
  const RealVec gpos = potential_gradient({p.epsilon_clamp, 1.0}, H, p);
  CHECK(g[1] == doctest::Approx(gpos[1]));
}

TEST_CASE("parameter validation") {
  PotentialParams p;
  p.alpha = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = PotentialParams{};
  p.beta = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  const ParityCheckMatrix H = load_parity_check("1 2\n1 1\n");
  CHECK_THROWS_AS(potential_energy(RealVec(3, 0.0), H, PotentialParams{}), std::invalid_argument);
  CHECK_THROWS_AS(potential_gradient(RealVec(3, 0.0), H, PotentialParams{}), std::invalid_argument);
  CHECK_THROWS_AS(potential_gradient_naive(RealVec(3, 0.0), H, PotentialParams{}), std::invalid_argument);
}
