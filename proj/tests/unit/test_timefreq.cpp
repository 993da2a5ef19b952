#include "netstate/error.hpp"
#include "netstate/timefreq.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace netstate;
using cd = std::complex<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<double> real_part(const std::vector<cd>& s) {
  std::vector<double> out;
  for (auto v : s) out.push_back(v.real());
  return out;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_SUITE("timefreq") {
  TEST_CASE("ambiguity of a zero signal is zero") {
    const std::vector<cd> s(8, 0.0);
    const auto a = ambiguity(std::span<const cd>(s));
    CHECK(a.rows() == 8);
    CHECK(a.cols() == 8);
    CHECK(a.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("ambiguity of a unit impulse lives on the zero-lag column") {
    const std::vector<cd> s = {1.0, 0.0, 0.0, 0.0};
    const auto a = ambiguity(std::span<const cd>(s));
    for (int p = 0; p < 4; ++p) {
      CHECK(std::abs(a(p, 0) - cd(1.0)) < 1e-15);
      for (int m = 1; m < 4; ++m) CHECK(std::abs(a(p, m)) < 1e-15);
    }
  }

  TEST_CASE("ambiguity of a complex exponential matches direct summation") {
    const std::size_t n = 64;
    std::vector<cd> s(n);
    for (std::size_t u = 0; u < n; ++u) s[u] = std::polar(1.0, 2.0 * std::numbers::pi * 5.0 * u / 64.0);
    const auto a = ambiguity(std::span<const cd>(s));
    CHECK(max_abs_diff(a, oracle::ambiguity(s)) <= 1e-12);
    // |A| peaks on the theta = 0 row for every lag.
    for (Eigen::Index m = 0; m < a.cols(); ++m) {
      Eigen::Index row = 0;
      a.col(m).cwiseAbs().maxCoeff(&row);
      CHECK(row == 0);
    }
  }

  TEST_CASE("ambiguity rejects signals shorter than two samples") {
    const std::vector<cd> s = {1.0};
    CHECK(kind_of([&] { ambiguity(std::span<const cd>(s)); }) == ErrorKind::invalid_input);
    CHECK(kind_of([] { ambiguity(Signal{{1.0}, 100.0, 0.0}); }) == ErrorKind::invalid_input);
  }

  TEST_CASE("signal and kernel validation") {
    CHECK(kind_of([] { validate(Signal{{1.0, 2.0}, 0.0, 0.0}); }) == ErrorKind::invalid_input);
    CHECK(kind_of([] { validate(Signal{{1.0, std::nan("")}, 1.0, 0.0}); }) == ErrorKind::invalid_input);
    CHECK(kind_of([] { validate(KernelParams{0.0}); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { validate(KernelParams{-1.0}); }) == ErrorKind::invalid_config);
    CHECK_NOTHROW(validate(KernelParams{kInf}));
  }

  TEST_CASE("ambiguity conjugate symmetry") {
    for (std::size_t n : {31u, 32u}) {
      const auto s = oracle::random_signal(n, 11 + n);
      const auto a = ambiguity(std::span<const cd>(s));
      double worst = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t m = 0; m < n; ++m) {
          // Reflection of the self-paired Nyquist index is itself on even grids.
          if (n % 2 == 0 && (p == n / 2 || m == n / 2)) continue;
          const auto rp = static_cast<Eigen::Index>((n - p) % n);
          const auto rm = static_cast<Eigen::Index>((n - m) % n);
          const auto ip = static_cast<Eigen::Index>(p);
          const auto im = static_cast<Eigen::Index>(m);
          worst = std::max(worst, std::abs(a(rp, rm) - std::conj(a(ip, im))));
        }
      }
      CHECK(worst <= 1e-10);
    }
  }

  TEST_CASE("rid of a zero signal is zero") {
    const Tfd c = rid_rihaczek(Signal{std::vector<double>(16, 0.0), 100.0, 0.0}, KernelParams{});
    CHECK(c.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(c.n_time == 16);
    CHECK(c.n_freq == 9);
  }

  TEST_CASE("unbounded spread reproduces the Rihaczek distribution") {
    for (std::size_t n : {16u, 31u, 64u}) {
      const auto s = oracle::random_signal(n, 100 + n);
      const Tfd c = rid_rihaczek(std::span<const cd>(s), 1.0, KernelParams{kInf});
      CHECK(max_abs_diff(c.values, oracle::rihaczek(s)) <= 1e-10);

      const auto r = real_part(s);
      const Tfd cr = rid_rihaczek(Signal{r, 1.0, 0.0}, KernelParams{kInf});
      std::vector<cd> rc(r.begin(), r.end());
      CHECK(max_abs_diff(cr.values, oracle::rihaczek(rc)) <= 1e-10);
    }
  }

  TEST_CASE("direct quadruple-sum oracle agrees for short signals") {
    for (std::size_t n : {8u, 13u, 24u, 32u}) {
      for (double sigma : {0.01, 1.0, kInf}) {
        const auto s = oracle::random_signal(n, 7 * n);
        const auto expected = oracle::rid(s, sigma);
        const Tfd complex_path = rid_rihaczek(std::span<const cd>(s), 10.0, KernelParams{sigma});
        CHECK(max_abs_diff(complex_path.values, expected) <= 1e-9);

        const auto r = real_part(s);
        std::vector<cd> rc(r.begin(), r.end());
        const Tfd real_path = rid_rihaczek(Signal{r, 10.0, 0.0}, KernelParams{sigma});
        CHECK(max_abs_diff(real_path.values, oracle::rid(rc, sigma)) <= 1e-9);
      }
    }
  }

  TEST_CASE("pure tone concentrates energy at its frequency") {
    const std::size_t n = 64;
    const double fs = 64.0;
    const double f0 = fs / 8.0;
    std::vector<double> s(n);
    for (std::size_t u = 0; u < n; ++u) s[u] = std::cos(2.0 * std::numbers::pi * f0 * u / fs);
    const Tfd c = rid_rihaczek(Signal{s, fs, 0.0}, KernelParams{0.01});
    const auto nearest = static_cast<Eigen::Index>(std::lround(f0 * n / fs));
    for (Eigen::Index t = 4; t < 60; ++t) {
      Eigen::Index k = 0;
      c.values.row(t).cwiseAbs().maxCoeff(&k);
      CHECK(k == nearest);
    }
  }

  TEST_CASE("scaling the signal scales the distribution quadratically") {
    const auto base = real_part(oracle::random_signal(40, 5));
    const Tfd ref = rid_rihaczek(Signal{base, 1.0, 0.0}, KernelParams{});
    const double ref_norm = ref.values.norm();
    for (double c : {0.0, 1.0, 2.0}) {
      std::vector<double> scaled(base);
      for (auto& v : scaled) v *= c;
      const Tfd out = rid_rihaczek(Signal{scaled, 1.0, 0.0}, KernelParams{});
      CHECK((out.values - c * c * ref.values).norm() <= 1e-10 * c * c * ref_norm);
    }
  }

  TEST_CASE("frequency axis covers [0, fs/2] in increasing order") {
    for (std::size_t n : {9u, 10u}) {
      const Tfd c = rid_rihaczek(Signal{std::vector<double>(n, 1.0), 50.0, 0.0}, KernelParams{});
      CHECK(c.freq_axis_hz.size() == n / 2 + 1);
      CHECK(c.freq_axis_hz.front() == 0.0);
      CHECK(c.freq_axis_hz.back() <= 25.0);
      for (std::size_t k = 1; k < c.freq_axis_hz.size(); ++k) CHECK(c.freq_axis_hz[k] > c.freq_axis_hz[k - 1]);
      CHECK(static_cast<std::size_t>(c.values.rows()) == c.n_time);
      CHECK(static_cast<std::size_t>(c.values.cols()) == c.n_freq);
    }
  }

  TEST_CASE("selected bins equal the matching columns of the full distribution") {
    const auto s = real_part(oracle::random_signal(50, 9));
    const RidTransform rid(50, 100.0, KernelParams{});
    const Tfd full = rid.apply(std::span<const double>(s));
    const std::vector<std::size_t> bins = {2, 3, 4, 25};
    const auto part = rid.apply_bins(s, bins);
    for (std::size_t q = 0; q < bins.size(); ++q) {
      CHECK(part.col(static_cast<Eigen::Index>(q)) == full.values.col(static_cast<Eigen::Index>(bins[q])));
    }
    const std::vector<std::size_t> bad = {26};
    CHECK(kind_of([&] { rid.apply_bins(s, bad); }) == ErrorKind::invalid_input);
  }

  TEST_CASE("phase conventions") {
    Eigen::MatrixXcd m(1, 5);
    m << cd(1.0, 0.0), cd(0.0, 1.0), cd(0.0, 0.0), cd(-1.0, 0.0), cd(-1.0, -0.0);
    const auto p = phase(m);
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(p(0, 2) == 0.0);
    CHECK(p(0, 3) == std::numbers::pi);
    CHECK(p(0, 4) == std::numbers::pi);
  }

  TEST_CASE("phase values stay in (-pi, pi]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = real_part(oracle::random_signal(33, seed));
      const auto p = phase(rid_rihaczek(Signal{s, 1.0, 0.0}, KernelParams{}));
      CHECK(p.minCoeff() > -std::numbers::pi);
      CHECK(p.maxCoeff() <= std::numbers::pi);
      CHECK(p == oracle::phase(rid_rihaczek(Signal{s, 1.0, 0.0}, KernelParams{}).values));
    }
  }

  TEST_CASE("transform is deterministic") {
    const auto s = real_part(oracle::random_signal(45, 3));
    const Tfd a = rid_rihaczek(Signal{s, 1.0, 0.0}, KernelParams{});
    const Tfd b = rid_rihaczek(Signal{s, 1.0, 0.0}, KernelParams{});
    CHECK(a.values == b.values);
  }
}
