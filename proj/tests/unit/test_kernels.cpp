#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "frameweave/frame_core.hpp"

using namespace frameweave;
namespace k = frameweave::kernels;

namespace {

bool bitwise_equal(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

std::vector<double> random_gammas(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("serial and omp kernels agree bit for bit") {
  const auto gen = make_powerlaw_wavelet(0.5, 1.0);
  const SystemParams params{2.0, 0.5, 2};
  const auto plan = plan_period(gen, params, 1024);
  const auto depth = truncation_depth(gen, params);
  const auto ladder = pattern_ladder(params, WeavingPattern::constant(2, 1), plan, depth);
  const auto choices = choice_ladder(params, plan, depth);
  const auto gammas = random_gammas(3000, plan.lo, plan.lo * plan.q, 5);
  const std::size_t n = gammas.size();

  for (int threads : {1, 2, 3, 4}) {
    CAPTURE(threads);
    k::omp::set_thread_cap(threads);

    std::vector<double> s(n), o(n);
    k::serial::multiplier_sweep(gen, ladder, 2.0, gammas, s);
    k::omp::multiplier_sweep(gen, ladder, 2.0, gammas, o);
    CHECK(bitwise_equal(s, o));

    std::vector<double> smin(n), smax(n), omin(n), omax(n);
    k::serial::adversary_sweep(gen, choices, 2.0, gammas, smin, smax);
    k::omp::adversary_sweep(gen, choices, 2.0, gammas, omin, omax);
    CHECK(bitwise_equal(smin, omin));
    CHECK(bitwise_equal(smax, omax));

    const int rows = 4;
    const int first = choices.first_row + 2;
    std::vector<double> st(static_cast<std::size_t>(rows * choices.width) * n);
    std::vector<double> ot(st.size());
    k::serial::term_table(gen, choices, first, rows, gammas, st);
    k::omp::term_table(gen, choices, first, rows, gammas, ot);
    CHECK(bitwise_equal(st, ot));

    std::vector<int> pick{0, 1, 1, 0};
    std::vector<double> sc(n), oc(n);
    k::serial::table_combine(s, st, choices.width, pick, 0.5, sc);
    k::omp::table_combine(s, st, choices.width, pick, 0.5, oc);
    CHECK(bitwise_equal(sc, oc));

    std::vector<double> sm(n), om(n);
    k::serial::masked_multiplier_sweep(gen, ladder, 2.0, first, first + rows - 1, gammas, sm);
    k::omp::masked_multiplier_sweep(gen, ladder, 2.0, first, first + rows - 1, gammas, om);
    CHECK(bitwise_equal(sm, om));

    const GaborGenerator g(0.0, 3.0);
    const auto xs = random_gammas(2000, -4.0, 4.0, 9);
    std::vector<double> nodes;
    for (int m = -10; m <= 10; ++m) nodes.push_back(2.0 * m);
    std::vector<double> gs(xs.size()), go(xs.size());
    k::serial::gabor_sweep(g, nodes, 3.0, xs, gs);
    k::omp::gabor_sweep(g, nodes, 3.0, xs, go);
    CHECK(bitwise_equal(gs, go));
    std::vector<double> a1(xs.size()), a2(xs.size()), b1(xs.size()), b2(xs.size());
    k::serial::gabor_adversary_sweep(g, 1.0, 2, 3.0, xs, a1, a2);
    k::omp::gabor_adversary_sweep(g, 1.0, 2, 3.0, xs, b1, b2);
    CHECK(bitwise_equal(a1, b1));
    CHECK(bitwise_equal(a2, b2));
  }
  k::omp::set_thread_cap(1);
}

TEST_CASE("masked sweep plus the masked rows rebuilds the full multiplier") {
  const auto gen = make_powerlaw_wavelet(0.5, 1.0);
  const SystemParams params{2.0, 0.5, 2};
  const auto plan = plan_period(gen, params, 512);
  const auto depth = truncation_depth(gen, params);
  const auto ladder = pattern_ladder(params, WeavingPattern::constant(2, 0), plan, depth);
  const auto choices = choice_ladder(params, plan, depth);
  const auto gammas = plan.abscissae();
  const std::size_t n = gammas.size();
  const int first = ladder.first_row + 1, rows = 3;

  std::vector<double> full(n), base(n), table(static_cast<std::size_t>(rows * 2) * n), out(n);
  k::serial::multiplier_sweep(gen, ladder, 2.0, gammas, full);
  k::serial::masked_multiplier_sweep(gen, ladder, 1.0, first, first + rows - 1, gammas, base);
  k::serial::term_table(gen, choices, first, rows, gammas, table);
  const std::vector<int> zeros(rows, 0);
  k::serial::table_combine(base, table, 2, zeros, 2.0, out);
  for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(full[i]).epsilon(1e-13));
}

TEST_CASE("extremes report the first occurrence") {
  const std::vector<double> v{3.0, 1.0, 5.0, 1.0, 5.0};
  const auto e = k::find_extremes(v);
  CHECK(e.min_value == 1.0);
  CHECK(e.argmin == 1);
  CHECK(e.max_value == 5.0);
  CHECK(e.argmax == 2);
}
