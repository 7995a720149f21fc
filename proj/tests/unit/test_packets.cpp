#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "frameweave/errors.hpp"
#include "frameweave/packets.hpp"

using namespace frameweave;

namespace {

Eigen::VectorXd gaussian(int M, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(M);
  for (int i = 0; i < M; ++i) v(i) = nd(rng);
  return v;
}

}  // namespace

TEST_CASE("orthonormal bases and projections") {
  Eigen::MatrixXd span(4, 3);
  span << 1, 2, 0, 0, 0, 0, 1, 2, 1, 0, 0, 0;  // third column = 0
  const Eigen::MatrixXd Q = orthonormal_basis(span);
  CHECK(Q.cols() == 2);
  CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  const Eigen::MatrixXd P = projection(span);
  CHECK((P * P - P).norm() < 1e-12);
  CHECK((P - P.transpose()).norm() < 1e-12);
  CHECK((P * span - span).norm() < 1e-12);
}

TEST_CASE("fusion decomposition over random packets") {
  for (int t = 0; t < 100; ++t) {
    const FinitePacket p = random_packet(6, 4, 2, 1000 + t);
    std::mt19937_64 rng(t);
    const Eigen::VectorXd f = gaussian(6, rng);
    const auto r = fusion_decompose(p, f);
    CHECK(r.residual_norm <= 1e-10 * f.norm());
    for (std::size_t j = 0; j < p.size(); ++j) {
      const Eigen::MatrixXd P = projection(p.spans[j]);
      CHECK((P * r.components[j] - r.components[j]).norm() <= 1e-10 * f.norm());
    }
    const auto e = expand_in_packet(p, f);
    CHECK(e.residual_norm <= 1e-10 * f.norm());
  }
}

TEST_CASE("fusion bounds match the frame operator spectrum") {
  const FinitePacket p = random_packet(5, 3, 2, 7);
  const auto b = fusion_bounds(p, 100, 1);
  CHECK(b.dense);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fusion_operator(p));
  CHECK(b.A == doctest::Approx(es.eigenvalues().minCoeff()));
  CHECK(b.B == doctest::Approx(es.eigenvalues().maxCoeff()));

  // Large ambient dimension: sampled Rayleigh quotients stay inside the spectrum.
  const FinitePacket big = random_packet(600, 3, 250, 3);
  const auto s = fusion_bounds(big, 200, 2);
  CHECK_FALSE(s.dense);
  CHECK(s.trials == 200);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(fusion_operator(big));
  CHECK(s.A >= eb.eigenvalues().minCoeff() - 1e-9);
  CHECK(s.B <= eb.eigenvalues().maxCoeff() + 1e-9);

  FinitePacket unweighted = p;
  unweighted.weights.reset();
  CHECK_THROWS(fusion_bounds(unweighted, 10, 1));
}

TEST_CASE("counterexample growth ratio equals M") {
  for (int M : {2, 4, 8, 16, 64}) {
    const auto g = counterexample_growth(M);
    CHECK(g.value_at_e1 == doctest::Approx(M));
    CHECK(g.value_at_ek == doctest::Approx(1.0));
    CHECK(g.ratio == doctest::Approx(M));
    const auto b = fusion_bounds(counterexample_packet(M), 10, 1);
    CHECK(b.A == doctest::Approx(1.0));
    CHECK(b.B == doctest::Approx(M));
  }
}

TEST_CASE("failure modes are typed") {
  FinitePacket deficient;
  deficient.ambient_dim = 3;
  deficient.spans = {Eigen::MatrixXd::Identity(3, 1), Eigen::MatrixXd::Identity(3, 2)};
  deficient.weights = std::vector<double>{1.0, 1.0};
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS((expand_in_packet(deficient, f)), NotAnInformationPacketError);
  CHECK_THROWS_AS((fusion_decompose(deficient, f)), NotAFusionFrameError);

  FinitePacket bad = deficient;
  bad.spans[0] = Eigen::MatrixXd::Ones(2, 1);
  CHECK_THROWS_AS((bad.validate()), std::invalid_argument);
  bad = deficient;
  bad.weights = std::vector<double>{1.0, -1.0};
  CHECK_THROWS_AS((bad.validate()), std::invalid_argument);
}

TEST_CASE("well-conditioned maps preserve expansions") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    const FinitePacket p = random_packet(5, 3, 2, 500 + t);
    Eigen::MatrixXd T(5, 5);
    for (int c = 0; c < 5; ++c) T.col(c) = gaussian(5, rng);
    T += 5.0 * Eigen::MatrixXd::Identity(5, 5);
    const FinitePacket q = map_packet(p, T);
    const Eigen::VectorXd f = gaussian(5, rng);
    CHECK(expand_in_packet(q, f).residual_norm <= 1e-10 * f.norm());
  }
  Eigen::MatrixXd singular = Eigen::MatrixXd::Identity(5, 5);
  singular(4, 4) = 1e-14;
  CHECK_THROWS_AS((map_packet(random_packet(5, 3, 2, 1), singular)), std::invalid_argument);
}

TEST_CASE("enlarging subspaces keeps the packet property") {
  const FinitePacket p = random_packet(4, 3, 2, 9);
  std::vector<Eigen::MatrixXd> sup;
  std::mt19937_64 rng(1);
  for (const auto& s : p.spans) {
    Eigen::MatrixXd u(4, 3);
    u << s, gaussian(4, rng);
    sup.push_back(u);
  }
  const FinitePacket q = enlarge_packet(p, sup);
  const Eigen::VectorXd f = gaussian(4, rng);
  CHECK(expand_in_packet(q, f).residual_norm < 1e-10);
  std::vector<Eigen::MatrixXd> wrong(p.size(), Eigen::MatrixXd::Identity(4, 1));
  CHECK_THROWS(enlarge_packet(p, wrong));
}

TEST_CASE("packets from frame covers") {
  const Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(3, 3);
  const FinitePacket p = packet_from_frame(frame, {{0, 1}, {1, 2}});
  CHECK(p.size() == 2);
  CHECK(orthonormal_basis(p.spans[0]).cols() == 2);
  CHECK_THROWS(packet_from_frame(frame, {{0, 3}}));
}

TEST_CASE("plain-text packet format") {
  const std::string text =
      "# comment\n"
      "weight 2\n"
      "1 0 0\n"
      "0 1 0\n"
      "\n"
      "weight 1\n"
      "0 0 1\n";
  const FinitePacket p = parse_packet(text);
  CHECK(p.ambient_dim == 3);
  REQUIRE(p.size() == 2);
  CHECK(p.spans[0].cols() == 2);
  REQUIRE(p.weights);
  CHECK((*p.weights)[0] == 2.0);
  const auto b = fusion_bounds(p, 10, 1);
  CHECK(b.A == doctest::Approx(1.0));
  CHECK(b.B == doctest::Approx(4.0));

  CHECK_FALSE(parse_packet("1 0\n0 1\n").weights);
  CHECK_THROWS(parse_packet("1 0\n\n1 0 0\n"));
  CHECK_THROWS(parse_packet("weight 1\n1 0\n\n0 1\n"));
  CHECK_THROWS(parse_packet("1 x\n"));
  CHECK_THROWS(parse_packet(""));
  CHECK_THROWS(load_packet("/nonexistent/packet.txt"));
}
