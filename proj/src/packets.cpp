#include "frameweave/packets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "frameweave/errors.hpp"

namespace frameweave {

namespace {

constexpr double kRankTol = 1e-12;
constexpr int kDenseLimit = 512;
constexpr double kCondLimit = 1e12;

std::vector<double> weights_or_ones(const FinitePacket& p) {
  return p.weights ? *p.weights : std::vector<double>(p.size(), 1.0);
}

}  // namespace

void FinitePacket::validate() const {
  if (ambient_dim < 1) throw std::invalid_argument("ambient dimension must be >= 1");
  if (spans.empty()) throw std::invalid_argument("packet has no subspaces");
  for (std::size_t j = 0; j < spans.size(); ++j) {
    if (spans[j].cols() == 0) {
      throw std::invalid_argument(fmt::format("subspace {} has an empty spanning list", j));
    }
    if (spans[j].rows() != ambient_dim) {
      throw std::invalid_argument(fmt::format("subspace {} vectors have dimension {}, expected {}",
                                              j, spans[j].rows(), ambient_dim));
    }
  }
  if (weights) {
    if (weights->size() != spans.size()) {
      throw std::invalid_argument("weight count does not match subspace count");
    }
    for (const double w : *weights) {
      if (!(w > 0.0)) throw std::invalid_argument("weights must be strictly positive");
    }
  }
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& span) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span);
  qr.setThreshold(kRankTol);
  const Eigen::Index r = qr.rank();
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(span.rows(), r);
  return Q;
}

Eigen::MatrixXd projection(const Eigen::MatrixXd& span) {
  const Eigen::MatrixXd Q = orthonormal_basis(span);
  return Q * Q.transpose();
}

Eigen::MatrixXd fusion_operator(const FinitePacket& packet) {
  packet.validate();
  const std::vector<double> w = weights_or_ones(packet);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(packet.ambient_dim, packet.ambient_dim);
  for (std::size_t j = 0; j < packet.size(); ++j) S += w[j] * w[j] * projection(packet.spans[j]);
  return S;
}

FusionBounds fusion_bounds(const FinitePacket& packet, int trials, std::uint64_t seed) {
  packet.validate();
  if (!packet.weights) throw std::invalid_argument("fusion_bounds needs subspace weights");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  FusionBounds fb;
  if (packet.ambient_dim <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fusion_operator(packet),
                                                      Eigen::EigenvaluesOnly);
    fb.A = std::max(0.0, es.eigenvalues()(0));
    fb.B = es.eigenvalues()(es.eigenvalues().size() - 1);
    return fb;
  }
  // Rayleigh quotients Σ ω_j² ‖P_j f‖² / ‖f‖² with Gaussian f.
  const std::vector<double> w = weights_or_ones(packet);
  std::vector<Eigen::MatrixXd> bases;
  for (const auto& s : packet.spans) bases.push_back(orthonormal_basis(s));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  fb.dense = false;
  fb.trials = trials;
  fb.A = std::numeric_limits<double>::infinity();
  fb.B = 0.0;
  Eigen::VectorXd f(packet.ambient_dim);
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = normal(rng);
    const double nf = f.squaredNorm();
    double q = 0.0;
    for (std::size_t j = 0; j < bases.size(); ++j) {
      q += w[j] * w[j] * (bases[j].transpose() * f).squaredNorm();
    }
    q /= nf;
    fb.A = std::min(fb.A, q);
    fb.B = std::max(fb.B, q);
  }
  return fb;
}

ExpansionResult fusion_decompose(const FinitePacket& packet, const Eigen::VectorXd& f) {
  packet.validate();
  if (f.size() != packet.ambient_dim) throw std::invalid_argument("vector dimension mismatch");
  const std::vector<double> w = weights_or_ones(packet);
  const Eigen::MatrixXd S = fusion_operator(packet);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  if (!(ev(0) > kRankTol * std::max(1.0, top))) {
    throw NotAFusionFrameError(
        fmt::format("frame operator is singular (smallest eigenvalue {:.3g})", ev(0)));
  }
  const Eigen::VectorXd g =
      es.eigenvectors() * (es.eigenvectors().transpose() * f).cwiseQuotient(ev);
  ExpansionResult r;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.size());
  for (std::size_t j = 0; j < packet.size(); ++j) {
    const Eigen::MatrixXd Q = orthonormal_basis(packet.spans[j]);
    Eigen::VectorXd fj = w[j] * w[j] * (Q * (Q.transpose() * g));
    sum += fj;
    r.components.push_back(std::move(fj));
  }
  r.residual_norm = (f - sum).norm();
  return r;
}

FinitePacket packet_from_frame(const Eigen::MatrixXd& frame,
                               const std::vector<std::vector<int>>& cover) {
  const auto K = static_cast<int>(frame.cols());
  if (K == 0) throw std::invalid_argument("frame has no vectors");
  std::vector<bool> seen(static_cast<std::size_t>(K), false);
  FinitePacket p;
  p.ambient_dim = static_cast<int>(frame.rows());
  for (const auto& sigma : cover) {
    if (sigma.empty()) throw std::invalid_argument("cover contains an empty index set");
    Eigen::MatrixXd span(frame.rows(), static_cast<Eigen::Index>(sigma.size()));
    for (std::size_t c = 0; c < sigma.size(); ++c) {
      const int k = sigma[c];
      if (k < 0 || k >= K) throw std::invalid_argument(fmt::format("cover index {} out of range", k));
      seen[static_cast<std::size_t>(k)] = true;
      span.col(static_cast<Eigen::Index>(c)) = frame.col(k);
    }
    p.spans.push_back(std::move(span));
  }
  for (int k = 0; k < K; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument(fmt::format("cover misses frame index {}", k));
    }
  }
  p.validate();
  return p;
}

FinitePacket map_packet(const FinitePacket& packet, const Eigen::MatrixXd& T) {
  packet.validate();
  if (T.rows() != packet.ambient_dim || T.cols() != packet.ambient_dim) {
    throw std::invalid_argument("T must be square with the ambient dimension");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kCondLimit)) {
    throw std::invalid_argument(fmt::format("T is numerically singular (condition {:.3g})", cond));
  }
  FinitePacket out = packet;
  for (auto& s : out.spans) s = T * s;
  return out;
}

FinitePacket enlarge_packet(const FinitePacket& packet,
                            const std::vector<Eigen::MatrixXd>& supersets) {
  packet.validate();
  if (supersets.size() != packet.size()) {
    throw std::invalid_argument("need one superset per subspace");
  }
  FinitePacket out = packet;
  for (std::size_t j = 0; j < packet.size(); ++j) {
    const Eigen::MatrixXd& U = supersets[j];
    if (U.rows() != packet.ambient_dim || U.cols() == 0) {
      throw std::invalid_argument(fmt::format("superset {} has the wrong shape", j));
    }
    const Eigen::MatrixXd Q = orthonormal_basis(U);
    const Eigen::MatrixXd& W = packet.spans[j];
    const double resid = (W - Q * (Q.transpose() * W)).norm();
    if (resid > 1e-10 * std::max(1.0, W.norm())) {
      throw std::invalid_argument(fmt::format("subspace {} is not contained in its superset", j));
    }
    out.spans[j] = U;
  }
  return out;
}

FinitePacket counterexample_packet(int M) {
  if (M < 2) throw std::invalid_argument("counterexample needs M >= 2");
  FinitePacket p;
  p.ambient_dim = M;
  for (int j = 0; j < M; ++j) {
    Eigen::MatrixXd span = Eigen::MatrixXd::Zero(M, j == 0 ? 1 : 2);
    span(0, 0) = 1.0;
    if (j > 0) span(j, 1) = 1.0;
    p.spans.push_back(std::move(span));
  }
  p.weights = std::vector<double>(static_cast<std::size_t>(M), 1.0);
  return p;
}

CounterexampleGrowth counterexample_growth(int M) {
  const FinitePacket p = counterexample_packet(M);
  const Eigen::MatrixXd S = fusion_operator(p);
  CounterexampleGrowth g;
  // e_k^T S e_k = Σ_j ‖P_j e_k‖².
  g.value_at_e1 = S(0, 0);
  g.value_at_ek = S(1, 1);
  for (int k = 2; k < M; ++k) {
    if (std::abs(S(k, k) - g.value_at_ek) > 1e-12) {
      throw std::logic_error("counterexample values differ across k >= 2");
    }
  }
  g.ratio = g.value_at_e1 / g.value_at_ek;
  return g;
}

ExpansionResult expand_in_packet(const FinitePacket& packet, const Eigen::VectorXd& f) {
  packet.validate();
  if (f.size() != packet.ambient_dim) throw std::invalid_argument("vector dimension mismatch");
  Eigen::Index total = 0;
  for (const auto& s : packet.spans) total += s.cols();
  Eigen::MatrixXd V(packet.ambient_dim, total);
  Eigen::Index col = 0;
  for (const auto& s : packet.spans) {
    V.middleCols(col, s.cols()) = s;
    col += s.cols();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(V);
  cod.setThreshold(kRankTol);
  if (cod.rank() < packet.ambient_dim) {
    throw NotAnInformationPacketError(fmt::format(
        "subspaces span a {}-dimensional space inside R^{}", cod.rank(), packet.ambient_dim));
  }
  const Eigen::VectorXd c = cod.solve(f);
  ExpansionResult r;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.size());
  col = 0;
  for (const auto& s : packet.spans) {
    Eigen::VectorXd fj = s * c.segment(col, s.cols());
    col += s.cols();
    sum += fj;
    r.components.push_back(std::move(fj));
  }
  r.residual_norm = (f - sum).norm();
  return r;
}

FinitePacket random_packet(int M, int count, int dim, std::uint64_t seed) {
  if (M < 1 || count < 1 || dim < 1 || dim > M) {
    throw std::invalid_argument("random_packet needs M >= 1, count >= 1, 1 <= dim <= M");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  FinitePacket p;
  p.ambient_dim = M;
  for (int j = 0; j < count; ++j) {
    Eigen::MatrixXd span(M, dim);
    for (Eigen::Index c = 0; c < span.cols(); ++c) {
      for (Eigen::Index r = 0; r < span.rows(); ++r) span(r, c) = normal(rng);
    }
    p.spans.push_back(std::move(span));
  }
  p.weights = std::vector<double>(static_cast<std::size_t>(count), 1.0);
  return p;
}

FinitePacket parse_packet(const std::string& text) {
  FinitePacket p;
  std::vector<double> weights;
  std::vector<std::vector<double>> current;
  std::optional<double> current_weight;
  int line_no = 0;

  auto flush = [&] {
    if (current.empty()) {
      if (current_weight) throw std::invalid_argument("weight line without vectors");
      return;
    }
    const auto M = static_cast<Eigen::Index>(current.front().size());
    Eigen::MatrixXd span(M, static_cast<Eigen::Index>(current.size()));
    for (std::size_t c = 0; c < current.size(); ++c) {
      for (Eigen::Index r = 0; r < M; ++r) {
        span(r, static_cast<Eigen::Index>(c)) = current[c][static_cast<std::size_t>(r)];
      }
    }
    p.spans.push_back(std::move(span));
    if (current_weight) weights.push_back(*current_weight);
    current.clear();
    current_weight.reset();
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#') continue;
    std::istringstream ls(line);
    if (line.compare(first, 6, "weight") == 0) {
      std::string kw;
      double w = 0.0;
      if (!(ls >> kw >> w)) throw std::invalid_argument(fmt::format("line {}: bad weight", line_no));
      current_weight = w;
      continue;
    }
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof()) throw std::invalid_argument(fmt::format("line {}: not a number", line_no));
    if (!p.spans.empty() || !current.empty()) {
      const std::size_t M = current.empty() ? static_cast<std::size_t>(p.spans.front().rows())
                                            : current.front().size();
      if (v.size() != M) {
        throw std::invalid_argument(
            fmt::format("line {}: expected {} entries, got {}", line_no, M, v.size()));
      }
    }
    current.push_back(std::move(v));
  }
  flush();
  if (p.spans.empty()) throw std::invalid_argument("packet file has no vectors");
  p.ambient_dim = static_cast<int>(p.spans.front().rows());
  if (!weights.empty()) {
    if (weights.size() != p.spans.size()) {
      throw std::invalid_argument("weights must be given for all subspaces or none");
    }
    p.weights = std::move(weights);
  }
  p.validate();
  return p;
}

FinitePacket load_packet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open packet file {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_packet(ss.str());
}

}  // namespace frameweave
