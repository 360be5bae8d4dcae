#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qgames/errors.hpp"
#include "qgames/random.hpp"

namespace qgames {

/// Unit vector on the Bloch sphere. Outcome +1 of the associated projective
/// measurement is the projector onto this direction.
template <typename Scalar>
class BlochVector {
 public:
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  BlochVector() : v_(0, 0, 1) {}

  explicit BlochVector(const Vector3& v) : v_(v) {
    if (std::abs(v_.norm() - Scalar(1)) > Scalar(1e-12))
      throw DomainError("Bloch vector is not unit norm");
  }

  BlochVector(Scalar x, Scalar y, Scalar z) : BlochVector(Vector3(x, y, z)) {}

  /// Rescales a non-zero vector onto the sphere.
  static BlochVector normalized(const Vector3& v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(0))) throw DomainError("cannot normalize a zero vector");
    return BlochVector(Vector3(v / n));
  }

  /// Direction in the x-z plane at `theta` radians from +z towards +x.
  static BlochVector in_xz_plane(Scalar theta) {
    return BlochVector(Vector3(std::sin(theta), Scalar(0), std::cos(theta)));
  }

  const Vector3& vec() const { return v_; }
  Scalar x() const { return v_.x(); }
  Scalar y() const { return v_.y(); }
  Scalar z() const { return v_.z(); }

  BlochVector operator-() const { return BlochVector(Vector3(-v_)); }

 private:
  Vector3 v_;
};

/// One Bloch vector per setting for each of the two parties.
template <typename Scalar>
struct MeasurementFrame {
  std::vector<BlochVector<Scalar>> alice;
  std::vector<BlochVector<Scalar>> bob;

  void validate() const {
    if (alice.empty() || bob.empty()) throw ShapeError("measurement frame has an empty party");
  }
};

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Pauli matrix sigma_k, k in {0: identity, 1: x, 2: y, 3: z}.
template <typename Scalar>
Matrix2c<Scalar> pauli(int k) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> m;
  switch (k) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw DomainError("pauli index out of range");
  }
  return m;
}

template <typename Scalar>
Matrix4c<Scalar> kron(const Matrix2c<Scalar>& a, const Matrix2c<Scalar>& b) {
  Matrix4c<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// The observable a.sigma with eigenvalues +-1.
template <typename Scalar>
Matrix2c<Scalar> observable(const BlochVector<Scalar>& a) {
  return a.x() * pauli<Scalar>(1) + a.y() * pauli<Scalar>(2) + a.z() * pauli<Scalar>(3);
}

/// Two-qubit density matrix, validated once at construction. The Pauli
/// expansion rho = (I + rA.sigma x I + I x rB.sigma + sum T_ij sigma_i x sigma_j)/4
/// is cached so that correlators are 3x3 contractions.
template <typename Scalar>
class TwoQubitState {
 public:
  using Density = Matrix4c<Scalar>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

  static TwoQubitState from_density(const Density& rho, std::string label = {}) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > Scalar(1e-12))
      throw DomainError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - std::complex<Scalar>(1)) > Scalar(1e-12))
      throw DomainError("density matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Density> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < Scalar(-1e-10))
      throw DomainError("density matrix is not positive semidefinite");
    return TwoQubitState(rho, std::move(label));
  }

  const Density& density() const { return rho_; }
  const std::string& label() const { return label_; }

  /// T_ij = Tr(rho sigma_i x sigma_j).
  const Matrix3& correlation_matrix() const { return t_; }
  /// Bloch vectors of the reduced states.
  const Vector3& alice_bloch() const { return ra_; }
  const Vector3& bob_bloch() const { return rb_; }

  Scalar purity() const { return (rho_ * rho_).trace().real(); }

 private:
  TwoQubitState(const Density& rho, std::string label) : rho_(rho), label_(std::move(label)) {
    const auto id = pauli<Scalar>(0);
    for (int i = 0; i < 3; ++i) {
      ra_(i) = (rho_ * kron<Scalar>(pauli<Scalar>(i + 1), id)).trace().real();
      rb_(i) = (rho_ * kron<Scalar>(id, pauli<Scalar>(i + 1))).trace().real();
      for (int j = 0; j < 3; ++j)
        t_(i, j) = (rho_ * kron<Scalar>(pauli<Scalar>(i + 1), pauli<Scalar>(j + 1))).trace().real();
    }
  }

  Density rho_;
  std::string label_;
  Matrix3 t_;
  Vector3 ra_;
  Vector3 rb_;
};

/// |psi-> = (|01> - |10>)/sqrt(2).
template <typename Scalar>
TwoQubitState<Scalar> make_singlet() {
  Eigen::Matrix<std::complex<Scalar>, 4, 1> psi;
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  psi << 0, s, -s, 0;
  return TwoQubitState<Scalar>::from_density(psi * psi.adjoint(), "singlet");
}

/// rho_p = (1-p)/4 I + p |psi-><psi-|.
template <typename Scalar>
TwoQubitState<Scalar> make_werner(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1))) throw DomainError("Werner weight must lie in [0, 1]");
  const auto singlet = make_singlet<Scalar>();
  Matrix4c<Scalar> rho = (Scalar(1) - p) / Scalar(4) * Matrix4c<Scalar>::Identity() + p * singlet.density();
  return TwoQubitState<Scalar>::from_density(rho, "werner(" + std::to_string(p) + ")");
}

/// <(a.sigma) x (b.sigma)>.
template <typename Scalar>
Scalar correlator(const TwoQubitState<Scalar>& state, const BlochVector<Scalar>& a,
                  const BlochVector<Scalar>& b) {
  return a.vec().dot(state.correlation_matrix() * b.vec());
}

template <typename Scalar>
Scalar alice_marginal(const TwoQubitState<Scalar>& state, const BlochVector<Scalar>& a) {
  return a.vec().dot(state.alice_bloch());
}

template <typename Scalar>
Scalar bob_marginal(const TwoQubitState<Scalar>& state, const BlochVector<Scalar>& b) {
  return b.vec().dot(state.bob_bloch());
}

/// Joint outcome law, index 2*i + j with i, j = 0 for outcome +1 and 1 for -1.
template <typename Scalar>
std::array<Scalar, 4> joint_distribution(const TwoQubitState<Scalar>& state, const BlochVector<Scalar>& a,
                                         const BlochVector<Scalar>& b) {
  const Scalar ma = alice_marginal(state, a);
  const Scalar mb = bob_marginal(state, b);
  const Scalar e = correlator(state, a, b);
  std::array<Scalar, 4> p{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Scalar alpha = i == 0 ? 1 : -1;
      const Scalar beta = j == 0 ? 1 : -1;
      p[2 * i + j] = std::max(Scalar(0), (1 + alpha * ma + beta * mb + alpha * beta * e) / 4);
    }
  return p;
}

/// Draws one pair of +-1 outcomes from the joint law.
template <typename Scalar>
std::pair<int, int> sample_outcomes(const TwoQubitState<Scalar>& state, const BlochVector<Scalar>& a,
                                    const BlochVector<Scalar>& b, RandomStream& rng) {
  const auto p = joint_distribution(state, a, b);
  const Scalar u = static_cast<Scalar>(rng.uniform()) * (p[0] + p[1] + p[2] + p[3]);
  Scalar acc = 0;
  int k = 0;
  for (; k < 3; ++k) {
    acc += p[k];
    if (u < acc) break;
  }
  return {k / 2 == 0 ? 1 : -1, k % 2 == 0 ? 1 : -1};
}

/// E(A0B0) + E(A0B1) + E(A1B0) - E(A1B1).
template <typename Scalar>
Scalar chsh_value(const TwoQubitState<Scalar>& state, const MeasurementFrame<Scalar>& frame) {
  if (frame.alice.size() != 2 || frame.bob.size() != 2)
    throw ShapeError("CHSH needs exactly two settings per party");
  return correlator(state, frame.alice[0], frame.bob[0]) + correlator(state, frame.alice[0], frame.bob[1]) +
         correlator(state, frame.alice[1], frame.bob[0]) - correlator(state, frame.alice[1], frame.bob[1]);
}

/// A0 = z, A1 = x, B0 = -(z+x)/sqrt2, B1 = -(z-x)/sqrt2. Bob's directions are
/// reversed relative to the textbook frame because the singlet anticorrelates;
/// with them the CHSH combination on rho_p is +2 sqrt(2) p.
template <typename Scalar>
MeasurementFrame<Scalar> chsh_optimal_frame() {
  using V = typename BlochVector<Scalar>::Vector3;
  MeasurementFrame<Scalar> f;
  f.alice = {BlochVector<Scalar>(0, 0, 1), BlochVector<Scalar>(1, 0, 0)};
  f.bob = {BlochVector<Scalar>::normalized(V(-1, 0, -1)), BlochVector<Scalar>::normalized(V(1, 0, -1))};
  return f;
}

using BlochVectord = BlochVector<double>;
using MeasurementFramed = MeasurementFrame<double>;
using TwoQubitStated = TwoQubitState<double>;

}  // namespace qgames
