#ifndef SEQAR_TYPES_HPP
#define SEQAR_TYPES_HPP

#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "seqar/errors.hpp"

namespace seqar {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Coefficients (theta_1, ..., theta_p) of the model
///   x_n = theta_1 x_{n-1} + ... + theta_p x_{n-p} + eps_n.
/// Always non-empty with finite entries.
class ParamVector {
 public:
  explicit ParamVector(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
    validate();
  }
  ParamVector(std::initializer_list<double> coeffs)
      : coeffs_(Eigen::Map<const Eigen::VectorXd>(
            coeffs.begin(), static_cast<Eigen::Index>(coeffs.size()))) {
    validate();
  }
  explicit ParamVector(std::span<const double> coeffs)
      : coeffs_(Eigen::Map<const Eigen::VectorXd>(
            coeffs.data(), static_cast<Eigen::Index>(coeffs.size()))) {
    validate();
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  double operator[](int i) const { return coeffs_[i]; }
  std::vector<double> to_vector() const {
    return {coeffs_.data(), coeffs_.data() + coeffs_.size()};
  }

 private:
  void validate() const {
    if (coeffs_.size() < 1) throw InvalidArgument("theta must have p >= 1");
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      if (!std::isfinite(coeffs_[i]))
        throw InvalidArgument("theta entries must be finite");
  }

  Eigen::VectorXd coeffs_;
};

}  // namespace seqar

#endif  // SEQAR_TYPES_HPP
