#pragma once

#include "thinfilm/energy.hpp"
#include "thinfilm/types.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace thinfilm {

/// Symmetric bilinear form on 3 x C matrices (C = 8 for cells, 4 for faces),
/// stored as a dense (3C) x (3C) matrix in column-major vectorization.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  QuadraticForm(Eigen::MatrixXd m, int columns);

  int columns() const { return columns_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double norm() const { return m_.norm(); }

  double eval(const Eigen::Ref<const Eigen::MatrixXd>& a) const;
  double pair(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b) const;

 private:
  Eigen::VectorXd flatten(const Eigen::Ref<const Eigen::MatrixXd>& a) const;

  Eigen::MatrixXd m_;
  int columns_ = 0;
};

inline double q_eval(const QuadraticForm& q, const Eigen::Ref<const Eigen::MatrixXd>& a) { return q.eval(a); }
inline double q_pair(const QuadraticForm& q, const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b) {
  return q.pair(a, b);
}

/// Central-difference Hessian of f at x with one Richardson step
/// (4 H(step/2) - H(step)) / 3, symmetrized.
Eigen::MatrixXd finite_difference_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double step = 1e-5);

enum class HessianMethod { finite_difference, analytic };

/// Q_cell = D^2 W_cell(Z) and Q_surf = D^2 W_surf(Z^(1)).
QuadraticForm hessian_cell(const CellLaw& law, HessianMethod method = HessianMethod::finite_difference);
QuadraticForm hessian_surface(const SurfaceLaw& law, HessianMethod method = HessianMethod::finite_difference);

/// (b (x) e3) Z, i.e. the matrix whose i-th row is b_i times the third row of Z.
CellMatrix vertical_shift(const Vec3& b);
/// sym(b (x) e3) Z.
CellMatrix vertical_shift_sym(const Vec3& b);

/// Minimization over vertical shifts, b(A) = argmin_b Q_cell(A + (b (x) e3) Z).
class RelaxationSolver {
 public:
  RelaxationSolver() = default;
  explicit RelaxationSolver(const QuadraticForm& q_cell);

  const QuadraticForm& form() const { return q_; }
  const Mat3& gram() const { return k_; }
  // b(A) = linear_map() * vec(A), with vec the column-major flattening.
  const Eigen::Matrix<double, 3, 24>& linear_map() const { return map_; }

  Vec3 relax_b(const CellMatrix& a) const;
  double q_rel(const CellMatrix& a) const;
  // Same minimization over sym(b (x) e3) Z.
  Vec3 relax_b_sym(const CellMatrix& a) const;
  double q_rel_sym(const CellMatrix& a) const;

 private:
  QuadraticForm q_;
  Mat3 k_ = Mat3::Zero();
  Mat3 k_sym_ = Mat3::Zero();
  Eigen::LDLT<Mat3> k_ldlt_;
  Eigen::LDLT<Mat3> k_sym_ldlt_;
  Eigen::Matrix<double, 3, 24> map_ = Eigen::Matrix<double, 3, 24>::Zero();
};

Mat3 embed_in_plane(const Mat2& a);

double q2(const RelaxationSolver& rel, const Mat2& a);
double q2_surf(const QuadraticForm& q_surf, const Mat2& a);

/// Randomized check of W_cell(P w5..P w8, P w1..P w4) = W_cell(w) and
/// W_surf(P w) = W_surf(w) for the reflection P = diag(1, 1, -1).
bool check_antiplane_symmetry(const AtomisticModel& model, std::uint64_t seed = 7, int samples = 200);

/// All forms entering the limit functionals for one model.
struct LimitForms {
  QuadraticForm cell;
  QuadraticForm surf;
  RelaxationSolver rel;
  bool antiplane_symmetric = false;

  static LimitForms assemble(const AtomisticModel& model, HessianMethod method = HessianMethod::finite_difference);
};

/// Dense matrices and the relaxation Gram matrix as a JSON document.
std::string export_forms_json(const LimitForms& forms);

}  // namespace thinfilm
