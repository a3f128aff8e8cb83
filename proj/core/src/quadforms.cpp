#include "thinfilm/quadforms.hpp"

#include "thinfilm/lattice.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace thinfilm {

QuadraticForm::QuadraticForm(Eigen::MatrixXd m, int columns) : m_(std::move(m)), columns_(columns) {
  if (m_.rows() != 3 * columns || m_.cols() != 3 * columns) {
    throw std::invalid_argument("quadratic form size does not match the column count");
  }
}

Eigen::VectorXd QuadraticForm::flatten(const Eigen::Ref<const Eigen::MatrixXd>& a) const {
  if (a.rows() != 3 || a.cols() != columns_) {
    throw std::invalid_argument("matrix shape does not match the quadratic form");
  }
  Eigen::VectorXd v(3 * columns_);
  for (int l = 0; l < columns_; ++l) {
    v.segment<3>(3 * l) = a.col(l);
  }
  return v;
}

double QuadraticForm::eval(const Eigen::Ref<const Eigen::MatrixXd>& a) const {
  const Eigen::VectorXd v = flatten(a);
  return v.dot(m_ * v);
}

double QuadraticForm::pair(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b) const {
  return flatten(a).dot(m_ * flatten(b));
}

namespace {

Eigen::MatrixXd central_hessian(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                double h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      auto at = [&](double si, double sj) {
        p = x;
        p(i) += si * h;
        p(j) += sj * h;
        return f(p);
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      if (!std::isfinite(v)) {
        throw NumericError("non-finite finite difference in Hessian assembly");
      }
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

}  // namespace

Eigen::MatrixXd finite_difference_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double step) {
  const Eigen::MatrixXd coarse = central_hessian(f, x, step);
  const Eigen::MatrixXd fine = central_hessian(f, x, 0.5 * step);
  Eigen::MatrixXd h = (4.0 * fine - coarse) / 3.0;
  return 0.5 * (h + h.transpose());
}

namespace {

template <int C>
Eigen::Matrix<double, 3, C> unflatten(const Eigen::VectorXd& v) {
  Eigen::Matrix<double, 3, C> a;
  for (int l = 0; l < C; ++l) a.col(l) = v.template segment<3>(3 * l);
  return a;
}

template <int C>
Eigen::VectorXd flatten_fixed(const Eigen::Matrix<double, 3, C>& a) {
  Eigen::VectorXd v(3 * C);
  for (int l = 0; l < C; ++l) v.template segment<3>(3 * l) = a.col(l);
  return v;
}

}  // namespace

QuadraticForm hessian_cell(const CellLaw& law, HessianMethod method) {
  const CellMatrix& z = reference_cell();
  if (method == HessianMethod::analytic) {
    Eigen::MatrixXd h = law.kind == BulkKind::mass_spring ? wcell_mass_spring_hessian(z, law.spring)
                                                          : wcell_pair_hessian(z, law.pair);
    if (law.penalty) {
      const PenaltyParams pen = *law.penalty;
      h += finite_difference_hessian([&](const Eigen::VectorXd& v) { return chi_penalty(unflatten<8>(v), pen); },
                                     flatten_fixed<8>(z));
    }
    return QuadraticForm(std::move(h), 8);
  }
  return QuadraticForm(
      finite_difference_hessian([&](const Eigen::VectorXd& v) { return law.energy(unflatten<8>(v)); }, flatten_fixed<8>(z)),
      8);
}

QuadraticForm hessian_surface(const SurfaceLaw& law, HessianMethod method) {
  const FaceMatrix z1 = bottom_face(reference_cell());
  if (law.kind == SurfaceKind::none) {
    return QuadraticForm(Eigen::MatrixXd::Zero(12, 12), 4);
  }
  if (method == HessianMethod::analytic) {
    return QuadraticForm(law.kind == SurfaceKind::mass_spring ? wsurf_mass_spring_hessian(z1, law.spring)
                                                              : wsurf_pair_hessian(z1, law.pair),
                         4);
  }
  return QuadraticForm(
      finite_difference_hessian([&](const Eigen::VectorXd& v) { return law.energy(unflatten<4>(v)); }, flatten_fixed<4>(z1)),
      4);
}

CellMatrix vertical_shift(const Vec3& b) { return b * reference_cell().row(2); }

CellMatrix vertical_shift_sym(const Vec3& b) {
  const Vec3 e3 = Vec3::UnitZ();
  const Mat3 s = 0.5 * (b * e3.transpose() + e3 * b.transpose());
  return s * reference_cell();
}

RelaxationSolver::RelaxationSolver(const QuadraticForm& q_cell) : q_(q_cell) {
  if (q_.columns() != 8) {
    throw std::invalid_argument("relaxation needs a cell form");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k_(i, j) = q_.pair(vertical_shift(Vec3::Unit(i)), vertical_shift(Vec3::Unit(j)));
      k_sym_(i, j) = q_.pair(vertical_shift_sym(Vec3::Unit(i)), vertical_shift_sym(Vec3::Unit(j)));
    }
  }
  k_ldlt_.compute(k_);
  k_sym_ldlt_.compute(k_sym_);
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(k_);
  if (k_ldlt_.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, k_.norm())) {
    throw NumericError("vertical shift Gram matrix is not positive definite; the cell law violates the growth condition");
  }
  Eigen::Matrix<double, 3, 24> rows;
  for (int i = 0; i < 3; ++i) {
    const CellMatrix e = vertical_shift(Vec3::Unit(i));
    Eigen::Matrix<double, 24, 1> v;
    for (int l = 0; l < 8; ++l) v.segment<3>(3 * l) = e.col(l);
    rows.row(i) = -(q_.matrix() * v).transpose();
  }
  map_ = k_ldlt_.solve(rows);
}

Vec3 RelaxationSolver::relax_b(const CellMatrix& a) const {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r(i) = -q_.pair(vertical_shift(Vec3::Unit(i)), a);
  return k_ldlt_.solve(r);
}

double RelaxationSolver::q_rel(const CellMatrix& a) const { return q_.eval(a + vertical_shift(relax_b(a))); }

Vec3 RelaxationSolver::relax_b_sym(const CellMatrix& a) const {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r(i) = -q_.pair(vertical_shift_sym(Vec3::Unit(i)), a);
  return k_sym_ldlt_.solve(r);
}

double RelaxationSolver::q_rel_sym(const CellMatrix& a) const {
  return q_.eval(a + vertical_shift_sym(relax_b_sym(a)));
}

Mat3 embed_in_plane(const Mat2& a) {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = a;
  return m;
}

double q2(const RelaxationSolver& rel, const Mat2& a) {
  return rel.q_rel(embed_in_plane(a) * reference_cell());
}

double q2_surf(const QuadraticForm& q_surf, const Mat2& a) {
  return q_surf.eval(embed_in_plane(a) * bottom_face(reference_cell()));
}

bool check_antiplane_symmetry(const AtomisticModel& model, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.2);
  const Mat3 p = Vec3(1.0, 1.0, -1.0).asDiagonal();
  for (int s = 0; s < samples; ++s) {
    CellMatrix g = reference_cell();
    for (int l = 0; l < 8; ++l)
      for (int r = 0; r < 3; ++r) g(r, l) += noise(rng);
    CellMatrix t;
    t.leftCols<4>() = p * g.rightCols<4>();
    t.rightCols<4>() = p * g.leftCols<4>();
    const double w = model.cell.energy(g);
    const double wt = model.cell.energy(t);
    const FaceMatrix face = bottom_face(g);
    const double ws = model.surface.energy(face);
    const double wst = model.surface.energy(p * face);
    if (std::abs(w - wt) > 1e-10 * (1.0 + std::abs(w)) || std::abs(ws - wst) > 1e-10 * (1.0 + std::abs(ws))) {
      return false;
    }
  }
  return true;
}

LimitForms LimitForms::assemble(const AtomisticModel& model, HessianMethod method) {
  LimitForms f;
  f.cell = hessian_cell(model.cell, method);
  f.surf = hessian_surface(model.surface, method);
  f.rel = RelaxationSolver(f.cell);
  f.antiplane_symmetric = check_antiplane_symmetry(model);
  return f;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string export_forms_json(const LimitForms& forms) {
  nlohmann::json doc;
  doc["layout"] = "column-major, entry (r, l) at index r + 3 l";
  doc["q_cell"] = matrix_json(forms.cell.matrix());
  doc["q_surf"] = matrix_json(forms.surf.matrix());
  doc["relaxation_gram"] = matrix_json(forms.rel.gram());
  return doc.dump(2);
}

}  // namespace thinfilm
