#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace thinfilm {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Per-corner values of one lattice cell, columns in the canonical z1..z8 order.
using CellMatrix = Eigen::Matrix<double, 3, 8>;
// One face (4 corners) of a cell, columns z1..z4 or z5..z8.
using FaceMatrix = Eigen::Matrix<double, 3, 4>;

// Errors carry the exit code the command line tool reports for them.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, 2) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what, 3) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, 4) {}
};

}  // namespace thinfilm
