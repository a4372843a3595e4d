#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace subcool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a precondition (bad dimension, rank,
/// site index, malformed configuration, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The post-selected measurement branch died: the outcome probability of a
/// step fell below the extinction threshold.
class ExtinctionError : public Error {
 public:
  ExtinctionError(int step, double probability)
      : Error("post-selected branch extinct at step " + std::to_string(step) +
              " (outcome probability " + std::to_string(probability) + ")"),
        step_(step),
        probability_(probability) {}

  int step() const noexcept { return step_; }
  double probability() const noexcept { return probability_; }

 private:
  int step_;
  double probability_;
};

/// Open-system integration lost trace or positivity beyond tolerance.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace subcool
