#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace orthoroots::linalg {

/// Dense row-major square matrix, just enough for the eigenvalue oracle.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> data;

  explicit Matrix(std::size_t size) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Diagonal similarity scaling (powers of two) that equalizes row and column
/// norms. Keeps Hessenberg structure.
void balance(Matrix& a);

/// All eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
/// The input is destroyed. Throws ConvergenceError if an eigenvalue needs
/// more than 60 iterations.
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix a);

}  // namespace orthoroots::linalg
