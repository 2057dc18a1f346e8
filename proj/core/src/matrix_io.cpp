// Copyright 2025 The phonocool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "phonocool/dynamics.hpp"
#include "phonocool/errors.hpp"

namespace phonocool {
namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_matrix(std::ostream& os, const CMatrix& m) {
  os << "phonocool-matrix " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      put(os, m(i, j).real());
      os << ' ';
      put(os, m(i, j).imag());
    }
    os << '\n';
  }
}

CMatrix read_matrix(std::istream& is) {
  std::string tag;
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> tag >> rows >> cols) || tag != "phonocool-matrix" || rows < 0 || cols < 0) {
    throw InvalidParameterError("read_matrix: bad header");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im)) throw InvalidParameterError("read_matrix: truncated data");
      m(i, j) = complex(re, im);
    }
  }
  return m;
}

void write_superoperator(std::ostream& os, const Superoperator& L, int max_rows) {
  if (L.matrix.rows() > max_rows) {
    throw InvalidParameterError("write_superoperator: " + std::to_string(L.matrix.rows()) +
                                " rows exceeds the dense dump limit " + std::to_string(max_rows));
  }
  write_matrix(os, CMatrix(L.matrix));
}

}  // namespace phonocool
