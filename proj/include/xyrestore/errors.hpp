// Copyright 2026 The xyrestore Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace xyrestore {

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** A requested size exceeds what the dense representation supports. */
class CapacityError : public Error {
 public:
  using Error::Error;
};

/** Operand dimensions do not agree. */
class DimensionError : public Error {
 public:
  using Error::Error;
};

/** A matrix failed a Hermiticity, unitarity or density check. */
class MatrixPropertyError : public Error {
 public:
  using Error::Error;
};

/** A matrix has a nonzero block between sectors of different parity. */
class ParityError : public Error {
 public:
  ParityError(int row_block, int col_block, double norm);
  int row_block() const { return row_block_; }
  int col_block() const { return col_block_; }

 private:
  int row_block_;
  int col_block_;
};

/** An argument is outside the domain of an operation. */
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/** The restoring solver accepted no solution. */
class NoSolutionError : public Error {
 public:
  NoSolutionError(int attempts, double best_residual);
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace xyrestore
