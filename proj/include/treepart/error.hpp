// Copyright 2026 The treepart Authors.
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

#ifndef TREEPART_ERROR_HPP_
#define TREEPART_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace treepart {

// Every failure raised by the library derives from Error. The kind selects
// the CLI exit code.
enum class ErrorKind {
  kParse,
  kValidation,
  kInvalidArgument,
  kSingular,
  kInfeasible,
  kBudget,
  kModelBuild,
  kSolver,
  kUnsupported,
  kInvariant,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::kParse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

#define TREEPART_DEFINE_ERROR(Name, Kind)                    \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what)                   \
        : Error(ErrorKind::Kind, what) {}                    \
  }

TREEPART_DEFINE_ERROR(ValidationError, kValidation);
TREEPART_DEFINE_ERROR(InvalidArgument, kInvalidArgument);
TREEPART_DEFINE_ERROR(SingularSystem, kSingular);
TREEPART_DEFINE_ERROR(InfeasibleError, kInfeasible);
TREEPART_DEFINE_ERROR(BudgetExceeded, kBudget);
TREEPART_DEFINE_ERROR(ModelBuildError, kModelBuild);
TREEPART_DEFINE_ERROR(UnsupportedOperation, kUnsupported);
TREEPART_DEFINE_ERROR(InvariantViolation, kInvariant);
TREEPART_DEFINE_ERROR(IoError, kIo);

#undef TREEPART_DEFINE_ERROR

// Solver bridge failures carry a finer-grained reason.
class SolverError : public Error {
 public:
  enum class Reason { kNonzeroExit, kTimeout, kInfeasible, kBadOutput };
  SolverError(Reason reason, const std::string& what)
      : Error(reason == Reason::kInfeasible ? ErrorKind::kInfeasible
                                            : ErrorKind::kSolver,
              what),
        reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace treepart

#endif  // TREEPART_ERROR_HPP_
