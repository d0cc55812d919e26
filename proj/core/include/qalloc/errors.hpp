// Copyright 2026 The qalloc Authors
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
#include <vector>

namespace qalloc {

// 1-based position into an input file, {0,0} when synthetic.
struct Span {
  int line = 0;
  int column = 0;
  bool known() const { return line > 0; }
};

enum class ErrorKind {
  // lang-core
  CaptureError,
  // frontend
  ParseError,
  // source type checker
  UnusedVariable,
  UnknownVariable,
  DuplicateVariable,
  BudgetExceeded,
  ArityMismatch,
  BranchMismatch,
  SignatureInferenceFailure,
  // target type checker
  ConnectivityViolation,
  InstantiationConflict,
  ConstraintUnsatisfied,
  NonInjectiveInstantiation,
  MalformedSignature,
  WellFormednessViolation,
  // graph algorithms
  DisconnectedInput,
  NoEmbedding,
  InvalidMap,
  TooLarge,
  DeviceTooSmall,
  // allocator
  InternalPostconditionViolation,
  MissingOccupant,
  // simulator
  StuckNoFreeQubit,
  StuckIllFormed,
  ConnectivityStuck,
  FuelExhausted,
  TooLargeWithoutHint,
  BranchStructureMismatch,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, Span span = {})
      : std::runtime_error(std::move(message)), kind_(kind), span_(span) {}

  ErrorKind kind() const { return kind_; }
  Span span() const { return span_; }

 private:
  ErrorKind kind_;
  Span span_;
};

// Parse failures carry the token set the parser would have accepted.
class ParseError : public Error {
 public:
  ParseError(std::string message, Span span, std::vector<std::string> expected = {})
      : Error(ErrorKind::ParseError, std::move(message), span),
        expected_(std::move(expected)) {}

  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

}  // namespace qalloc
