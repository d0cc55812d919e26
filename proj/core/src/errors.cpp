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

#include "qalloc/errors.hpp"

namespace qalloc {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CaptureError: return "CaptureError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnusedVariable: return "UnusedVariable";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::BranchMismatch: return "BranchMismatch";
    case ErrorKind::SignatureInferenceFailure: return "SignatureInferenceFailure";
    case ErrorKind::ConnectivityViolation: return "ConnectivityViolation";
    case ErrorKind::InstantiationConflict: return "InstantiationConflict";
    case ErrorKind::ConstraintUnsatisfied: return "ConstraintUnsatisfied";
    case ErrorKind::NonInjectiveInstantiation: return "NonInjectiveInstantiation";
    case ErrorKind::MalformedSignature: return "MalformedSignature";
    case ErrorKind::WellFormednessViolation: return "WellFormednessViolation";
    case ErrorKind::DisconnectedInput: return "DisconnectedInput";
    case ErrorKind::NoEmbedding: return "NoEmbedding";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DeviceTooSmall: return "DeviceTooSmall";
    case ErrorKind::InternalPostconditionViolation: return "InternalPostconditionViolation";
    case ErrorKind::MissingOccupant: return "MissingOccupant";
    case ErrorKind::StuckNoFreeQubit: return "StuckNoFreeQubit";
    case ErrorKind::StuckIllFormed: return "StuckIllFormed";
    case ErrorKind::ConnectivityStuck: return "ConnectivityStuck";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::TooLargeWithoutHint: return "TooLargeWithoutHint";
    case ErrorKind::BranchStructureMismatch: return "BranchStructureMismatch";
  }
  return "UnknownError";
}

}  // namespace qalloc
