// Copyright 2026 The qsl-rtn Authors
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

namespace qslrtn {

enum class ErrorKind {
    BlochOutOfBall,
    InvalidState,
    InvalidParams,
    NegativeTime,
    KinkAtZero,
    OverlapExceedsPurity,
    QuadratureNotConverged,
    FrozenDynamics,
    DomainError,
    StepUnderflow,
    InvalidSpec,
    Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BlochOutOfBall: return "BlochOutOfBall";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::KinkAtZero: return "KinkAtZero";
    case ErrorKind::OverlapExceedsPurity: return "OverlapExceedsPurity";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::FrozenDynamics: return "FrozenDynamics";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace qslrtn
