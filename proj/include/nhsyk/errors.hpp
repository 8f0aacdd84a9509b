// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nhsyk {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SymmetryViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoRamp : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoThoulessTime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorruptRecord : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nhsyk
