// Copyright 2026 The fluxqit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace fluxqit {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid space, device or schedule configuration.
struct ConfigurationError : Error {
    using Error::Error;
};

/// Operand dimensions do not fit together.
struct DimensionError : Error {
    using Error::Error;
};

/// An operator kind was addressed to a slot that cannot host it.
struct SlotMismatchError : Error {
    using Error::Error;
};

/// Argument outside the domain of a closed-form expression.
struct DomainError : Error {
    using Error::Error;
};

/// A model precondition (e.g. Raman resonance) does not hold.
struct ConstraintViolation : Error {
    using Error::Error;
};

/// Caller-supplied state or amplitudes are invalid (e.g. not normalized).
struct InputError : Error {
    using Error::Error;
};

/// The integrator lost more norm than allowed. Carries the observed drift.
struct IntegrationError : Error {
    IntegrationError(const std::string& what, double drift) : Error(what), drift(drift) {}
    double drift;
};

}  // namespace fluxqit
