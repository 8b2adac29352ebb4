/**
 * Copyright 2026 The heraldsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HERALDSIM_ERRORS_HPP
#define HERALDSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heraldsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied argument violates a precondition.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// Operation requires a mode layout the system does not have
/// (e.g. an internal-basis rotation on a layout without a two-level
/// internal degree of freedom).
class UnsupportedLayout : public Error {
public:
    explicit UnsupportedLayout(const std::string& what) : Error(what) {}
};

/// A state has Fock terms outside the support expected by the caller.
/// Carries the textual form of the first offending term.
class SupportMismatch : public Error {
public:
    SupportMismatch(const std::string& what, std::string offending_term)
        : Error(what), offending_term_(std::move(offending_term)) {}

    const std::string& offending_term() const { return offending_term_; }

private:
    std::string offending_term_;
};

/// A scheme specification violates one of its validity constraints.
class SchemeError : public Error {
public:
    explicit SchemeError(const std::string& what) : Error(what) {}
};

/// No closed-form expression exists for the requested quantity.
class NotApplicable : public Error {
public:
    explicit NotApplicable(const std::string& what) : Error(what) {}
};

/// The request exceeds the hard-coded tractability bounds.
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what) : Error(what) {}
};

}  // namespace heraldsim

#endif  // HERALDSIM_ERRORS_HPP
