// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ionload {

/// Argument outside the domain of a physical or statistical formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// More than one catalog row matched a lookup.
class AmbiguityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fit could not be carried out or did not converge.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed catalog, config or CSV input. The message names the field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ionload
