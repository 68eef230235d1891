// SPDX-License-Identifier: Apache-2.0
//
// oamrs: link-level simulator for rate-splitting OAM-MIMO downlinks
// Copyright (C) 2026 The oamrs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace oamrs {

// Precondition or invariant violation on caller-supplied values.
class DomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent configuration file.
class ConfigError : public DomainError
{
public:
    using DomainError::DomainError;
};

// Non-finite intermediate values inside an iterative computation.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace oamrs
