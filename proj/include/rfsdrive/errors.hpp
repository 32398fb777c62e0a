// Copyright 2026 The rfsdrive Authors
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

#ifndef RFSDRIVE__ERRORS_HPP_
#define RFSDRIVE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rfsdrive
{

/// A caller broke a documented precondition (shape, range, index).
class ContractViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// A NaN or Inf appeared where only finite reals are allowed.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input data (scenario records, embedding files).
class IngestionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Unknown, duplicated or unparsable configuration keys.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rfsdrive

#endif  // RFSDRIVE__ERRORS_HPP_
