// SPDX-License-Identifier: Apache-2.0
//
// lcsim - LiDAR-driven vehicular channel simulation library
// Copyright (C) 2026 The lcsim authors
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

#ifndef LCSIM_ERRORS_HPP
#define LCSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcsim
{

// Invalid configuration (CLI exit code 1)
class config_error : public std::runtime_error
{
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent data on disk / in memory (CLI exit code 2)
class data_error : public std::runtime_error
{
  public:
    explicit data_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace lcsim

#endif
