// Copyright 2026 The toepnorm Authors
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

#ifndef TOEPNORM_TOEPNORM_HPP
#define TOEPNORM_TOEPNORM_HPP

#include "toepnorm/bounds.hpp"
#include "toepnorm/io.hpp"
#include "toepnorm/lti.hpp"
#include "toepnorm/protocols.hpp"
#include "toepnorm/toeplitz.hpp"
#include "toepnorm/verify.hpp"

namespace toepnorm {

/// The n x n section of the convolution operator of a system: first column
/// is the impulse response prefix.
inline ToeplitzSection toeplitz_section_of(const LtiSystem& sys, std::size_t n) {
  return ToeplitzSection(detail::impulse_coeffs(sys, n), n);
}

}  // namespace toepnorm

#endif  // TOEPNORM_TOEPNORM_HPP
