// Copyright 2026 The qtransfer Authors
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

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace qtransfer {

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double value);

/// Plain-text matrix: a "rows cols" header line, then one line per row with
/// space-separated entries in format_double notation.
void write_matrix_text(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_text(std::istream& in);

}  // namespace qtransfer
