/*
 * Copyright 2026 The damp Authors
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

#pragma once

#include <string>
#include <vector>

#include "damp/signal.hpp"

namespace damp {

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// One value per line, optional single header line of non-numeric text.
Vec read_csv_column(const std::string& path);
void write_csv_column(const std::string& path, const Vec& values);

// Binary 8-bit PGM (P5). Values are read as reals in [0, 255]; on write
// they are rounded and clamped.
Signal read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Signal& img);

// Reads a signal from .pgm or .csv by extension.
Signal read_signal(const std::string& path);
void write_signal(const std::string& path, const Signal& s);

std::string read_file(const std::string& path);
// Write to a temporary sibling and rename, so readers never see a torn file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace damp
