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

#include "damp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "damp/errors.hpp"

namespace damp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ValidationError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

Vec read_csv_column(const std::string& path) {
  std::istringstream in(read_file(path));
  Vec out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto comma = line.find(',');
    if (comma != std::string::npos) line = line.substr(0, comma);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const char* b = line.data() + line.find_first_not_of(" \t");
    const char* e = line.data() + line.size();
    double v = 0.0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc()) {
      if (lineno == 1 && out.empty()) continue;  // header
      throw ValidationError(path + ":" + std::to_string(lineno) + ": not a number");
    }
    out.push_back(v);
  }
  return out;
}

void write_csv_column(const std::string& path, const Vec& values) {
  std::string s;
  s.reserve(values.size() * 20);
  for (double v : values) {
    s += format_double(v);
    s += '\n';
  }
  write_file_atomic(path, s);
}

namespace {

// Next whitespace-delimited token of a PNM header, skipping comments.
std::string pnm_token(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
  return buf.substr(start, pos - start);
}

}  // namespace

Signal read_pgm(const std::string& path) {
  std::string buf = read_file(path);
  std::size_t pos = 0;
  if (pnm_token(buf, pos) != "P5") throw ValidationError(path + ": not a P5 PGM");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(pnm_token(buf, pos));
    h = std::stoul(pnm_token(buf, pos));
    maxval = std::stoul(pnm_token(buf, pos));
  } catch (const std::exception&) {
    throw ValidationError(path + ": malformed PGM header");
  }
  ++pos;  // single whitespace after maxval
  if (maxval == 0 || maxval > 255) throw ValidationError(path + ": only 8-bit PGM supported");
  if (w == 0 || h == 0 || buf.size() < pos + w * h)
    throw ValidationError(path + ": truncated PGM data");
  Vec v(w * h);
  for (std::size_t i = 0; i < w * h; ++i)
    v[i] = static_cast<double>(static_cast<unsigned char>(buf[pos + i]));
  return Signal(std::move(v), h, w);
}

void write_pgm(const std::string& path, const Signal& img) {
  if (!img.is_grid()) throw LayoutError("write_pgm needs a grid signal");
  std::string s = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                  "\n255\n";
  for (double v : img.values) {
    double c = std::round(std::min(255.0, std::max(0.0, std::isfinite(v) ? v : 0.0)));
    s.push_back(static_cast<char>(static_cast<unsigned char>(c)));
  }
  write_file_atomic(path, s);
}

static bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Signal read_signal(const std::string& path) {
  if (ends_with(path, ".pgm")) return read_pgm(path);
  return Signal(read_csv_column(path));
}

void write_signal(const std::string& path, const Signal& s) {
  if (ends_with(path, ".pgm")) {
    write_pgm(path, s);
  } else {
    write_csv_column(path, s.values);
  }
}

}  // namespace damp
