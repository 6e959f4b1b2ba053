// Copyright 2026 The convtrack Authors
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

#include "convtrack/kitti_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

bool parse_int(std::string_view s, int & value)
{
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

double parse_double(std::string_view s, std::size_t line, const char * field)
{
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError(line, std::string("cannot parse ") + field + " '" + std::string(s) + "'");
  }
  return value;
}

KittiRecord parse_line(const std::vector<std::string_view> & tok, std::size_t line)
{
  KittiRecord rec;
  int probe = 0;
  const bool labelled = tok.size() >= 2 && parse_int(tok[1], probe);
  std::size_t base = 0;  // index of the type column
  bool has_score = true;
  if (labelled) {
    if (tok.size() != 17 && tok.size() != 18) {
      throw ParseError(line, "expected 17 or 18 columns, got " + std::to_string(tok.size()));
    }
    rec.id = probe;
    base = 2;
    has_score = tok.size() == 18;
  } else {
    if (tok.size() != 17) {
      throw ParseError(line, "expected 17 columns, got " + std::to_string(tok.size()));
    }
    base = 1;
  }
  if (!parse_int(tok[0], rec.frame) || rec.frame < 0) {
    throw ParseError(line, "bad frame index '" + std::string(tok[0]) + "'");
  }
  if (labelled && rec.id < 0) {
    throw ParseError(line, "negative track id");
  }
  rec.type = std::string(tok[base]);
  // trunc, occ, alpha and the 2D box are read for validation only
  for (std::size_t k = base + 1; k < base + 8; ++k) {
    parse_double(tok[k], line, "2D field");
  }
  const double h = parse_double(tok[base + 8], line, "height");
  const double w = parse_double(tok[base + 9], line, "width");
  const double l = parse_double(tok[base + 10], line, "length");
  const double x = parse_double(tok[base + 11], line, "x");
  const double y = parse_double(tok[base + 12], line, "y");
  const double z = parse_double(tok[base + 13], line, "z");
  const double ry = parse_double(tok[base + 14], line, "rotation_y");
  if (!(h > 0.0) || !(w > 0.0) || !(l > 0.0)) {
    throw ParseError(line, "box dimensions must be positive");
  }
  Detection& d = rec.box;
  d.px = x;
  d.py = -z;
  d.pz = y + 0.5 * h;
  d.yaw = ry;
  d.l = l;
  d.w = w;
  d.h = h;
  d.score = has_score ? parse_double(tok[base + 15], line, "score") : 1.0;
  return rec;
}

}  // namespace

std::vector<KittiRecord> parse_records(std::istream & in)
{
  std::vector<KittiRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    const auto tok = split(line);
    if (tok.empty()) {
      continue;
    }
    records.push_back(parse_line(tok, number));
  }
  if (in.bad()) {
    throw InputError("read failure after line " + std::to_string(number));
  }
  return records;
}

std::vector<KittiRecord> parse_records_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  try {
    return parse_records(in);
  } catch (const ParseError & e) {
    throw ParseError(e.line(), path.string() + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

FrameDetections parse_detections(std::istream & in, const std::string & type_filter)
{
  FrameDetections out;
  for (KittiRecord & rec : parse_records(in)) {
    if (type_filter.empty() || rec.type == type_filter) {
      out[rec.frame].push_back(rec.box);
    }
  }
  return out;
}

FrameDetections parse_detections_file(const std::filesystem::path & path, const std::string & type_filter)
{
  FrameDetections out;
  for (KittiRecord & rec : parse_records_file(path)) {
    if (type_filter.empty() || rec.type == type_filter) {
      out[rec.frame].push_back(rec.box);
    }
  }
  return out;
}

void write_records(std::ostream & out, const std::vector<KittiRecord> & records)
{
  char buf[512];
  for (const KittiRecord & r : records) {
    const Detection & d = r.box;
    std::snprintf(
      buf, sizeof(buf),
      "%d %d %s 0 0 -10 0.0000 0.0000 0.0000 0.0000 %.4f %.4f %.4f %.4f %.4f %.4f %.4f %.4f\n", r.frame,
      r.id, r.type.c_str(), d.h, d.w, d.l, d.px, d.pz - 0.5 * d.h, -d.py, d.yaw, d.score);
    out << buf;
  }
}

void write_detections(std::ostream & out, const std::vector<std::vector<Detection>> & frames, const std::string & type)
{
  char buf[512];
  for (std::size_t f = 0; f < frames.size(); ++f) {
    for (const Detection & d : frames[f]) {
      std::snprintf(
        buf, sizeof(buf),
        "%zu %s 0 0 -10 0.0000 0.0000 0.0000 0.0000 %.4f %.4f %.4f %.4f %.4f %.4f %.4f %.4f\n", f, type.c_str(),
        d.h, d.w, d.l, d.px, d.pz - 0.5 * d.h, -d.py, d.yaw, d.score);
      out << buf;
    }
  }
}

void atomic_write(const std::filesystem::path & path, const std::string & content)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InputError("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      throw InputError("write failure on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place at " + path.string());
  }
}

void write_records_file(const std::filesystem::path & path, const std::vector<KittiRecord> & records)
{
  std::ostringstream os;
  write_records(os, records);
  atomic_write(path, os.str());
}

std::vector<KittiRecord> track_records(const std::vector<FrameOutput> & outputs, const std::string & type)
{
  std::vector<KittiRecord> records;
  for (const FrameOutput & frame : outputs) {
    for (const ReportedTrack & t : frame.tracks) {
      if (t.status != TrackStatus::kConfirmed) {
        continue;
      }
      KittiRecord r;
      r.frame = frame.frame;
      r.id = t.id;
      r.type = type;
      r.box = measurement_project(t.state);
      r.box.yaw = normalize_angle(r.box.yaw);
      r.box.score = t.score;
      records.push_back(std::move(r));
    }
  }
  return records;
}

void write_tracks(std::ostream & out, const std::vector<FrameOutput> & outputs, const std::string & type)
{
  write_records(out, track_records(outputs, type));
}

void write_tracks(const std::filesystem::path & path, const std::vector<FrameOutput> & outputs, const std::string & type)
{
  write_records_file(path, track_records(outputs, type));
}

}  // namespace convtrack
