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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "convtrack/state_models.hpp"
#include "convtrack/tracker.hpp"

namespace convtrack {

/// One line of a KITTI tracking file. `id` is -1 for detection dumps, which
/// carry no track id column.
struct KittiRecord
{
  int frame = 0;
  int id = -1;
  std::string type;
  Detection box;
};

/// Frame index -> detections in file order.
using FrameDetections = std::map<int, std::vector<Detection>>;

/// Reads every record. Accepted layouts (whitespace separated):
///   17 columns  frame type trunc occ alpha x1 y1 x2 y2 h w l x y z ry score
///   17 columns  frame id type trunc occ alpha x1 y1 x2 y2 h w l x y z ry
///   18 columns  the labelled layout followed by a score
/// Locations are bottom-centred in a y-up camera frame; boxes come back
/// centred, with the ground plane spanned by (x, -z). Throws ParseError.
std::vector<KittiRecord> parse_records(std::istream & in);
std::vector<KittiRecord> parse_records_file(const std::filesystem::path & path);

/// Detections of class `type_filter` (all classes when empty) grouped by frame.
FrameDetections parse_detections(std::istream & in, const std::string & type_filter = "Car");
FrameDetections parse_detections_file(const std::filesystem::path & path, const std::string & type_filter = "Car");

/// Writes the 18 column labelled layout with 4 decimals.
void write_records(std::ostream & out, const std::vector<KittiRecord> & records);
void write_records_file(const std::filesystem::path & path, const std::vector<KittiRecord> & records);

/// Writes the 17 column detection layout (no id column), frame f of
/// `frames` as frame index f.
void write_detections(std::ostream & out, const std::vector<std::vector<Detection>> & frames,
  const std::string & type = "Car");

/// Confirmed tracks of every frame as labelled records.
std::vector<KittiRecord> track_records(const std::vector<FrameOutput> & outputs, const std::string & type = "Car");
void write_tracks(std::ostream & out, const std::vector<FrameOutput> & outputs, const std::string & type = "Car");
void write_tracks(const std::filesystem::path & path, const std::vector<FrameOutput> & outputs,
  const std::string & type = "Car");

/// Writes `content` next to `path` and renames it into place.
void atomic_write(const std::filesystem::path & path, const std::string & content);

}  // namespace convtrack
