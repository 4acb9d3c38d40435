// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "model.hpp"

namespace chatweave {

// One transcript record: {"channel","seq","t_start","t_end","text"}.
// Unknown keys are ignored; duplicate keys, missing keys, wrong types and
// text that normalizes to nothing raise ParseError carrying line_number.
UtteranceSegment parse_transcript_line(const std::string& line, long line_number = 0);

// One comment record: {"channel","user","t","text"}. Same error contract.
Comment parse_comment_line(const std::string& line, long line_number = 0);

std::string write_transcript_line(const UtteranceSegment& segment);
std::string write_comment_line(const Comment& comment);

// Reads both record streams for a single channel, sorts by timestamp with
// stable ties, collapses duplicate comments (same user and text within
// config.dedup_window) to the earliest, and validates. Invariant violations
// are appended to *violations when given, otherwise raised as ParseError.
ChannelStream load_channel_stream(std::istream& transcript_source,
                                  std::istream& comment_source,
                                  const ExtractionConfig& config,
                                  std::vector<Violation>* violations = nullptr,
                                  const std::string& transcript_name = {},
                                  const std::string& comment_name = {});

ChannelStream load_channel_stream_files(const std::string& transcript_path,
                                        const std::string& comment_path,
                                        const ExtractionConfig& config,
                                        std::vector<Violation>* violations = nullptr);

// Writes the stream back in the external line format. Round-trips losslessly
// through load_channel_stream for any valid stream.
void save_channel_stream(const ChannelStream& stream,
                         std::ostream& transcript_sink,
                         std::ostream& comment_sink);

}  // namespace chatweave
