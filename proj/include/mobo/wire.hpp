#pragma once

#include <optional>
#include <string>

#include "mobo/stream.hpp"

// Newline-delimited frame grammar shared by the TCP protocol and the on-disk
// transcript. Each frame is one compact JSON object per line; the exact
// grammar lives in docs/PROTOCOL.md. Payload bytes travel base64-encoded.

namespace mobo::wire {

struct Frame {
  std::string op;
  std::optional<std::string> topic;
  std::optional<std::string> key;
  std::optional<std::string> payload;  // raw bytes (decoded)
  std::optional<std::uint64_t> offset;
  std::optional<std::int64_t> timestamp;
  std::optional<std::uint64_t> max_messages;
  std::optional<std::int64_t> timeout_ms;
  std::optional<std::string> error;
};

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);  // ProtocolError on bad input

// One line, no trailing newline; JSON keys in canonical (sorted) order.
std::string encode_frame(const Frame& f);
Frame decode_frame(const std::string& line);  // ProtocolError on malformed input

// Canonical transcript projection of an envelope: a msg frame carrying
// topic, offset, key and payload. Timestamps are broker-local metadata and
// stay out of the transcript so reruns compare byte-for-byte.
std::string transcript_line(const MessageEnvelope& e);
MessageEnvelope parse_transcript_line(const std::string& line);

}  // namespace mobo::wire
