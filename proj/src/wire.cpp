#include "mobo/wire.hpp"

#include <array>

#include <json.hpp>

namespace mobo::wire {

namespace {

using nlohmann::json;

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::array<int, 256> decode_table() {
  std::array<int, 256> t{};
  t.fill(-1);
  for (int i = 0; i < 64; ++i) t[static_cast<unsigned char>(kAlphabet[i])] = i;
  return t;
}

const std::array<int, 256> kDecode = decode_table();

}  // namespace

std::string base64_encode(const std::string& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string base64_decode(const std::string& text) {
  if (text.size() % 4 != 0)
    throw ProtocolError("base64: length not a multiple of 4");
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2)
          throw ProtocolError("base64: misplaced padding");
        vals[k] = 0;
        ++pad;
      } else {
        if (pad > 0) throw ProtocolError("base64: data after padding");
        vals[k] = kDecode[static_cast<unsigned char>(c)];
        if (vals[k] < 0) throw ProtocolError("base64: invalid character");
      }
    }
    const unsigned v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
    out += static_cast<char>((v >> 16) & 0xff);
    if (pad < 2) out += static_cast<char>((v >> 8) & 0xff);
    if (pad < 1) out += static_cast<char>(v & 0xff);
  }
  return out;
}

std::string encode_frame(const Frame& f) {
  json j;
  j["op"] = f.op;
  if (f.topic) j["topic"] = *f.topic;
  if (f.key) j["key"] = *f.key;
  if (f.payload) j["payload"] = base64_encode(*f.payload);
  if (f.offset) j["offset"] = *f.offset;
  if (f.timestamp) j["timestamp"] = *f.timestamp;
  if (f.max_messages) j["max"] = *f.max_messages;
  if (f.timeout_ms) j["timeout_ms"] = *f.timeout_ms;
  if (f.error) j["error"] = *f.error;
  return j.dump();
}

Frame decode_frame(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed frame: ") + e.what());
  }
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw ProtocolError("malformed frame: missing op");
  Frame f;
  f.op = j["op"].get<std::string>();
  try {
    if (j.contains("topic")) f.topic = j["topic"].get<std::string>();
    if (j.contains("key")) f.key = j["key"].get<std::string>();
    if (j.contains("payload"))
      f.payload = base64_decode(j["payload"].get<std::string>());
    if (j.contains("offset")) f.offset = j["offset"].get<std::uint64_t>();
    if (j.contains("timestamp")) f.timestamp = j["timestamp"].get<std::int64_t>();
    if (j.contains("max")) f.max_messages = j["max"].get<std::uint64_t>();
    if (j.contains("timeout_ms")) f.timeout_ms = j["timeout_ms"].get<std::int64_t>();
    if (j.contains("error")) f.error = j["error"].get<std::string>();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed frame field: ") + e.what());
  }
  return f;
}

std::string transcript_line(const MessageEnvelope& e) {
  Frame f;
  f.op = "msg";
  f.topic = e.topic;
  f.key = e.key;
  f.payload = e.payload;
  f.offset = e.offset;
  return encode_frame(f);
}

MessageEnvelope parse_transcript_line(const std::string& line) {
  Frame f;
  try {
    f = decode_frame(line);
  } catch (const ProtocolError& e) {
    throw IntegrityError(std::string("transcript: ") + e.what());
  }
  if (f.op != "msg" || !f.topic || !f.offset || !f.payload)
    throw IntegrityError("transcript: line is not a msg frame");
  MessageEnvelope env;
  env.topic = *f.topic;
  env.offset = *f.offset;
  env.key = f.key.value_or("");
  env.payload = *f.payload;
  return env;
}

}  // namespace mobo::wire
