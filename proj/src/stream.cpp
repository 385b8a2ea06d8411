#include "mobo/stream.hpp"

#include <chrono>

namespace mobo {

namespace {

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Broker::Broker() : clock_(wall_clock_ms) {}

Broker::Broker(Clock clock) : clock_(std::move(clock)) {}

bool Broker::valid_topic_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void Broker::create_topic(const std::string& name) {
  if (!valid_topic_name(name))
    throw ProtocolError("invalid topic name '" + name + "'");
  std::lock_guard lock(mu_);
  topics_.try_emplace(name);
}

const std::vector<MessageEnvelope>& Broker::log_locked(
    const std::string& topic) const {
  auto it = topics_.find(topic);
  if (it == topics_.end()) throw ProtocolError("unknown topic '" + topic + "'");
  return it->second;
}

std::uint64_t Broker::publish(const std::string& topic, const std::string& key,
                              const std::string& payload) {
  if (payload.size() > kMaxPayloadBytes)
    throw ProtocolError("payload of " + std::to_string(payload.size()) +
                        " bytes exceeds the 1 MiB limit");
  std::lock_guard lock(mu_);
  auto it = topics_.find(topic);
  if (it == topics_.end()) throw ProtocolError("unknown topic '" + topic + "'");
  auto& log = it->second;
  const std::uint64_t offset = log.size();
  log.push_back(MessageEnvelope{topic, offset, clock_(), key, payload});
  cv_.notify_all();
  return offset;
}

std::vector<MessageEnvelope> Broker::fetch(const std::string& topic,
                                           std::uint64_t from,
                                           std::size_t max_messages,
                                           int timeout_ms) const {
  std::unique_lock lock(mu_);
  const auto* log = &log_locked(topic);
  if (from >= log->size() && timeout_ms > 0) {
    cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                 [&] { return from < log_locked(topic).size(); });
    log = &log_locked(topic);
  }
  std::vector<MessageEnvelope> out;
  for (std::uint64_t o = from; o < log->size() && out.size() < max_messages; ++o)
    out.push_back((*log)[o]);
  return out;
}

std::uint64_t Broker::topic_end(const std::string& topic) const {
  std::lock_guard lock(mu_);
  return log_locked(topic).size();
}

std::vector<std::string> Broker::topic_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> names;
  names.reserve(topics_.size());
  for (const auto& [name, _] : topics_) names.push_back(name);
  return names;
}

}  // namespace mobo
