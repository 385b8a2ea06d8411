#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mobo/errors.hpp"

namespace mobo {

inline constexpr std::size_t kMaxPayloadBytes = 1 << 20;  // 1 MiB

// Topic-addressed, offset-ordered unit of broker traffic. Offsets per topic
// are dense and start at 0; payload bytes are opaque to the broker.
struct MessageEnvelope {
  std::string topic;
  std::uint64_t offset = 0;
  std::int64_t timestamp_ms = 0;  // broker-assigned, informational
  std::string key;
  std::string payload;
};

// Client-held read position. Cursors are independent across consumers, so
// every consumer sees the full log.
struct ConsumerHandle {
  std::string topic;
  std::uint64_t cursor = 0;
  std::string group;
};

// Single in-memory broker: named append-only logs with dense offsets and
// blocking reads. Topic appends are linearized under one lock; envelopes are
// immutable once appended. No partitions, no replication.
class Broker {
 public:
  using Clock = std::function<std::int64_t()>;

  Broker();                 // wall-clock timestamps
  explicit Broker(Clock clock);

  // Idempotent. Names must match [a-z0-9._-]+.
  void create_topic(const std::string& name);

  // Appends and returns the assigned offset (= previous log length).
  std::uint64_t publish(const std::string& topic, const std::string& key,
                        const std::string& payload);

  // Up to max_messages starting at `from`, in offset order. Blocks up to
  // timeout_ms when nothing is available yet, then returns what arrived
  // (possibly nothing). Never skips or repeats.
  std::vector<MessageEnvelope> fetch(const std::string& topic,
                                     std::uint64_t from,
                                     std::size_t max_messages,
                                     int timeout_ms) const;

  std::uint64_t topic_end(const std::string& topic) const;
  std::vector<std::string> topic_names() const;  // sorted

  static bool valid_topic_name(const std::string& name);

 private:
  const std::vector<MessageEnvelope>& log_locked(const std::string& topic) const;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<std::string, std::vector<MessageEnvelope>> topics_;
  Clock clock_;
};

// Transport-independent broker access; the controller and the experiment
// client only ever talk through this surface, so in-process and TCP
// campaigns run the same code path.
class BrokerClient {
 public:
  virtual ~BrokerClient() = default;
  virtual void create_topic(const std::string& name) = 0;
  virtual std::uint64_t publish(const std::string& topic, const std::string& key,
                                const std::string& payload) = 0;
  virtual std::vector<MessageEnvelope> poll(ConsumerHandle& consumer,
                                            std::size_t max_messages,
                                            int timeout_ms) = 0;
};

class InProcessClient : public BrokerClient {
 public:
  explicit InProcessClient(std::shared_ptr<Broker> broker)
      : broker_(std::move(broker)) {}

  void create_topic(const std::string& name) override {
    broker_->create_topic(name);
  }
  std::uint64_t publish(const std::string& topic, const std::string& key,
                        const std::string& payload) override {
    return broker_->publish(topic, key, payload);
  }
  std::vector<MessageEnvelope> poll(ConsumerHandle& consumer,
                                    std::size_t max_messages,
                                    int timeout_ms) override {
    auto envs = broker_->fetch(consumer.topic, consumer.cursor, max_messages,
                               timeout_ms);
    consumer.cursor += envs.size();
    return envs;
  }

 private:
  std::shared_ptr<Broker> broker_;
};

}  // namespace mobo
