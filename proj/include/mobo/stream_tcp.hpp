#pragma once

#include <memory>
#include <string>

#include "mobo/stream.hpp"

namespace mobo {

// Serves a Broker over TCP with the newline-delimited frame protocol of
// docs/PROTOCOL.md. One thread per connection; remote publish/poll are
// semantically identical to in-process calls. Malformed frames get an error
// response and the connection survives.
class BrokerServer {
 public:
  // bind_addr is "host:port"; port 0 picks an ephemeral port.
  // Throws ConnectionError (non-retryable) when the address cannot be bound.
  BrokerServer(std::shared_ptr<Broker> broker, const std::string& bind_addr);
  ~BrokerServer();

  BrokerServer(const BrokerServer&) = delete;
  BrokerServer& operator=(const BrokerServer&) = delete;

  std::string address() const;  // actual host:port after binding
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocking TCP client. Not thread-safe; give each concurrent producer or
// consumer its own client. Connection failures throw ConnectionError with
// retryable=true (refused/reset) so callers can back off and retry.
class TcpClient : public BrokerClient {
 public:
  explicit TcpClient(const std::string& addr);
  ~TcpClient() override;

  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  void create_topic(const std::string& name) override;
  std::uint64_t publish(const std::string& topic, const std::string& key,
                        const std::string& payload) override;
  std::vector<MessageEnvelope> poll(ConsumerHandle& consumer,
                                    std::size_t max_messages,
                                    int timeout_ms) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mobo
