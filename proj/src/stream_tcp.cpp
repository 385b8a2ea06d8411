#include "mobo/stream_tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

#include "mobo/wire.hpp"

namespace mobo {

namespace {

constexpr std::size_t kMaxLineBytes = 4 << 20;

struct AddrParts {
  std::string host;
  std::uint16_t port;
};

AddrParts parse_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos)
    throw ConnectionError("address '" + addr + "' is not host:port", false);
  AddrParts p;
  p.host = addr.substr(0, colon);
  try {
    const int port = std::stoi(addr.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    p.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception&) {
    throw ConnectionError("address '" + addr + "' has a bad port", false);
  }
  return p;
}

sockaddr_in make_sockaddr(const AddrParts& p) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(p.port);
  if (p.host.empty() || p.host == "*") {
    sa.sin_addr.s_addr = htonl(INADDR_ANY);
  } else if (inet_pton(AF_INET, p.host.c_str(), &sa.sin_addr) != 1) {
    if (p.host == "localhost")
      inet_pton(AF_INET, "127.0.0.1", &sa.sin_addr);
    else
      throw ConnectionError("cannot parse host '" + p.host + "'", false);
  }
  return sa;
}

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off,
                             MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(std::string("send failed: ") + std::strerror(errno),
                            true);
    }
    off += static_cast<std::size_t>(n);
  }
}

// Buffered line reader over a socket. Returns std::nullopt on clean EOF.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  std::optional<std::string> next_line() {
    for (;;) {
      const auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return line;
      }
      if (buf_.size() > kMaxLineBytes)
        throw ProtocolError("frame exceeds the line limit");
      char chunk[16384];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n == 0) return std::nullopt;
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ConnectionError(std::string("recv failed: ") + std::strerror(errno),
                              true);
      }
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buf_;
};

std::string error_frame(const std::string& message) {
  wire::Frame f;
  f.op = "error";
  f.error = message;
  return wire::encode_frame(f) + "\n";
}

}  // namespace

struct BrokerServer::Impl {
  std::shared_ptr<Broker> broker;
  int listen_fd = -1;
  std::string bound_addr;
  std::thread accept_thread;
  std::mutex conn_mu;
  std::vector<int> conn_fds;
  std::vector<std::thread> conn_threads;
  std::atomic<bool> stopping{false};

  void serve_connection(int fd) {
    LineReader reader(fd);
    try {
      for (;;) {
        auto line = reader.next_line();
        if (!line) break;
        if (line->empty()) continue;
        std::string response;
        try {
          response = handle(*line);
        } catch (const ProtocolError& e) {
          response = error_frame(e.what());
        }
        write_all(fd, response);
      }
    } catch (const std::exception&) {
      // connection torn down mid-request; nothing to answer to
    }
    ::close(fd);
  }

  std::string handle(const std::string& line) {
    const wire::Frame req = wire::decode_frame(line);
    if (req.op == "create_topic") {
      if (!req.topic) throw ProtocolError("create_topic: missing topic");
      broker->create_topic(*req.topic);
      wire::Frame ok;
      ok.op = "ok";
      return wire::encode_frame(ok) + "\n";
    }
    if (req.op == "publish") {
      if (!req.topic || !req.payload)
        throw ProtocolError("publish: missing topic or payload");
      const std::uint64_t offset =
          broker->publish(*req.topic, req.key.value_or(""), *req.payload);
      wire::Frame ok;
      ok.op = "ok";
      ok.offset = offset;
      return wire::encode_frame(ok) + "\n";
    }
    if (req.op == "poll") {
      if (!req.topic || !req.offset) throw ProtocolError("poll: missing fields");
      const std::size_t max =
          static_cast<std::size_t>(req.max_messages.value_or(1));
      const int timeout =
          static_cast<int>(req.timeout_ms.value_or(0));
      auto envs = broker->fetch(*req.topic, *req.offset, max, timeout);
      std::string out;
      for (const auto& e : envs) {
        wire::Frame msg;
        msg.op = "msg";
        msg.topic = e.topic;
        msg.key = e.key;
        msg.payload = e.payload;
        msg.offset = e.offset;
        msg.timestamp = e.timestamp_ms;
        out += wire::encode_frame(msg) + "\n";
      }
      wire::Frame end;
      end.op = "end";
      out += wire::encode_frame(end) + "\n";
      return out;
    }
    throw ProtocolError("unknown op '" + req.op + "'");
  }

  void accept_loop() {
    for (;;) {
      const int fd = ::accept(listen_fd, nullptr, nullptr);
      if (fd < 0) {
        if (errno == EINTR) continue;
        break;  // listener closed
      }
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      std::lock_guard lock(conn_mu);
      if (stopping) {
        ::close(fd);
        break;
      }
      conn_fds.push_back(fd);
      conn_threads.emplace_back([this, fd] { serve_connection(fd); });
    }
  }
};

BrokerServer::BrokerServer(std::shared_ptr<Broker> broker,
                           const std::string& bind_addr)
    : impl_(std::make_unique<Impl>()) {
  impl_->broker = std::move(broker);
  const AddrParts parts = parse_addr(bind_addr);
  const sockaddr_in sa = make_sockaddr(parts);

  impl_->listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (impl_->listen_fd < 0)
    throw ConnectionError(std::string("socket: ") + std::strerror(errno), false);
  int one = 1;
  ::setsockopt(impl_->listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(impl_->listen_fd, reinterpret_cast<const sockaddr*>(&sa),
             sizeof sa) != 0) {
    const std::string msg =
        "cannot bind " + bind_addr + ": " + std::strerror(errno);
    ::close(impl_->listen_fd);
    throw ConnectionError(msg, false);
  }
  if (::listen(impl_->listen_fd, 16) != 0) {
    const std::string msg =
        "cannot listen on " + bind_addr + ": " + std::strerror(errno);
    ::close(impl_->listen_fd);
    throw ConnectionError(msg, false);
  }

  sockaddr_in actual{};
  socklen_t len = sizeof actual;
  ::getsockname(impl_->listen_fd, reinterpret_cast<sockaddr*>(&actual), &len);
  char host[INET_ADDRSTRLEN] = {0};
  ::inet_ntop(AF_INET, &actual.sin_addr, host, sizeof host);
  impl_->bound_addr = std::string(host) + ":" + std::to_string(ntohs(actual.sin_port));

  impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

BrokerServer::~BrokerServer() { stop(); }

std::string BrokerServer::address() const { return impl_->bound_addr; }

void BrokerServer::stop() {
  if (!impl_ || impl_->stopping.exchange(true)) return;
  ::shutdown(impl_->listen_fd, SHUT_RDWR);
  ::close(impl_->listen_fd);
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  std::vector<int> fds;
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(impl_->conn_mu);
    fds.swap(impl_->conn_fds);
    threads.swap(impl_->conn_threads);
  }
  for (int fd : fds) ::shutdown(fd, SHUT_RDWR);
  for (auto& t : threads)
    if (t.joinable()) t.join();
}

struct TcpClient::Impl {
  int fd = -1;
  std::unique_ptr<LineReader> reader;

  wire::Frame request_one(const std::string& frame_line) {
    write_all(fd, frame_line + "\n");
    return read_frame();
  }

  wire::Frame read_frame() {
    auto line = reader->next_line();
    if (!line)
      throw ConnectionError("broker closed the connection", true);
    return wire::decode_frame(*line);
  }
};

TcpClient::TcpClient(const std::string& addr) : impl_(std::make_unique<Impl>()) {
  const AddrParts parts = parse_addr(addr);
  const sockaddr_in sa = make_sockaddr(parts);
  impl_->fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (impl_->fd < 0)
    throw ConnectionError(std::string("socket: ") + std::strerror(errno), false);
  if (::connect(impl_->fd, reinterpret_cast<const sockaddr*>(&sa), sizeof sa) !=
      0) {
    const int err = errno;
    ::close(impl_->fd);
    impl_->fd = -1;
    const bool retryable =
        err == ECONNREFUSED || err == ETIMEDOUT || err == ECONNRESET ||
        err == EHOSTUNREACH || err == ENETUNREACH;
    throw ConnectionError("cannot connect to " + addr + ": " +
                              std::strerror(err),
                          retryable);
  }
  int one = 1;
  ::setsockopt(impl_->fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  impl_->reader = std::make_unique<LineReader>(impl_->fd);
}

TcpClient::~TcpClient() {
  if (impl_ && impl_->fd >= 0) ::close(impl_->fd);
}

void TcpClient::create_topic(const std::string& name) {
  wire::Frame req;
  req.op = "create_topic";
  req.topic = name;
  const wire::Frame resp = impl_->request_one(wire::encode_frame(req));
  if (resp.op == "error") throw ProtocolError(resp.error.value_or("broker error"));
  if (resp.op != "ok") throw ProtocolError("unexpected response '" + resp.op + "'");
}

std::uint64_t TcpClient::publish(const std::string& topic,
                                 const std::string& key,
                                 const std::string& payload) {
  wire::Frame req;
  req.op = "publish";
  req.topic = topic;
  req.key = key;
  req.payload = payload;
  const wire::Frame resp = impl_->request_one(wire::encode_frame(req));
  if (resp.op == "error") throw ProtocolError(resp.error.value_or("broker error"));
  if (resp.op != "ok" || !resp.offset)
    throw ProtocolError("unexpected response '" + resp.op + "'");
  return *resp.offset;
}

std::vector<MessageEnvelope> TcpClient::poll(ConsumerHandle& consumer,
                                             std::size_t max_messages,
                                             int timeout_ms) {
  wire::Frame req;
  req.op = "poll";
  req.topic = consumer.topic;
  req.offset = consumer.cursor;
  req.max_messages = max_messages;
  req.timeout_ms = timeout_ms;
  write_all(impl_->fd, wire::encode_frame(req) + "\n");

  std::vector<MessageEnvelope> envs;
  for (;;) {
    const wire::Frame f = impl_->read_frame();
    if (f.op == "end") break;
    if (f.op == "error") throw ProtocolError(f.error.value_or("broker error"));
    if (f.op != "msg" || !f.topic || !f.offset || !f.payload)
      throw ProtocolError("unexpected response '" + f.op + "'");
    MessageEnvelope e;
    e.topic = *f.topic;
    e.offset = *f.offset;
    e.timestamp_ms = f.timestamp.value_or(0);
    e.key = f.key.value_or("");
    e.payload = *f.payload;
    envs.push_back(std::move(e));
  }
  consumer.cursor += envs.size();
  return envs;
}

}  // namespace mobo
