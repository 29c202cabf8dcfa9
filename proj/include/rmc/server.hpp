#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rmc/error.hpp"
#include "rmc/session.hpp"

namespace rmc
{

/// Newline-delimited JSON over TCP. Each connection owns one Session; frames
/// are processed strictly in arrival order. A drag preview that is already
/// followed by a newer preview in the receive buffer is acknowledged as
/// coalesced instead of being applied.
class Server
{
public:
    explicit Server(SessionOptions options = {}) : options_(options) {}
    ~Server() { stop(); }

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds 127.0.0.1:`port` (0 picks a free port) and returns the bound port.
    int listen(int port, const std::string& host = "127.0.0.1")
    {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0)
            throw Error(ErrorCode::Io, std::string("socket: ") + std::strerror(errno));
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(static_cast<std::uint16_t>(port));
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            throw Error(ErrorCode::BadPayload, "bad listen address '" + host + "'");
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0) {
            std::string why = std::strerror(errno);
            ::close(fd_);
            fd_ = -1;
            throw Error(ErrorCode::Io, "cannot listen on port " + std::to_string(port) + ": " + why);
        }
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        return port_;
    }

    int port() const noexcept { return port_; }

    /// Accept loop; returns after stop().
    void run()
    {
        while (!stopping_) {
            int client = ::accept(fd_, nullptr, nullptr);
            if (client < 0) {
                if (stopping_)
                    break;
                if (errno == EINTR || errno == ECONNABORTED)
                    continue;
                break;
            }
            std::lock_guard lock(mutex_);
            clients_.push_back(client);
            threads_.emplace_back([this, client] { serve_connection(client); });
        }
    }

    void start() { acceptor_ = std::thread([this] { run(); }); }

    void stop()
    {
        if (stopping_.exchange(true))
            return;
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
        }
        if (acceptor_.joinable())
            acceptor_.join();
        std::vector<std::thread> threads;
        {
            std::lock_guard lock(mutex_);
            for (int c : clients_)
                ::shutdown(c, SHUT_RDWR);
            threads = std::move(threads_);
        }
        for (auto& t : threads)
            if (t.joinable())
                t.join();
    }

private:
    static bool send_all(int fd, const std::string& data)
    {
        std::size_t sent = 0;
        while (sent < data.size()) {
            ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n < 0 && errno == EINTR)
                continue;
            if (n <= 0)
                return false;
            sent += static_cast<std::size_t>(n);
        }
        return true;
    }

    static bool send_events(int fd, const std::vector<Event>& events)
    {
        std::string out;
        for (const auto& e : events) {
            out += e.to_line();
            out.push_back('\n');
        }
        return send_all(fd, out);
    }

    // Kind and seq of a preview_edit frame, if that is what the line holds.
    static std::optional<long long> preview_seq(const std::string& line)
    {
        if (line.find("preview_edit") == std::string::npos)
            return std::nullopt;
        try {
            auto j = nlohmann::json::parse(line);
            if (j.is_object() && j.value("kind", "") == "preview_edit" && j.contains("seq") &&
                j["seq"].is_number_integer())
                return j["seq"].get<long long>();
        } catch (const nlohmann::json::exception&) {
        }
        return std::nullopt;
    }

    void serve_connection(int fd)
    {
        Session session(options_);
        Event hello;
        hello.payload = {{"server", "rmc"}, {"protocol", 1}};
        bool alive = send_events(fd, {hello});
        std::string buffer;
        std::deque<std::string> lines;
        char chunk[65536];
        while (alive) {
            ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
            if (n < 0 && errno == EINTR)
                continue;
            if (n <= 0)
                break;
            buffer.append(chunk, static_cast<std::size_t>(n));
            std::size_t start = 0;
            for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
                std::string line = buffer.substr(start, nl - start);
                if (!line.empty() && line.back() == '\r')
                    line.pop_back();
                if (line.find_first_not_of(" \t") != std::string::npos)
                    lines.push_back(std::move(line));
            }
            buffer.erase(0, start);
            while (alive && !lines.empty()) {
                std::string line = std::move(lines.front());
                lines.pop_front();
                auto seq = preview_seq(line);
                if (seq && !lines.empty() && preview_seq(lines.front())) {
                    alive = send_events(fd, session.skip_superseded(*seq, "preview_edit"));
                    continue;
                }
                alive = send_events(fd, session.handle_line(line));
            }
        }
        ::close(fd);
        std::lock_guard lock(mutex_);
        clients_.erase(std::remove(clients_.begin(), clients_.end(), fd), clients_.end());
    }

    SessionOptions options_;
    int fd_ = -1;
    int port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread acceptor_;
    std::mutex mutex_;
    std::vector<int> clients_;
    std::vector<std::thread> threads_;
};

} // namespace rmc
