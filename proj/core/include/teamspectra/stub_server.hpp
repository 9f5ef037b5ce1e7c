#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "teamspectra/crawler.hpp"
#include "teamspectra/match.hpp"

namespace teamspectra::client {

// Canned server-side state: everything the five crawl endpoints can serve.
// Bodies are stored pre-rendered in the wire format so tests can also
// inject malformed documents.
struct StubData {
    std::map<std::string, VendorSummoner> summoners;          // by summoner name
    std::map<std::string, std::vector<std::string>> recent;   // puuid -> match ids
    std::map<std::string, std::string> matches;               // match id -> body
    std::map<std::string, std::string> timelines;             // match id -> body
    std::map<std::string, std::string> entries;               // summoner id -> body
};

// Builds a consistent stub world from canonical records: each player's
// summoner name and puuid are their player id, summoner ids get a "sid-"
// prefix, and every player's recent list holds the matches they appear in.
StubData stub_from_matches(const std::vector<MatchRecord>& matches,
                           const std::vector<Timeline>& timelines);

struct StubOptions {
    std::string api_token;        // the only token the stub accepts
    int fail_first = 0;           // answer 500 to this many requests first
    int rate_limit_429_every = 0; // every Nth request answers 429 (0 = never)
    double retry_after_s = 0.0;   // Retry-After value sent with each 429
};

// Pure routing: resolves one GET target (path plus optional count query)
// against the canned data. Unknown names and ids answer 404.
HttpResponse stub_respond(const StubData& data, const std::string& target);

// Socket-free stand-in for make_http_client: same routing and fault
// injection as the socket stub, but each get() resolves immediately, so
// large crawls under a virtual clock cost microseconds.
class InMemoryHttpClient final : public HttpClient {
  public:
    InMemoryHttpClient(StubData data, StubOptions options,
                       std::string presented_token);

    HttpResponse get(const std::string& path) override;

    long long request_count() const { return count_; }

  private:
    StubData data_;
    StubOptions options_;
    std::string token_;
    long long count_ = 0;
    int fail_remaining_ = 0;
};

// Loopback HTTP server over the same canned data, for end-to-end runs
// through the real client. Listens on an ephemeral 127.0.0.1 port from
// construction until destruction.
class StubServer {
  public:
    StubServer(StubData data, StubOptions options);
    ~StubServer();
    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    std::string base_url() const;
    int port() const;
    long long request_count() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace teamspectra::client
