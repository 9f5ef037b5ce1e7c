#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "teamspectra/rate_limiter.hpp"
#include "teamspectra/vendor_adapter.hpp"

namespace teamspectra::client {

// One HTTP exchange as the crawler sees it. A status of 0 means the request
// never produced a response (connection refused, reset, timeout).
struct HttpResponse {
    int status = 0;
    std::string body;
    std::optional<double> retry_after_s;  // parsed Retry-After header, seconds
};

// Transport seam. Production code talks to a real server through
// make_http_client; tests substitute an in-process fake so crawls run
// against canned responses with no sockets involved.
class HttpClient {
  public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& path) = 0;
};

// HTTP client for a base URL of the form "http://host[:port]". The API token
// travels only in the X-Riot-Token request header; it is never copied into
// paths, responses, or error text.
std::unique_ptr<HttpClient> make_http_client(const std::string& base_url,
                                             const std::string& api_token);

// Time seam, in seconds. Tests drive crawls through virtual time so rate
// limiting and backoff cost nothing to exercise.
class Clock {
  public:
    virtual ~Clock() = default;
    virtual double now() = 0;
    virtual void sleep_until(double t) = 0;
};

// Wall-clock implementation over std::chrono::steady_clock.
class SystemClock final : public Clock {
  public:
    double now() override;
    void sleep_until(double t) override;
};

struct CrawlConfig {
    std::string base_url;
    std::string api_token;  // supplied by the environment, never logged
    std::vector<std::string> seeds;
    int n_recent_seed = 100;        // match ids pulled per seed player
    int n_recent_discovered = 10;   // match ids pulled per discovered player
    std::vector<RateWindow> rate = {{20, 1.0}, {100, 120.0}};
    int max_retries = 5;
    std::string output_dir;
};

struct RequestLogEntry {
    std::string endpoint;  // path plus query; the token never appears here
    int status = 0;
    double timestamp = 0.0;  // seconds since the run began
};

struct SeedRecord {
    std::string name;
    std::string puuid;
    std::string summoner_id;
};

// Durable crawl state, persisted as line-delimited JSON in
// <output_dir>/ledger.jsonl. Reloading the ledger and resuming never
// fetches a document a second time.
struct CrawlLedger {
    std::set<std::string> fetched_match_ids;
    std::set<std::string> fetched_player_ids;  // puuids with completed pulls
    std::vector<RequestLogEntry> request_log;

    // Bookkeeping that makes resumption deterministic without re-fetching:
    // which seeds resolved to which players, which match ids each completed
    // player yielded, and who played in each fetched match.
    std::map<std::string, SeedRecord> seeds;  // keyed by seed name
    std::map<std::string, std::vector<std::string>> player_matches;
    std::map<std::string, std::vector<VendorParticipant>> match_participants;
};

// Reads <output_dir>/ledger.jsonl; an absent file yields an empty ledger.
CrawlLedger load_ledger(const std::filesystem::path& output_dir);

// Runs the full crawl: resolve each seed to a player, pull that player's
// recent match and timeline documents into output_dir, then pull a shorter
// history for every player discovered in those matches, along with ranked
// league entries for each player touched. Documents land as canonical JSON
// under matches/, timelines/, and players/. Returns the final ledger.
//
// A seed that the server does not know is logged and skipped; the crawl
// continues. Authentication failures raise AuthError. A request that stays
// unserved after max_retries retries raises TransportError. Starting fresh
// (resume = false) into a directory that already holds a ledger raises
// ConfigError rather than risking double writes.
CrawlLedger crawl(const CrawlConfig& config, bool resume = false);

// Seam-injected variant used by tests and by the CLI (which passes the real
// client and clock). `log` receives one human-readable line per notable
// event: seeds resolved, players skipped, documents written.
CrawlLedger crawl(const CrawlConfig& config, bool resume, HttpClient& http,
                  Clock& clock, std::ostream& log);

}  // namespace teamspectra::client
