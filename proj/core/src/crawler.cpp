#include "teamspectra/crawler.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "teamspectra/errors.hpp"
#include "teamspectra/ingest.hpp"
#include "teamspectra/rng.hpp"

namespace teamspectra::client {

namespace fs = std::filesystem;
using nlohmann::json;

double SystemClock::now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void SystemClock::sleep_until(double t) {
    const double dt = t - now();
    if (dt > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(dt));
}

namespace {

class RealHttpClient final : public HttpClient {
  public:
    RealHttpClient(const std::string& host, int port, std::string token)
        : cli_(host, port) {
        cli_.set_default_headers({{"X-Riot-Token", std::move(token)}});
        cli_.set_connection_timeout(5, 0);
        cli_.set_read_timeout(30, 0);
    }

    HttpResponse get(const std::string& path) override {
        auto res = cli_.Get(path);
        HttpResponse out;
        if (!res) return out;  // status 0 marks a transport-level failure
        out.status = res->status;
        out.body = res->body;
        if (res->has_header("Retry-After")) {
            try {
                out.retry_after_s = std::stod(res->get_header_value("Retry-After"));
            } catch (const std::exception&) {
                // an unparsable header is treated as absent
            }
        }
        return out;
    }

  private:
    httplib::Client cli_;
};

}  // namespace

std::unique_ptr<HttpClient> make_http_client(const std::string& base_url,
                                             const std::string& api_token) {
    const std::string scheme = "http://";
    if (base_url.rfind(scheme, 0) != 0)
        throw ConfigError("base_url must start with http://");
    std::string rest = base_url.substr(scheme.size());
    while (!rest.empty() && rest.back() == '/') rest.pop_back();
    std::string host = rest;
    int port = 80;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
        host = rest.substr(0, colon);
        try {
            port = std::stoi(rest.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("base_url port is not a number");
        }
    }
    if (host.empty()) throw ConfigError("base_url host is empty");
    return std::make_unique<RealHttpClient>(host, port, api_token);
}

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(ctx + key, "missing required field");
    return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_string()) throw SchemaError(ctx + key, "expected string");
    return v.get<std::string>();
}

std::vector<RateWindow> checked_rate(const CrawlConfig& config) {
    if (config.rate.empty())
        throw ConfigError("rate must list at least one (count, window) pair");
    for (const RateWindow& w : config.rate)
        if (w.count < 1 || !(w.window_s > 0.0))
            throw ConfigError("rate windows need count >= 1 and positive seconds");
    return config.rate;
}

json rank_to_json(const std::optional<Rank>& rank) {
    if (!rank) return nullptr;
    json r;
    r["tier"] = to_string(rank->tier);
    r["division"] =
        rank->division ? json(to_string(*rank->division)) : json(nullptr);
    r["lp"] = rank->league_points;
    return r;
}

// Drives one crawl run. All durable effects funnel through two choke
// points: write_document (canonical JSON files, each written once) and
// append_record (ledger lines). The API token is known only to the
// HttpClient; nothing here ever sees or stores it.
class Crawler {
  public:
    Crawler(const CrawlConfig& config, bool resume, HttpClient& http,
            Clock& clock, std::ostream& log)
        : config_(config),
          resume_(resume),
          http_(http),
          clock_(clock),
          log_(log),
          limiter_(checked_rate(config)),
          jitter_(0x7ea11ab5u) {}

    CrawlLedger run() {
        validate();
        prepare_output_dir();
        t0_ = clock_.now();

        // First wave: every configured seed, with the long history window.
        std::set<std::string> seed_puuids;
        for (const std::string& name : config_.seeds) {
            SeedRecord rec;
            if (const auto it = ledger_.seeds.find(name);
                it != ledger_.seeds.end()) {
                rec = it->second;  // resolved during an earlier run
            } else {
                std::string body;
                try {
                    body = request("/lol/summoner/v4/summoners/by-name/" + name);
                } catch (const NotFound&) {
                    log_ << "seed '" << name << "' unknown to the server; skipping\n";
                    continue;
                }
                const VendorSummoner summoner = summoner_from_vendor(body);
                rec = SeedRecord{name, summoner.puuid, summoner.summoner_id};
                ledger_.seeds[name] = rec;
                append_record({{"kind", "seed"},
                               {"name", rec.name},
                               {"puuid", rec.puuid},
                               {"summoner_id", rec.summoner_id}});
            }
            seed_puuids.insert(rec.puuid);
            handle_player(rec.puuid, rec.summoner_id, config_.n_recent_seed);
        }

        // Second wave: everyone who appeared in a seed player's matches and
        // has not been pulled yet, with the short history window. The map
        // keeps discovery order independent of server response order.
        std::map<std::string, std::string> discovered;
        for (const std::string& puuid : seed_puuids) {
            const auto matches = ledger_.player_matches.find(puuid);
            if (matches == ledger_.player_matches.end()) continue;
            for (const std::string& match_id : matches->second)
                for (const VendorParticipant& p :
                     ledger_.match_participants[match_id])
                    if (!ledger_.fetched_player_ids.contains(p.puuid))
                        discovered[p.puuid] = p.summoner_id;
        }
        for (const auto& [puuid, summoner_id] : discovered) {
            try {
                handle_player(puuid, summoner_id, config_.n_recent_discovered);
            } catch (const NotFound&) {
                log_ << "discovered player vanished from the server; skipping\n";
            }
        }
        return std::move(ledger_);
    }

  private:
    void validate() const {
        if (config_.output_dir.empty())
            throw ConfigError("output_dir must not be empty");
        if (config_.n_recent_seed < 1 || config_.n_recent_discovered < 1)
            throw ConfigError("n_recent_seed and n_recent_discovered must be >= 1");
        if (config_.max_retries < 0)
            throw ConfigError("max_retries must be >= 0");
    }

    void prepare_output_dir() {
        const fs::path root(config_.output_dir);
        fs::create_directories(root / "matches");
        fs::create_directories(root / "timelines");
        fs::create_directories(root / "players");
        const fs::path ledger_path = root / "ledger.jsonl";
        if (fs::exists(ledger_path) && fs::file_size(ledger_path) > 0) {
            if (!resume_)
                throw ConfigError(
                    "output_dir already holds a crawl ledger; resume it or "
                    "point at a fresh directory");
            ledger_ = load_ledger(root);
        }
        ledger_out_.open(ledger_path, std::ios::app);
        if (!ledger_out_.is_open())
            throw ConfigError("cannot open " + ledger_path.string() +
                              " for appending");
    }

    // One rate-limited GET with retries. Returns the body on 200. Retryable
    // failures (429, 5xx, transport) back off exponentially with jitter,
    // honoring Retry-After when the server sends one.
    std::string request(const std::string& path) {
        double backoff = 0.5;
        for (int attempt = 0;; ++attempt) {
            const double grant = limiter_.acquire_permit(clock_.now());
            clock_.sleep_until(grant);
            const HttpResponse resp = http_.get(path);
            const double t = grant - t0_;
            ledger_.request_log.push_back({path, resp.status, t});
            append_record({{"kind", "request"},
                           {"endpoint", path},
                           {"status", resp.status},
                           {"t", t}});
            if (resp.status == 200) return resp.body;
            if (resp.status == 401 || resp.status == 403)
                throw AuthError("the match API rejected the credentials (status " +
                                std::to_string(resp.status) + ")");
            if (resp.status == 404)
                throw NotFound("the match API has no document at " + path);
            const bool retryable =
                resp.status == 0 || resp.status == 429 || resp.status >= 500;
            if (!retryable)
                throw TransportError("unexpected status " +
                                     std::to_string(resp.status) + " from " + path);
            if (attempt >= config_.max_retries)
                throw TransportError(
                    "request to " + path + " still failing after " +
                    std::to_string(config_.max_retries) + " retries (last status " +
                    std::to_string(resp.status) + ")");
            double wait = backoff * (1.0 + 0.25 * jitter_.unit());
            if (resp.retry_after_s) wait = std::max(wait, *resp.retry_after_s);
            clock_.sleep_until(clock_.now() + wait);
            backoff = std::min(backoff * 2.0, 30.0);
        }
    }

    // Pulls one player's recent match ids, ranked entries, and every match +
    // timeline document not fetched before. The player is marked complete
    // only after all of it landed, so an interrupted pull is retried on
    // resume without ever re-fetching a finished document.
    void handle_player(const std::string& puuid, const std::string& summoner_id,
                       int count) {
        if (ledger_.fetched_player_ids.contains(puuid)) {
            log_ << "player already pulled; skipping\n";
            return;
        }
        const std::string ids_body =
            request("/lol/match/v5/matches/by-puuid/" + puuid +
                    "/ids?count=" + std::to_string(count));
        const std::vector<std::string> ids = match_ids_from_vendor(ids_body);

        const std::string entries_body =
            request("/lol/league/v4/entries/by-summoner/" + summoner_id);
        json player_doc;
        player_doc["puuid"] = puuid;
        player_doc["summoner_id"] = summoner_id;
        player_doc["rank"] = rank_to_json(rank_from_vendor_entries(entries_body));
        write_document(fs::path("players") / (puuid + ".json"),
                       player_doc.dump(2) + "\n");

        for (const std::string& match_id : ids) {
            if (ledger_.fetched_match_ids.contains(match_id)) continue;
            const std::string match_body =
                request("/lol/match/v5/matches/" + match_id);
            const std::string timeline_body =
                request("/lol/match/v5/matches/" + match_id + "/timeline");

            const MatchRecord match = match_from_vendor(match_body);
            if (match.match_id != match_id)
                throw SchemaError("metadata.matchId",
                                  "match document id does not match the request");
            const Timeline timeline = timeline_from_vendor(timeline_body);
            const std::vector<VendorParticipant> participants =
                participants_from_vendor(match_body);

            write_document(fs::path("matches") / (match_id + ".json"),
                           ingest::serialize_match(match));
            write_document(fs::path("timelines") / (match_id + ".json"),
                           ingest::serialize_timeline(timeline));

            ledger_.fetched_match_ids.insert(match_id);
            ledger_.match_participants[match_id] = participants;
            json parts = json::array();
            for (const VendorParticipant& p : participants)
                parts.push_back(
                    {{"puuid", p.puuid}, {"summoner_id", p.summoner_id}});
            append_record({{"kind", "match"},
                           {"id", match_id},
                           {"participants", std::move(parts)}});
            log_ << "fetched match " << match_id << "\n";
        }

        ledger_.player_matches[puuid] = ids;
        ledger_.fetched_player_ids.insert(puuid);
        append_record({{"kind", "player"},
                       {"puuid", puuid},
                       {"summoner_id", summoner_id},
                       {"match_ids", ids}});
    }

    void write_document(const fs::path& relative, const std::string& content) {
        const fs::path target = fs::path(config_.output_dir) / relative;
        std::ofstream out(target, std::ios::binary);
        if (!out.is_open())
            throw DomainError("cannot write " + target.string());
        out << content;
        if (!out.good()) throw DomainError("short write to " + target.string());
    }

    void append_record(const json& record) {
        ledger_out_ << record.dump() << "\n";
        ledger_out_.flush();
    }

    const CrawlConfig& config_;
    bool resume_;
    HttpClient& http_;
    Clock& clock_;
    std::ostream& log_;
    RateLimiter limiter_;
    Rng jitter_;  // backoff jitter only; document content never depends on it
    CrawlLedger ledger_;
    std::ofstream ledger_out_;
    double t0_ = 0.0;
};

}  // namespace

CrawlLedger load_ledger(const fs::path& output_dir) {
    CrawlLedger ledger;
    std::ifstream in(output_dir / "ledger.jsonl");
    if (!in.is_open()) return ledger;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string ctx = "ledger.jsonl:" + std::to_string(line_no) + " ";
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw SchemaError(ctx, "malformed ledger line");
        const std::string kind = require_string(rec, "kind", ctx);
        if (kind == "seed") {
            SeedRecord seed{require_string(rec, "name", ctx),
                            require_string(rec, "puuid", ctx),
                            require_string(rec, "summoner_id", ctx)};
            ledger.seeds[seed.name] = std::move(seed);
        } else if (kind == "player") {
            const std::string puuid = require_string(rec, "puuid", ctx);
            const json& ids = require(rec, "match_ids", ctx);
            if (!ids.is_array()) throw SchemaError(ctx + "match_ids", "expected array");
            std::vector<std::string> match_ids;
            for (const json& id : ids) {
                if (!id.is_string())
                    throw SchemaError(ctx + "match_ids", "expected string entries");
                match_ids.push_back(id.get<std::string>());
            }
            ledger.player_matches[puuid] = std::move(match_ids);
            ledger.fetched_player_ids.insert(puuid);
        } else if (kind == "match") {
            const std::string id = require_string(rec, "id", ctx);
            const json& parts = require(rec, "participants", ctx);
            if (!parts.is_array())
                throw SchemaError(ctx + "participants", "expected array");
            std::vector<VendorParticipant> participants;
            for (const json& p : parts)
                participants.push_back({require_string(p, "puuid", ctx),
                                        require_string(p, "summoner_id", ctx)});
            ledger.match_participants[id] = std::move(participants);
            ledger.fetched_match_ids.insert(id);
        } else if (kind == "request") {
            RequestLogEntry entry;
            entry.endpoint = require_string(rec, "endpoint", ctx);
            const json& status = require(rec, "status", ctx);
            const json& t = require(rec, "t", ctx);
            if (!status.is_number_integer() || !t.is_number())
                throw SchemaError(ctx, "request record fields have wrong types");
            entry.status = status.get<int>();
            entry.timestamp = t.get<double>();
            ledger.request_log.push_back(std::move(entry));
        } else {
            throw SchemaError(ctx + "kind", "unknown ledger record kind '" + kind + "'");
        }
    }
    return ledger;
}

CrawlLedger crawl(const CrawlConfig& config, bool resume, HttpClient& http,
                  Clock& clock, std::ostream& log) {
    Crawler crawler(config, resume, http, clock, log);
    return crawler.run();
}

CrawlLedger crawl(const CrawlConfig& config, bool resume) {
    const std::unique_ptr<HttpClient> http =
        make_http_client(config.base_url, config.api_token);
    SystemClock clock;
    return crawl(config, resume, *http, clock, std::clog);
}

}  // namespace teamspectra::client
