#include "teamspectra/stub_server.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

namespace teamspectra::client {

StubData stub_from_matches(const std::vector<MatchRecord>& matches,
                           const std::vector<Timeline>& timelines) {
    StubData data;
    std::map<std::string, const Timeline*> timeline_by_id;
    for (const Timeline& tl : timelines) timeline_by_id[tl.match_id] = &tl;

    for (const MatchRecord& m : matches) {
        std::vector<std::string> summoner_ids;
        summoner_ids.reserve(10);
        for (const TeamSide& side : m.teams) {
            for (const PlayerRow& p : side.players) {
                const std::string sid = "sid-" + p.player_id;
                summoner_ids.push_back(sid);
                data.summoners[p.player_id] =
                    VendorSummoner{sid, p.player_id, p.player_id};
                data.recent[p.player_id].push_back(m.match_id);
                data.entries[sid] = rank_to_vendor_entries(p.rank, sid);
            }
        }
        data.matches[m.match_id] = match_to_vendor(m, summoner_ids);
        const auto tl = timeline_by_id.find(m.match_id);
        if (tl != timeline_by_id.end()) {
            data.timelines[m.match_id] = timeline_to_vendor(*tl->second);
        } else {
            Timeline empty;
            empty.match_id = m.match_id;
            data.timelines[m.match_id] = timeline_to_vendor(empty);
        }
    }
    return data;
}

namespace {

HttpResponse ok(std::string body) { return {200, std::move(body), std::nullopt}; }

HttpResponse not_found() {
    return {404, "{\"status\":{\"status_code\":404}}\n", std::nullopt};
}

}  // namespace

HttpResponse stub_respond(const StubData& data, const std::string& target) {
    std::string path = target;
    int count = 20;
    if (const auto q = target.find('?'); q != std::string::npos) {
        path = target.substr(0, q);
        const std::string query = target.substr(q + 1);
        if (query.rfind("count=", 0) == 0) {
            try {
                count = std::stoi(query.substr(6));
            } catch (const std::exception&) {
                count = 20;
            }
        }
    }

    const std::string by_name = "/lol/summoner/v4/summoners/by-name/";
    if (path.starts_with(by_name)) {
        const auto it = data.summoners.find(path.substr(by_name.size()));
        if (it == data.summoners.end()) return not_found();
        return ok(summoner_to_vendor(it->second));
    }

    const std::string by_puuid = "/lol/match/v5/matches/by-puuid/";
    if (path.starts_with(by_puuid)) {
        const std::string rest = path.substr(by_puuid.size());
        if (!rest.ends_with("/ids")) return not_found();
        const auto it = data.recent.find(rest.substr(0, rest.size() - 4));
        if (it == data.recent.end()) return not_found();
        std::vector<std::string> ids = it->second;
        if (count >= 0 && ids.size() > static_cast<std::size_t>(count))
            ids.resize(static_cast<std::size_t>(count));
        return ok(match_ids_to_vendor(ids));
    }

    const std::string matches = "/lol/match/v5/matches/";
    if (path.starts_with(matches)) {
        std::string id = path.substr(matches.size());
        if (id.ends_with("/timeline")) {
            id.resize(id.size() - 9);
            const auto it = data.timelines.find(id);
            if (it == data.timelines.end()) return not_found();
            return ok(it->second);
        }
        const auto it = data.matches.find(id);
        if (it == data.matches.end()) return not_found();
        return ok(it->second);
    }

    const std::string entries = "/lol/league/v4/entries/by-summoner/";
    if (path.starts_with(entries)) {
        const auto it = data.entries.find(path.substr(entries.size()));
        if (it == data.entries.end()) return not_found();
        return ok(it->second);
    }

    return not_found();
}

InMemoryHttpClient::InMemoryHttpClient(StubData data, StubOptions options,
                                       std::string presented_token)
    : data_(std::move(data)),
      options_(std::move(options)),
      token_(std::move(presented_token)),
      fail_remaining_(options_.fail_first) {}

HttpResponse InMemoryHttpClient::get(const std::string& path) {
    ++count_;
    if (token_ != options_.api_token)
        return {401, "{\"status\":{\"status_code\":401}}\n", std::nullopt};
    if (fail_remaining_ > 0) {
        --fail_remaining_;
        return {500, "{\"status\":{\"status_code\":500}}\n", std::nullopt};
    }
    if (options_.rate_limit_429_every > 0 &&
        count_ % options_.rate_limit_429_every == 0) {
        HttpResponse res{429, "{\"status\":{\"status_code\":429}}\n", std::nullopt};
        if (options_.retry_after_s > 0.0) res.retry_after_s = options_.retry_after_s;
        return res;
    }
    return stub_respond(data_, path);
}

struct StubServer::Impl {
    StubData data;
    StubOptions options;
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<long long> count{0};
    std::atomic<int> fail_remaining{0};
};

StubServer::StubServer(StubData data, StubOptions options)
    : impl_(std::make_unique<Impl>()) {
    impl_->data = std::move(data);
    impl_->options = std::move(options);
    impl_->fail_remaining = impl_->options.fail_first;

    Impl* impl = impl_.get();
    impl->server.set_pre_routing_handler(
        [impl](const httplib::Request& req, httplib::Response& res) {
            const long long n = impl->count.fetch_add(1) + 1;
            if (req.get_header_value("X-Riot-Token") != impl->options.api_token) {
                res.status = 401;
                res.set_content("{\"status\":{\"status_code\":401}}\n",
                                "application/json");
                return httplib::Server::HandlerResponse::Handled;
            }
            if (impl->fail_remaining.fetch_sub(1) > 0) {
                res.status = 500;
                res.set_content("{\"status\":{\"status_code\":500}}\n",
                                "application/json");
                return httplib::Server::HandlerResponse::Handled;
            }
            if (impl->options.rate_limit_429_every > 0 &&
                n % impl->options.rate_limit_429_every == 0) {
                res.status = 429;
                if (impl->options.retry_after_s > 0.0)
                    res.set_header("Retry-After",
                                   std::to_string(impl->options.retry_after_s));
                res.set_content("{\"status\":{\"status_code\":429}}\n",
                                "application/json");
                return httplib::Server::HandlerResponse::Handled;
            }
            return httplib::Server::HandlerResponse::Unhandled;
        });
    impl->server.Get(R"(/.*)", [impl](const httplib::Request& req,
                                      httplib::Response& res) {
        const std::string target = req.target.empty() ? req.path : req.target;
        const HttpResponse out = stub_respond(impl->data, target);
        res.status = out.status;
        res.set_content(out.body, "application/json");
    });

    impl->port = impl->server.bind_to_any_port("127.0.0.1");
    impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

StubServer::~StubServer() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

int StubServer::port() const { return impl_->port; }

long long StubServer::request_count() const { return impl_->count.load(); }

}  // namespace teamspectra::client
