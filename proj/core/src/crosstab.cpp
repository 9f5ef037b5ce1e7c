#include "teamspectra/crosstab.hpp"

#include <limits>
#include <map>

#include "teamspectra/errors.hpp"

namespace teamspectra::analytics {

namespace {

constexpr ClusterRole kTeamRoles[] = {ClusterRole::Cooperative,
                                      ClusterRole::NonCooperative,
                                      ClusterRole::Average};
constexpr ClusterRole kPlayerRoles[] = {ClusterRole::Acquiring,
                                        ClusterRole::Sharing,
                                        ClusterRole::Average};
constexpr SkillClass kSkills[] = {SkillClass::LowSkilled, SkillClass::Mixed,
                                  SkillClass::HighSkilled};

double rate(long long wins, long long n) {
    return n > 0 ? static_cast<double>(wins) / static_cast<double>(n)
                 : std::numeric_limits<double>::quiet_NaN();
}

std::string lower_name(ClusterRole role) {
    switch (role) {
        case ClusterRole::Acquiring: return "acquiring";
        case ClusterRole::Sharing: return "sharing";
        case ClusterRole::Average: return "average";
        case ClusterRole::Cooperative: return "cooperative";
        case ClusterRole::NonCooperative: return "noncooperative";
    }
    return "average";
}

std::string group_name(ClusterRole role, SkillClass skill) {
    return lower_name(role) + "_" + to_string(skill);
}

int playstyle_count(const TeamObservation& t, ClusterRole role) {
    switch (role) {
        case ClusterRole::Acquiring: return t.acquiring;
        case ClusterRole::Sharing: return t.sharing;
        default: return t.average;
    }
}

}  // namespace

std::optional<ClusterRole> majority_type(const TeamObservation& team) {
    for (ClusterRole role : kPlayerRoles)
        if (playstyle_count(team, role) >= 3) return role;
    return std::nullopt;
}

SkillClass skill_class(const TeamObservation& team) {
    const bool low = team.sharing + team.average >= 3;
    const bool high = team.acquiring + team.average >= 3;
    if (low == high) return SkillClass::Mixed;
    return low ? SkillClass::LowSkilled : SkillClass::HighSkilled;
}

std::string to_string(SkillClass skill) {
    switch (skill) {
        case SkillClass::LowSkilled: return "low_skilled";
        case SkillClass::Mixed: return "mixed";
        case SkillClass::HighSkilled: return "high_skilled";
    }
    return "mixed";
}

std::vector<WinRateRow> marginal_win_rates(
    const std::vector<TeamObservation>& teams) {
    std::vector<WinRateRow> out;
    for (ClusterRole role : kTeamRoles) {
        WinRateRow row;
        row.scope = "team";
        row.group = lower_name(role);
        for (const TeamObservation& t : teams) {
            if (t.collective_role != role) continue;
            ++row.n;
            row.wins += t.won;
        }
        row.win_rate = rate(row.wins, row.n);
        out.push_back(row);
    }
    for (ClusterRole role : kPlayerRoles) {
        WinRateRow row;
        row.scope = "player";
        row.group = lower_name(role);
        for (const TeamObservation& t : teams) {
            const int members = playstyle_count(t, role);
            row.n += members;
            if (t.won) row.wins += members;
        }
        row.win_rate = rate(row.wins, row.n);
        out.push_back(row);
    }
    WinRateRow overall;
    overall.scope = "overall";
    overall.group = "overall";
    for (const TeamObservation& t : teams) {
        ++overall.n;
        overall.wins += t.won;
    }
    overall.win_rate = rate(overall.wins, overall.n);
    out.push_back(overall);
    return out;
}

std::vector<WinRateRow> consolidated_win_rates(
    const std::vector<TeamObservation>& teams) {
    std::vector<WinRateRow> out;
    for (ClusterRole role : kTeamRoles) {
        for (SkillClass skill : kSkills) {
            WinRateRow row;
            row.scope = "team";
            row.group = group_name(role, skill);
            for (const TeamObservation& t : teams) {
                if (t.collective_role != role || skill_class(t) != skill) continue;
                ++row.n;
                row.wins += t.won;
            }
            row.win_rate = rate(row.wins, row.n);
            out.push_back(row);
        }
    }
    return out;
}

WinRateTable crosstab(const std::vector<TeamObservation>& teams) {
    WinRateTable table;
    for (ClusterRole r : kTeamRoles) table.rows.push_back(lower_name(r));
    for (ClusterRole c : kPlayerRoles) table.cols.push_back(lower_name(c));
    table.cells.assign(3, std::vector<CrosstabCell>(3));
    table.row_totals.assign(3, CrosstabCell{});

    for (const TeamObservation& t : teams) {
        int row = 0;
        for (int i = 0; i < 3; ++i)
            if (kTeamRoles[i] == t.collective_role) row = i;
        CrosstabCell& total = table.row_totals[static_cast<std::size_t>(row)];
        ++total.matches;
        total.wins += t.won;
        const std::optional<ClusterRole> majority = majority_type(t);
        if (!majority) continue;  // outside every column, still in the total
        int col = 0;
        for (int i = 0; i < 3; ++i)
            if (kPlayerRoles[i] == *majority) col = i;
        CrosstabCell& cell =
            table.cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        ++cell.matches;
        cell.wins += t.won;
    }

    for (auto& row : table.cells)
        for (CrosstabCell& cell : row) cell.win_rate = rate(cell.wins, cell.matches);
    for (CrosstabCell& total : table.row_totals)
        total.win_rate = rate(total.wins, total.matches);
    return table;
}

HeadToHead head_to_head(const std::vector<TeamObservation>& teams) {
    HeadToHead out;
    for (ClusterRole role : kTeamRoles)
        for (SkillClass skill : kSkills) out.groups.push_back(group_name(role, skill));

    const int g = static_cast<int>(out.groups.size());
    out.matches = Eigen::MatrixXd::Zero(g, g);
    Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(g, g);

    std::map<std::string, const TeamObservation*> side[2];
    for (const TeamObservation& t : teams) {
        if (t.team != 0 && t.team != 1) throw DomainError("team index must be 0 or 1");
        side[t.team][t.match_id] = &t;
    }

    auto group_of = [&](const TeamObservation& t) {
        const std::string name = group_name(t.collective_role, skill_class(t));
        for (int i = 0; i < g; ++i)
            if (out.groups[static_cast<std::size_t>(i)] == name) return i;
        throw DomainError("team falls in no head-to-head group");
    };

    for (const auto& [match_id, first] : side[0]) {
        const auto other = side[1].find(match_id);
        if (other == side[1].end()) continue;
        const TeamObservation* pair[2] = {first, other->second};
        for (int a = 0; a < 2; ++a) {
            const TeamObservation& mine = *pair[a];
            const TeamObservation& theirs = *pair[1 - a];
            const int r = group_of(mine);
            const int c = group_of(theirs);
            out.matches(r, c) += 1.0;
            if (mine.won) wins(r, c) += 1.0;
        }
    }

    out.win_rate.resize(g, g);
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c)
            out.win_rate(r, c) =
                out.matches(r, c) > 0.0
                    ? wins(r, c) / out.matches(r, c)
                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace teamspectra::analytics
