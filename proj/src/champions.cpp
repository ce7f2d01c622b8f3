#include "lteaudio/champions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace lteaudio {

const char* to_string(Medium m) {
    switch (m) {
        case Medium::audio: return "audio";
        case Medium::cable: return "cable";
        case Medium::simulation: return "simulation";
    }
    return "?";
}

Medium parse_medium(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "audio") return Medium::audio;
    if (t == "cable") return Medium::cable;
    if (t == "simulation") return Medium::simulation;
    throw std::invalid_argument("unknown medium '" + text + "'");
}

const char* to_string(MatchReason r) {
    switch (r) {
        case MatchReason::ps: return "PS";
        case MatchReason::ber: return "BER";
        case MatchReason::throughput: return "throughput";
        case MatchReason::arbitrary_tiebreak: return "arbitrary-tiebreak";
    }
    return "?";
}

void ScenarioResult::validate() const {
    if (team_id.empty()) throw std::invalid_argument("result without team id");
    if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument(fmt::format("team {}: BER {} outside [0, 1]", team_id, ber));
    if (!(throughput_bps >= 0.0)) throw std::invalid_argument(fmt::format("team {}: negative throughput", team_id));
    if (medium == Medium::simulation && !(snr_db && std::isfinite(*snr_db))) {
        throw std::invalid_argument(fmt::format("team {}: simulation result needs an SNR", team_id));
    }
    if (medium == Medium::audio && !(distance_m && (*distance_m == 0.25 || *distance_m == 1.0))) {
        throw std::invalid_argument(fmt::format("team {}: audio result needs a distance of 0.25 or 1.0 m", team_id));
    }
}

double qualification_mark(double ber) {
    if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument(fmt::format("BER {} outside [0, 1]", ber));
    if (ber < 0.1) return 10.0;
    if (ber < 0.2) return 8.0;
    if (ber < 0.3) return 4.0;
    if (ber < 0.4) return 1.0;
    return 0.0;
}

double performance_score(const ScenarioResult& r) {
    r.validate();
    const bool good = r.ber < 0.1;
    const bool fair = r.ber >= 0.1 && r.ber < 0.2;
    switch (r.medium) {
        case Medium::audio: {
            const bool far = *r.distance_m == 1.0;
            if (good) return far ? 10.0 : 9.0;
            if (fair) return far ? 9.5 : 8.5;
            return 0.0;
        }
        case Medium::cable:
            if (good) return 8.0;
            if (fair) return 7.5;
            return 0.0;
        case Medium::simulation: {
            if (!good) return 0.0;
            // Rows at -1..12 dB score 7.0 down to 0.5; the best row whose
            // SNR is not below the demonstrated one applies.
            const double row = std::max(-1.0, std::ceil(*r.snr_db - 1e-9));
            if (row > 12.0) return 0.0;
            return 7.0 - 0.5 * (row + 1.0);
        }
    }
    return 0.0;
}

MatchRecord run_match(const ScenarioResult& a, const ScenarioResult& b) {
    if (a.team_id == b.team_id) throw std::invalid_argument("team " + a.team_id + " cannot play itself");
    MatchRecord m;
    m.team_a = a.team_id;
    m.team_b = b.team_id;
    m.ps_a = performance_score(a);
    m.ps_b = performance_score(b);
    bool a_wins;
    if (m.ps_a != m.ps_b) {
        a_wins = m.ps_a > m.ps_b;
        m.reason = MatchReason::ps;
    } else if (a.ber != b.ber) {
        a_wins = a.ber < b.ber;
        m.reason = MatchReason::ber;
    } else if (a.throughput_bps != b.throughput_bps) {
        a_wins = a.throughput_bps > b.throughput_bps;
        m.reason = MatchReason::throughput;
    } else {
        a_wins = a.team_id < b.team_id;
        m.reason = MatchReason::arbitrary_tiebreak;
    }
    m.winner = a_wins ? a.team_id : b.team_id;
    m.loser = a_wins ? b.team_id : a.team_id;
    return m;
}

namespace {

// Seed positions so that 1 and 2 can only meet in the final.
std::vector<int> seed_order(int n) {
    std::vector<int> order{1};
    while (static_cast<int>(order.size()) < n) {
        const int m = static_cast<int>(order.size()) * 2;
        std::vector<int> next;
        for (int s : order) {
            next.push_back(s);
            next.push_back(m + 1 - s);
        }
        order = std::move(next);
    }
    return order;
}

const ScenarioResult& result_for(const RoundResults& results, int round, const std::string& team) {
    auto r = results.find(round);
    if (r != results.end()) {
        auto t = r->second.find(team);
        if (t != r->second.end()) return t->second;
    }
    throw std::invalid_argument(fmt::format("missing result for team {} in round {}", team, round));
}

Stage stage_for_losers(int remaining_after) {
    switch (remaining_after) {
        case 1: return Stage::finalist;
        case 2: return Stage::semi_finalist;
        case 4: return Stage::quarter_finalist;
        default: return Stage::round_of_16;
    }
}

}  // namespace

BracketOutcome run_bracket(const RoundResults& results, int n_teams) {
    if (n_teams != 2 && n_teams != 4 && n_teams != 8 && n_teams != 16) {
        throw std::invalid_argument(fmt::format("bracket needs 2, 4, 8 or 16 teams, got {}", n_teams));
    }
    auto qual = results.find(0);
    if (qual == results.end() || static_cast<int>(qual->second.size()) != n_teams) {
        throw std::invalid_argument(fmt::format("round 0 must hold exactly {} qualification results", n_teams));
    }
    for (const auto& [round, teams] : results) {
        for (const auto& [id, r] : teams) {
            if (id != r.team_id) throw std::invalid_argument("result keyed under the wrong team id " + id);
            r.validate();
        }
    }

    BracketOutcome out;
    out.n_teams = n_teams;
    std::vector<const ScenarioResult*> seeds;
    for (const auto& [id, r] : qual->second) seeds.push_back(&r);
    std::sort(seeds.begin(), seeds.end(), [](const ScenarioResult* a, const ScenarioResult* b) {
        if (a->ber != b->ber) return a->ber < b->ber;
        return a->team_id < b->team_id;
    });
    for (const auto* s : seeds) out.seeding.push_back(s->team_id);

    std::vector<std::string> alive;
    for (int s : seed_order(n_teams)) alive.push_back(out.seeding[s - 1]);

    std::map<std::string, double> best_ps;
    std::vector<TeamStanding> eliminated;  // filled from the back
    int round = 1;
    while (alive.size() > 1) {
        std::vector<std::string> winners;
        std::vector<std::pair<const ScenarioResult*, double>> losers;
        for (std::size_t i = 0; i < alive.size(); i += 2) {
            const auto& a = result_for(results, round, alive[i]);
            const auto& b = result_for(results, round, alive[i + 1]);
            auto m = run_match(a, b);
            m.round = round;
            for (const auto& [id, ps] : {std::pair{a.team_id, m.ps_a}, std::pair{b.team_id, m.ps_b}}) {
                best_ps[id] = std::max(best_ps.count(id) ? best_ps[id] : 0.0, ps);
            }
            winners.push_back(m.winner);
            const auto& lost = m.winner == a.team_id ? b : a;
            losers.emplace_back(&lost, m.winner == a.team_id ? m.ps_b : m.ps_a);
            out.matches.push_back(std::move(m));
        }
        std::sort(losers.begin(), losers.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second > y.second;
            if (x.first->ber != y.first->ber) return x.first->ber < y.first->ber;
            if (x.first->throughput_bps != y.first->throughput_bps) {
                return x.first->throughput_bps > y.first->throughput_bps;
            }
            return x.first->team_id < y.first->team_id;
        });
        const int first_rank = static_cast<int>(winners.size()) + 1;
        std::vector<TeamStanding> group;
        for (std::size_t i = 0; i < losers.size(); ++i) {
            group.push_back(TeamStanding{losers[i].first->team_id,
                                         Placement{stage_for_losers(static_cast<int>(winners.size())),
                                                   first_rank + static_cast<int>(i)},
                                         0.0});
        }
        eliminated.insert(eliminated.begin(), group.begin(), group.end());
        alive = std::move(winners);
        ++round;
    }

    out.standings.push_back(TeamStanding{alive.front(), Placement{Stage::champion, 1}, 0.0});
    out.standings.insert(out.standings.end(), eliminated.begin(), eliminated.end());
    for (auto& s : out.standings) s.ps = best_ps[s.team_id];
    return out;
}

double champions_score(const Placement& p, int n_teams) {
    if (p.rank < 1 || p.rank > n_teams) {
        throw std::invalid_argument(fmt::format("placement {} is outside a {}-team field", p.rank, n_teams));
    }
    static constexpr double kScores[] = {10.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0};
    return p.rank <= 8 ? kScores[p.rank - 1] : 0.0;
}

MarkWithWarning final_mark(double cs, double ps, double alpha, double beta) {
    if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("final mark weights must be non-negative");
    MarkWithWarning out{alpha * cs + beta * ps, std::nullopt};
    if (std::abs(alpha + beta - 1.0) > 1e-12) {
        out.warning = fmt::format("alpha + beta = {} (not 1)", alpha + beta);
    }
    return out;
}

double individual_mark(double final, const std::vector<double>& assessments) {
    if (assessments.empty()) throw std::invalid_argument("no peer assessments");
    for (double a : assessments) {
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument(fmt::format("peer assessment {} outside [0, 1]", a));
    }
    const double mean = std::accumulate(assessments.begin(), assessments.end(), 0.0) / assessments.size();
    return std::clamp(final * mean, 0.0, 10.0);
}

std::string bracket_tree(const BracketOutcome& o) {
    static const std::map<int, const char*> names = {{2, "final"}, {4, "semi-finals"}, {8, "quarter-finals"},
                                                     {16, "round of 16"}};
    std::string text;
    int round = 0;
    int teams_left = o.n_teams;
    for (const auto& m : o.matches) {
        if (m.round != round) {
            if (round != 0) teams_left /= 2;
            round = m.round;
            text += fmt::format("Round {} ({})\n", round, names.at(teams_left));
        }
        text += fmt::format("  {} ({:g}) vs {} ({:g}) -> {} [{}]\n", m.team_a, m.ps_a, m.team_b, m.ps_b, m.winner,
                            to_string(m.reason));
    }
    text += fmt::format("Champion: {}\n", o.champion());
    return text;
}

}  // namespace lteaudio
