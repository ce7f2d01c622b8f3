// Competition scoring: qualification marks, performance scores, the
// single-elimination playoff and the resulting marks.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lteaudio {

enum class Medium { audio, cable, simulation };

const char* to_string(Medium m);
Medium parse_medium(const std::string& text);

struct ScenarioResult {
    std::string team_id;
    Medium medium = Medium::simulation;
    double ber = 0.0;
    std::optional<double> snr_db;      // simulation only
    std::optional<double> distance_m;  // audio only: 0.25 or 1.0
    double throughput_bps = 0.0;

    /// Throws std::invalid_argument on a malformed result.
    void validate() const;
};

/// Lower-inclusive bands: <0.1 -> 10, [0.1,0.2) -> 8, [0.2,0.3) -> 4,
/// [0.3,0.4) -> 1, otherwise 0.
double qualification_mark(double ber);

/// Highest-scoring performance row the result satisfies, 0 if none.
double performance_score(const ScenarioResult& result);

enum class MatchReason { ps, ber, throughput, arbitrary_tiebreak };

const char* to_string(MatchReason r);

struct MatchRecord {
    int round = 0;
    std::string team_a;
    std::string team_b;
    std::string winner;
    std::string loser;
    MatchReason reason = MatchReason::ps;
    double ps_a = 0.0;
    double ps_b = 0.0;
    int duration_min = 20;  // scheduled slot, not enforced
};

MatchRecord run_match(const ScenarioResult& a, const ScenarioResult& b);

enum class Stage { champion, finalist, semi_finalist, quarter_finalist, round_of_16 };

struct Placement {
    Stage stage = Stage::champion;
    int rank = 1;  // 1-based final position
};

struct TeamStanding {
    std::string team_id;
    Placement placement;
    double ps = 0.0;  // best PS over the playoff rounds played
};

struct BracketOutcome {
    int n_teams = 0;
    std::vector<std::string> seeding;       // seed 1 first
    std::vector<MatchRecord> matches;       // in play order
    std::vector<TeamStanding> standings;    // by rank
    std::string champion() const { return standings.front().team_id; }
};

/// Round 0 holds qualification results (seeding by BER, then team id);
/// rounds 1..log2(n) are the playoff rounds.
using RoundResults = std::map<int, std::map<std::string, ScenarioResult>>;

/// n_teams must be 2, 4, 8 or 16.
BracketOutcome run_bracket(const RoundResults& results, int n_teams);

/// 10, 8, 7, 6, 5, 4, 3, 2 for ranks 1..8; ranks 9..16 score 0.
double champions_score(const Placement& placement, int n_teams);

struct MarkWithWarning {
    double mark = 0.0;
    std::optional<std::string> warning;
};

/// alpha * cs + beta * ps. Warns when the weights do not sum to 1.
MarkWithWarning final_mark(double cs, double ps, double alpha, double beta);

/// final mark times the mean peer assessment, clipped to [0, 10].
double individual_mark(double final_mark, const std::vector<double>& assessments);

/// Human-readable bracket, one line per match.
std::string bracket_tree(const BracketOutcome& outcome);

}  // namespace lteaudio
