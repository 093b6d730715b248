#pragma once

#include <string>
#include <utility>
#include <vector>

#include "khw/braidword.hpp"
#include "khw/states.hpp"
#include "khw/whittler.hpp"

namespace khw {

// Names accepted in RunConfig::checks, in canonical report order.
std::vector<std::string> known_checks();

struct RunConfig {
    std::vector<std::pair<int, int>> jobs;  // (n, k), processed in order
    std::vector<std::string> checks;        // subset of known_checks(); empty = all
    GradingConvention convention = GradingConvention::printed;
    int workers = 1;        // parallel jobs; report order stays fixed
    std::string out_dir;    // when nonempty, JSONL exports are written here
    bool verbose = false;
};

struct CheckOutcome {
    std::string name;
    bool pass;
    std::string detail;
};

struct JobReport {
    int n, k;
    long long states = 0, enhanced = 0, isos = 0, edges = 0, survivors = 0, warnings = 0;
    std::vector<CheckOutcome> checks;
    bool pass = true;
    bool cycle = false;  // connecting-map graph had a cycle (internal assertion class)
    double seconds = 0.0;
};

struct VerificationReport {
    RunConfig config;
    std::vector<JobReport> jobs;
    bool pass = true;
    bool cycle = false;
};

VerificationReport run_verify(const RunConfig& cfg);

// Single JSON document; deterministic for a fixed config except the "timing"
// subobjects.
std::string report_json(const VerificationReport& rep);

// JSON-lines exports for one braid: enhanced states (with survivor flags),
// selected isomorphisms, and connecting-map edges.  Returns the file paths.
std::vector<std::string> export_jsonl(const BraidWord& b, const WhittledComplex& wc,
                                      const std::string& dir,
                                      GradingConvention convention = GradingConvention::printed);

// One enhanced-state record as a JSON line (shared by exports and CLI).
std::string state_record(const BraidWord& b, const EnhancedState& e, bool survivor,
                         GradingConvention convention = GradingConvention::printed);

}  // namespace khw
