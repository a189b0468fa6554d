#pragma once

#include <string>
#include <vector>

namespace weil::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2 };

struct RunConfig {
    int level = 0;
    int genus = 1;
    int n = 0;           // modulus exponent; 0 selects the suite default
    long delta = 0;      // divisor for the omega operator; 0 means none
    std::string format;  // json, csv or text; empty selects the command default
    std::string out;     // empty writes to stdout
    int workers = 1;
    int max_level = 30;
    std::string method = "auto";
    bool traces = false;
};

int cmd_gauss(const RunConfig& cfg, long a, long b, int level);
int cmd_rep_show(const RunConfig& cfg);
int cmd_decompose(const RunConfig& cfg);
int cmd_charsum(const RunConfig& cfg);
int cmd_census(const RunConfig& cfg);
int cmd_orbits(const RunConfig& cfg);
int cmd_semiclassical(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites);

}  // namespace weil::cli
