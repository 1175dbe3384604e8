#pragma once

#include <string>
#include <vector>

#include "expframe/point_measure.hpp"

namespace expframe {

inline constexpr const char* kVersion = "0.1.0";

struct CommandResult {
    int exitCode = 0;  // 0 ok, 1 numeric verdict FAIL, 2 usage error
    std::string reportJson;
};

/// Dispatch a full command line (without argv[0]); the report is a JSON
/// document echoing all parameters. Deterministic for a fixed config and seed.
CommandResult runCommand(const std::vector<std::string>& args);

struct LocalL2Checkpoint {
    long long j = 0;
    double partialSum = 0.0;
};

struct LocalL2Report {
    double alpha = 0.0;
    bool convergent = false;  // exponent 2-4*alpha > 1, i.e. alpha < 1/4
    std::vector<LocalL2Checkpoint> checkpoints;
    double limitEstimate = 0.0;   // tail-corrected, convergent case only
    double logLogSlope = 0.0;     // slope of log S_J vs log J over the last decade
    double logTrendIncrement = 0.0;  // S(J) - S(J/10), for the boundary growth
};

/// Partial sums S_J = (1/(1-2a)) sum_{j<=J} j^{4a-2} with convergence
/// classification at the alpha < 1/4 threshold. Requires 0 < alpha < 1/2.
LocalL2Report localL2Demo(double alpha, long long jMax);

/// Parse an inline generator spec such as "lattice:b=1,lo=-100,hi=100",
/// "perturbed:b=1,jitter=0.1,seed=7,lo=0,hi=100",
/// "modelset:p=0,q=1,d=2,wlo=0,whi=1,lo=0,hi=1000" or
/// "lebesgue:spacing=0.01,lo=0,hi=10".
PointMeasure measureFromSpec(const std::string& spec);

}  // namespace expframe
