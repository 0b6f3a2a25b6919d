// schedule.hpp - (a, b, c) threshold schedules for the fixed-to-variable
// energy reductions, with feasibility validation against
// b <= min{ N^{-1} a c^2, c }.
#pragma once

#include <string>

namespace loclab {

enum class ScheduleFramework { power_law, subexp, fmm };

std::string to_string(ScheduleFramework f);
ScheduleFramework framework_from_string(const std::string& s);

struct ScheduleInputs {
    double m = 1.0;      // fmm
    double delta = 0.25; // subexp
    double kappa = 6.0;  // power_law
    double theta = 0.1;  // power_law
    int k = 0;           // power_law
    int dim = 1;         // power_law
};

struct ScheduleParams {
    ScheduleFramework framework = ScheduleFramework::fmm;
    int l = 1;
    long long ball_size = 1; // N in the feasibility condition
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    bool feasible = true;
    std::string failing_side; // empty when feasible
    double slack_ac2 = 0.0;   // N^{-1} a c^2 / b  (>= 1 when that side holds)
    double slack_c = 0.0;     // c / b             (>= 1 when that side holds)
};

// Closed-form (a,b,c) for the chosen framework, validated; throws
// ScheduleInfeasible when the condition fails at this (L, N).
ScheduleParams make_schedule(ScheduleFramework framework, int l, long long ball_size,
                             const ScheduleInputs& inputs);

// Same computation, but an infeasible schedule is returned with the failure
// recorded instead of thrown. Reports must echo the flag.
ScheduleParams make_schedule_unchecked(ScheduleFramework framework, int l, long long ball_size,
                                       const ScheduleInputs& inputs);

// Validates an explicit (a, b, c) triple against b <= min{N^{-1} a c^2, c}.
ScheduleParams make_custom_schedule(double a, double b, double c, int l, long long ball_size);

} // namespace loclab
