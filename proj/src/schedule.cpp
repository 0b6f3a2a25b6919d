#include "loclab/schedule.hpp"

#include <cmath>

#include "loclab/errors.hpp"

namespace loclab {

std::string to_string(ScheduleFramework f) {
    switch (f) {
        case ScheduleFramework::power_law: return "power_law";
        case ScheduleFramework::subexp: return "subexp";
        default: return "fmm";
    }
}

ScheduleFramework framework_from_string(const std::string& s) {
    if (s == "power_law") return ScheduleFramework::power_law;
    if (s == "subexp") return ScheduleFramework::subexp;
    if (s == "fmm") return ScheduleFramework::fmm;
    throw ConfigError("unknown schedule framework '" + s + "'");
}

ScheduleParams make_schedule_unchecked(ScheduleFramework framework, int l, long long ball_size,
                                       const ScheduleInputs& in) {
    if (l < 1) throw ConfigError("schedule needs L >= 1");
    if (ball_size < 1) throw ConfigError("schedule needs a positive ball size");
    ScheduleParams s;
    s.framework = framework;
    s.l = l;
    s.ball_size = ball_size;
    const double dl = static_cast<double>(l);
    switch (framework) {
        case ScheduleFramework::fmm: {
            if (in.m <= 0.0) throw ConfigError("fmm schedule needs m > 0");
            s.a = std::exp(-in.m * dl / 3.0);
            s.b = std::exp(-2.0 * in.m * dl / 3.0);
            s.c = std::exp(-in.m * dl / 8.0);
            break;
        }
        case ScheduleFramework::subexp: {
            if (!(in.delta > 0.0)) throw ConfigError("subexp schedule needs delta > 0");
            const double ld = std::pow(dl, in.delta);
            s.a = std::exp(-ld / 3.0);
            s.b = std::exp(-2.0 * ld / 3.0);
            s.c = std::exp(-ld / 8.0);
            break;
        }
        case ScheduleFramework::power_law: {
            if (!(in.kappa > 0.0)) throw ConfigError("power_law schedule needs kappa > 0");
            const double u = std::pow(1.0 + in.theta, in.k);
            s.a = std::pow(dl, -(3.0 * in.kappa / 5.0) * u);
            s.b = std::pow(dl, -(in.kappa / 5.0) * u);
            s.c = std::pow(dl, -(in.kappa / 5.0 - static_cast<double>(in.dim) / 2.0) * u);
            break;
        }
    }
    const double side_ac2 = s.a * s.c * s.c / static_cast<double>(ball_size);
    s.slack_ac2 = side_ac2 / s.b;
    s.slack_c = s.c / s.b;
    if (s.b > side_ac2) {
        s.feasible = false;
        s.failing_side = "b > N^-1 a c^2";
    }
    if (s.b > s.c) {
        s.feasible = false;
        s.failing_side += s.failing_side.empty() ? "b > c" : "; b > c";
    }
    return s;
}

ScheduleParams make_schedule(ScheduleFramework framework, int l, long long ball_size,
                             const ScheduleInputs& in) {
    ScheduleParams s = make_schedule_unchecked(framework, l, ball_size, in);
    if (!s.feasible)
        throw ScheduleInfeasible(s.failing_side + " at L=" + std::to_string(l) +
                                 ", N=" + std::to_string(ball_size));
    return s;
}

ScheduleParams make_custom_schedule(double a, double b, double c, int l, long long ball_size) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ConfigError("thresholds must be positive");
    if (l < 1 || ball_size < 1) throw ConfigError("schedule needs L >= 1 and N >= 1");
    ScheduleParams s;
    s.framework = ScheduleFramework::fmm; // tag unused for custom triples
    s.l = l;
    s.ball_size = ball_size;
    s.a = a;
    s.b = b;
    s.c = c;
    const double side_ac2 = a * c * c / static_cast<double>(ball_size);
    s.slack_ac2 = side_ac2 / b;
    s.slack_c = c / b;
    if (b > side_ac2) {
        s.feasible = false;
        s.failing_side = "b > N^-1 a c^2";
    }
    if (b > c) {
        s.feasible = false;
        s.failing_side += s.failing_side.empty() ? "b > c" : "; b > c";
    }
    if (!s.feasible)
        throw ScheduleInfeasible(s.failing_side + " at L=" + std::to_string(l) +
                                 ", N=" + std::to_string(ball_size));
    return s;
}

} // namespace loclab
