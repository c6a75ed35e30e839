#include <numbers>
#include <stdexcept>

#include "superexp/pipeline.hpp"

namespace superexp {
namespace {

RunConfig base(Family family, double alpha, double beta, double k, double gamma, std::size_t states) {
    RunConfig c;
    c.potential.family = family;
    c.potential.alpha = alpha;
    c.potential.beta = beta;
    c.potential.k = k;
    c.potential.gamma = gamma;
    c.solve.states = states;
    return c;
}

std::string tag(double alpha) {
    std::string s = format_double(alpha);
    for (char& ch : s) {
        if (ch == '.') ch = 'p';
    }
    return "alpha_" + s;
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"};
}

std::vector<FigureRun> figure_runs(const std::string& figure) {
    std::vector<FigureRun> runs;
    if (figure == "fig1") {
        // Scaled spacings of the shifted SSO below its transition energy.
        const std::pair<double, std::size_t> sets[] = {{1e3, 10}, {4e3, 16}, {1e4, 24}, {1e5, 70}};
        for (auto [alpha, states] : sets) {
            RunConfig c = base(Family::ShiftedSSO, alpha, 0.0, 0.0, 1.0, states);
            c.grid.pad = 3.0;
            c.analysis.fit = false;
            c.analysis.state_metrics = false;
            runs.push_back({tag(alpha), c});
        }
    } else if (figure == "fig2") {
        for (double alpha : {1.0, 10.0, 1e3, 1e4, 1e6}) {
            RunConfig c = base(Family::RightSymSSO, alpha, 0.0, 0.0, 1.0, 60);
            c.analysis.fit = false;
            c.analysis.state_metrics = false;
            runs.push_back({tag(alpha), c});
        }
    } else if (figure == "fig3" || figure == "fig4") {
        const bool half = figure == "fig3";
        const std::vector<double> alphas =
            half ? std::vector<double>{1.0, 10.0, 1e2, 1e4} : std::vector<double>{1.0, 10.0, 1e2, 1e3, 1e4};
        for (double alpha : alphas) {
            RunConfig c = base(Family::PowerLawSSO, alpha, half ? 0.5 : 0.25, 0.0, 1.0, 60);
            c.analysis.fit = false;
            c.analysis.state_metrics = false;
            runs.push_back({tag(alpha), c});
        }
    } else if (figure == "fig5") {
        const struct {
            const char* name;
            double alpha, beta, k, gamma;
        } sets[] = {{"sublinear", 0.3, 0.05, 1.0, 1.0},
                    {"linear", 1.0, 0.05, 1.0, 1.0},
                    {"quadratic", 2.0, 0.1, 3.0, 0.05},
                    {"quartic", 4.0, 1.0, 2.0, 0.1}};
        for (const auto& s : sets) {
            RunConfig c = base(Family::OppCos, s.alpha, s.beta, s.k, s.gamma, 250);
            c.analysis.state_metrics = s.alpha < 1.0;
            runs.push_back({s.name, c});
        }
    } else if (figure == "fig6") {
        RunConfig c = base(Family::OppCos, 0.3, 0.05, 1.0, 1.0, 21);
        c.output.wavefunctions = true;
        c.analysis.fit = false;
        runs.push_back({"cos_lowest21", c});
    } else if (figure == "fig7") {
        runs.push_back({"sin", base(Family::OppSin, 0.3, 0.05, 1.0, 1.0, 250)});
    } else if (figure == "fig8") {
        RunConfig c = base(Family::OppSin, 0.3, 0.05, 1.0, 1.0, 17);
        c.output.wavefunctions = true;
        c.analysis.fit = false;
        runs.push_back({"sin_lowest17", c});
    } else if (figure == "fig9") {
        RunConfig c = base(Family::OppPhase, 0.3, 0.05, 1.0, 1.0, 21);
        c.sweep = SweepConfig{"phi", 0.0, 2.0 * std::numbers::pi, 128, 1};
        runs.push_back({"phase_sweep", c});
    } else if (figure == "fig10") {
        RunConfig c = base(Family::OppCos, 1.0, 0.05, 1.0, 1.0, 250);
        c.analysis.state_metrics = false;
        runs.push_back({"linear", c});
        RunConfig w = base(Family::OppCos, 1.0, 0.09, 0.2, 0.002, 17);
        w.output.wavefunctions = true;
        w.analysis.fit = false;
        runs.push_back({"linear_lowest17", w});
    } else if (figure == "fig11") {
        runs.push_back({"quadratic", base(Family::OppCos, 2.0, 0.1, 3.0, 0.05, 250)});
    } else if (figure == "fig12") {
        RunConfig c = base(Family::OppCos, 4.0, 1.0, 2.0, 0.1, 50);
        c.output.wavefunctions = true;
        runs.push_back({"quartic", c});
    } else {
        throw std::invalid_argument("unknown figure '" + figure + "' (expected fig1 .. fig12)");
    }
    return runs;
}

}  // namespace superexp
