#include "clearnet/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace clearnet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path + "/" + key, "missing");
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Vec parse_vector(const json& j, const std::string& path, int expect = -1) {
    if (!j.is_array()) fail(path, "expected an array");
    if (expect >= 0 && static_cast<int>(j.size()) != expect) {
        fail(path, "expected " + std::to_string(expect) + " entries, got " +
                       std::to_string(j.size()));
    }
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = as_number(j[i], path + "/" + std::to_string(i));
    }
    return v;
}

Mat parse_matrix(const json& j, const std::string& path, int expect = -1) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    if (expect >= 0 && rows != expect) {
        fail(path, "expected " + std::to_string(expect) + " rows, got " + std::to_string(rows));
    }
    Mat m(rows, rows);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[i];
        const std::string row_path = path + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<int>(row.size()) != rows) {
            fail(row_path, "expected " + std::to_string(rows) + " columns");
        }
        for (int k = 0; k < rows; ++k) {
            m(i, k) = as_number(row[k], row_path + "/" + std::to_string(k));
        }
    }
    return m;
}

json parse_root(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("config: not valid JSON");
    return j;
}

FinancialNetwork parse_network(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    FinancialNetwork net;
    net.n = static_cast<int>(as_number(require(j, "n", path), path + "/n"));
    net.liabilities = parse_matrix(require(j, "L", path), path + "/L", net.n + 1);
    if (j.contains("names")) {
        for (std::size_t i = 0; i < j["names"].size(); ++i) {
            net.names.push_back(j["names"][i].get<std::string>());
        }
    }
    net.validate();
    return net;
}

CashFlowSpec parse_cashflow(const json& j, const std::string& path, int size) {
    const std::string type = require(j, "type", path).get<std::string>();
    if (type == "constant") {
        return CashFlowSpec::constant(parse_vector(require(j, "mu", path), path + "/mu", size));
    }
    if (type == "bridge") {
        return CashFlowSpec::bridge(
            parse_vector(require(j, "target", path), path + "/target", size),
            as_number(require(j, "vol", path), path + "/vol"));
    }
    if (type == "affine") {
        return CashFlowSpec::affine(parse_vector(require(j, "mu", path), path + "/mu", size),
                                    parse_matrix(require(j, "sigma", path), path + "/sigma", size));
    }
    if (type == "piecewise") {
        std::vector<CashRateWindow> wins;
        const json& arr = require(j, "windows", path);
        for (std::size_t w = 0; w < arr.size(); ++w) {
            const std::string wp = path + "/windows/" + std::to_string(w);
            wins.push_back(CashRateWindow{
                parse_vector(require(arr[w], "rate", wp), wp + "/rate", size),
                as_number(require(arr[w], "start", wp), wp + "/start"),
                as_number(require(arr[w], "end", wp), wp + "/end")});
        }
        return CashFlowSpec::piecewise(std::move(wins));
    }
    fail(path + "/type", "unknown cash flow type '" + type + "'");
}

LiabilitySchedule parse_liabilities(const json& j, const std::string& path, const Mat& aggregate,
                                    double horizon) {
    const std::string type = require(j, "type", path).get<std::string>();
    if (type == "constant") {
        // Uses the network's liability matrix as the aggregate.
        return LiabilitySchedule::constant(aggregate, horizon);
    }
    if (type == "windows") {
        std::vector<RateWindow> wins;
        const json& arr = require(j, "windows", path);
        for (std::size_t w = 0; w < arr.size(); ++w) {
            const std::string wp = path + "/windows/" + std::to_string(w);
            wins.push_back(RateWindow{
                parse_matrix(require(arr[w], "rate", wp), wp + "/rate",
                             static_cast<int>(aggregate.rows())),
                as_number(require(arr[w], "start", wp), wp + "/start"),
                as_number(require(arr[w], "end", wp), wp + "/end")});
        }
        return LiabilitySchedule::windows(std::move(wins));
    }
    fail(path + "/type", "unknown liability schedule type '" + type + "'");
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

FinancialNetwork network_from_json(const std::string& text) {
    const json j = parse_root(text);
    return parse_network(j.contains("network") ? j["network"] : j, "network");
}

ScenarioConfig scenario_from_json(const std::string& text) {
    const json j = parse_root(text);
    ScenarioConfig cfg;
    cfg.network = parse_network(require(j, "network", "config"), "network");
    const int size = cfg.network.size();

    cfg.horizon = j.contains("T") ? as_number(j["T"], "T") : 1.0;
    if (j.contains("dt")) cfg.dt0 = as_number(j["dt"], "dt");
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("paths")) cfg.n_paths = j["paths"].get<int>();
    if (j.contains("V0")) cfg.initial_wealth = parse_vector(j["V0"], "V0", size);
    if (j.contains("x")) cfg.external_assets = parse_vector(j["x"], "x", size);
    if (cfg.initial_wealth.size() == 0 && cfg.external_assets.size() > 0) {
        cfg.initial_wealth = cfg.external_assets;
    }

    if (j.contains("liabilities")) {
        cfg.liabilities =
            parse_liabilities(j["liabilities"], "liabilities", cfg.network.liabilities,
                              cfg.horizon);
    } else {
        cfg.liabilities = LiabilitySchedule::constant(cfg.network.liabilities, cfg.horizon);
    }

    if (j.contains("cashflow")) {
        cfg.cashflow = parse_cashflow(j["cashflow"], "cashflow", size);
    } else {
        // Default: deterministic flows matching the schedule, so aggregate
        // data reproduces the static clearing solution.
        std::vector<CashRateWindow> wins;
        for (const auto& w : cfg.liabilities.window_list()) {
            wins.push_back(CashRateWindow{
                Vec(w.rate.colwise().sum().transpose() - w.rate.rowwise().sum()), w.t_start,
                w.t_end});
        }
        cfg.cashflow = CashFlowSpec::piecewise(std::move(wins));
    }
    return cfg;
}

StaticProblem static_problem_from_json(const std::string& text) {
    const json j = parse_root(text);
    FinancialNetwork net = parse_network(require(j, "network", "config"), "network");
    StaticProblem prob;
    prob.liabilities = net.liabilities;
    if (j.contains("x")) {
        prob.external_assets = parse_vector(j["x"], "x", net.size());
    } else if (j.contains("V0")) {
        prob.external_assets = parse_vector(j["V0"], "V0", net.size());
    } else {
        fail("config", "static run needs \"x\" (or \"V0\") external assets");
    }
    prob.validate();
    return prob;
}

namespace {

int discrete_steps_from_json(const json& j) {
    return j.contains("n_steps") ? j["n_steps"].get<int>() : 10;
}

}  // namespace

DiscreteSchedule discrete_schedule_from_json(const std::string& text) {
    const json j = parse_root(text);
    FinancialNetwork net = parse_network(require(j, "network", "config"), "network");
    const int size = net.size();

    DiscreteSchedule sched;
    if (j.contains("V0")) {
        sched.initial_wealth = parse_vector(j["V0"], "V0", size);
    } else {
        sched.initial_wealth = Vec::Zero(size);
    }

    if (j.contains("steps")) {
        const json& arr = j["steps"];
        if (!arr.is_array() || arr.empty()) fail("steps", "expected a nonempty array");
        for (std::size_t t = 0; t < arr.size(); ++t) {
            const std::string sp = "steps/" + std::to_string(t);
            sched.cash.push_back(parse_vector(require(arr[t], "c", sp), sp + "/c", size));
            sched.liabilities.push_back(parse_matrix(require(arr[t], "L", sp), sp + "/L", size));
        }
        sched.validate();
        return sched;
    }

    // No explicit dates: discretize the scenario's processes.
    const ScenarioConfig cfg = scenario_from_json(text);
    const int steps = discrete_steps_from_json(j);
    if (steps < 1) fail("n_steps", "must be >= 1");
    const double dt = cfg.horizon / steps;
    sched.initial_wealth = cfg.initial_wealth;
    for (int k = 0; k < steps; ++k) {
        sched.cash.push_back(cfg.cashflow.deterministic_integral(k * dt, (k + 1) * dt));
        sched.liabilities.push_back(cfg.liabilities.aggregate(k * dt, (k + 1) * dt));
    }
    sched.validate();
    return sched;
}

void write_static_csv(std::ostream& os, const FinancialNetwork&, const StaticSolution& sol) {
    os << "node,wealth,payment,default_order\n";
    for (Eigen::Index i = 0; i < sol.wealth.size(); ++i) {
        os << i << ',' << std::setprecision(12) << sol.wealth(i) << ',' << sol.payments(i) << ','
           << sol.default_order(static_cast<int>(i)) << '\n';
    }
}

void write_discrete_csv(std::ostream& os, const DiscreteTrajectory& traj, bool emit_exposures) {
    if (traj.states.empty()) return;
    const int size = static_cast<int>(traj.states.front().wealth.size());
    os << "t";
    for (int i = 0; i < size; ++i) os << ",V_" << i;
    if (emit_exposures) {
        for (int i = 0; i < size; ++i) {
            for (int k = 0; k < size; ++k) os << ",A_" << i << '_' << k;
        }
    }
    os << '\n';
    os << std::setprecision(12);
    for (const auto& st : traj.states) {
        os << st.t;
        for (int i = 0; i < size; ++i) os << ',' << st.wealth(i);
        if (emit_exposures) {
            for (int i = 0; i < size; ++i) {
                for (int k = 0; k < size; ++k) os << ',' << st.exposures(i, k);
            }
        }
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const std::vector<ContinuousState>& states) {
    if (states.empty()) return;
    const int size = static_cast<int>(states.front().wealth.size());
    os << "t";
    for (int i = 0; i < size; ++i) os << ",c_" << i;
    for (int i = 0; i < size; ++i) os << ",V_" << i;
    os << '\n';
    os << std::setprecision(12);
    for (const auto& st : states) {
        os << st.t;
        for (int i = 0; i < size; ++i) os << ',' << st.cash(i);
        for (int i = 0; i < size; ++i) os << ',' << st.wealth(i);
        os << '\n';
    }
}

void write_events_csv(std::ostream& os, const std::vector<WealthEvent>& events) {
    os << "t,node,direction\n";
    os << std::setprecision(12);
    for (const auto& ev : events) {
        os << ev.t << ',' << ev.node << ',' << ev.direction << '\n';
    }
}

void write_samples_csv(std::ostream& os, const Mat& terminal_wealth) {
    os << "path";
    for (Eigen::Index i = 0; i < terminal_wealth.cols(); ++i) os << ",V_" << i;
    os << '\n';
    os << std::setprecision(12);
    for (Eigen::Index p = 0; p < terminal_wealth.rows(); ++p) {
        os << p;
        for (Eigen::Index i = 0; i < terminal_wealth.cols(); ++i) {
            os << ',' << terminal_wealth(p, i);
        }
        os << '\n';
    }
}

std::string mc_summary_json(const ScenarioConfig& config, const McSummary& summary) {
    json j;
    j["paths"] = config.n_paths;
    j["seed"] = config.seed;
    j["dt"] = config.dt0;
    j["T"] = config.horizon;
    j["rng"] = summary.rng_algorithm;
    j["default_frequency"] = std::vector<double>(
        summary.default_frequency.data(),
        summary.default_frequency.data() + summary.default_frequency.size());
    j["society_payment"] = {{"mean", summary.society_payment_mean},
                            {"min", summary.society_payment_min},
                            {"max", summary.society_payment_max}};
    for (const auto& [q, v] : summary.society_payment_quantiles) {
        j["society_payment"]["q" + std::to_string(q).substr(0, 4)] = v;
    }
    j["society_wealth"] = {{"mean", summary.society_wealth_mean},
                           {"min", summary.society_wealth_min},
                           {"max", summary.society_wealth_max}};
    for (const auto& [q, v] : summary.society_wealth_quantiles) {
        j["society_wealth"]["q" + std::to_string(q).substr(0, 4)] = v;
    }
    j["total_steps"] = summary.total_steps;
    j["warnings"] = summary.warnings;
    return j.dump(2);
}

}  // namespace clearnet
