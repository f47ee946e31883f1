#include "hetero/serialize.hpp"

#include <cstdio>

namespace hetero {

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

void to_json(json& j, const FunctionSpec& s) {
    j = json{{"kind", to_string(s.kind)}};
    switch (s.kind) {
        case FunctionKind::constant:
            j["value"] = s.level;
            break;
        case FunctionKind::sinusoid:
            j["level"] = s.level;
            j["amplitude"] = s.amplitude;
            j["periods"] = s.count;
            j["gamma"] = s.gamma;
            break;
        case FunctionKind::sawtooth_hoelder:
            j["level"] = s.level;
            j["amplitude"] = s.amplitude;
            j["teeth"] = s.count;
            j["gamma"] = s.gamma;
            break;
        case FunctionKind::smooth_bump_sum:
            j["level"] = s.level;
            j["rho"] = s.amplitude;
            j["signs"] = s.coefs;
            j["beta"] = s.gamma;
            break;
        case FunctionKind::spiky_v1:
            j["n"] = s.grid_n;
            j["c"] = s.c;
            j["beta"] = s.gamma;
            break;
        case FunctionKind::transition_v1:
            j["n"] = s.grid_n;
            j["c"] = s.c;
            j["alpha"] = s.alpha;
            j["beta"] = s.gamma;
            break;
        case FunctionKind::kappa_prior:
            j["n"] = s.grid_n;
            j["level"] = s.level;
            j["coefs"] = s.coefs;
            j["gamma"] = s.gamma;
            break;
        case FunctionKind::custom_table:
            j["x"] = s.table_x;
            j["y"] = s.table_y;
            j["gamma"] = s.gamma;
            break;
    }
    j["hoelder_M"] = s.hoelder_M;
}

void from_json(const json& j, FunctionSpec& s) {
    const FunctionKind kind = function_kind_from_string(j.at("kind").get<std::string>());
    auto num = [&](const char* key, double fallback) {
        return j.contains(key) ? j.at(key).get<double>() : fallback;
    };
    auto integer = [&](const char* key, int fallback) {
        return j.contains(key) ? j.at(key).get<int>() : fallback;
    };
    switch (kind) {
        case FunctionKind::constant:
            s = FunctionSpec::constant(num("value", 0.0));
            break;
        case FunctionKind::sinusoid:
            s = FunctionSpec::sinusoid(num("level", 0.0), num("amplitude", 1.0),
                                       integer("periods", 1), num("gamma", 1.0));
            break;
        case FunctionKind::sawtooth_hoelder:
            if (j.contains("M") && !j.contains("amplitude")) {
                s = FunctionSpec::sawtooth_m_scaled(num("M", 10.0), integer("teeth", 8),
                                                    num("gamma", 1.0));
                s.level = num("level", 0.0);
            } else {
                s = FunctionSpec::sawtooth(num("level", 0.0), num("amplitude", 1.0),
                                           integer("teeth", 8), num("gamma", 1.0));
            }
            break;
        case FunctionKind::smooth_bump_sum:
            s = FunctionSpec::smooth_bump_sum(num("level", 1.0), num("rho", 0.0),
                                              j.at("signs").get<std::vector<double>>(),
                                              num("beta", 0.4));
            break;
        case FunctionKind::spiky_v1:
            s = FunctionSpec::spiky_v1(j.at("n").get<int>(), num("c", 0.1), num("beta", 0.25));
            break;
        case FunctionKind::transition_v1:
            s = FunctionSpec::transition_v1(j.at("n").get<int>(), num("c", 0.1),
                                            num("alpha", 0.2), num("beta", 0.4));
            break;
        case FunctionKind::kappa_prior:
            s = FunctionSpec::kappa_prior(j.at("n").get<int>(), num("level", 0.0),
                                          j.at("coefs").get<std::vector<double>>(),
                                          num("gamma", 1.0));
            break;
        case FunctionKind::custom_table:
            s = FunctionSpec::custom_table(j.at("x").get<std::vector<double>>(),
                                           j.at("y").get<std::vector<double>>(),
                                           num("gamma", 1.0));
            break;
    }
}

void to_json(json& j, const NoiseSpec& s) {
    j = json{{"kind", to_string(s.kind)}, {"c_xi", s.c_xi}};
    switch (s.kind) {
        case NoiseKind::gaussian_std:
            break;
        case NoiseKind::scaled_gaussian_mixture:
            j["weights"] = s.weights;
            j["variances"] = s.variances;
            break;
        case NoiseKind::matched_moment_discrete:
            j["q"] = s.q;
            break;
        case NoiseKind::rademacher_shift:
            j["shift"] = s.shift;
            break;
    }
}

void from_json(const json& j, NoiseSpec& s) {
    s = NoiseSpec{};
    s.kind = noise_kind_from_string(j.value("kind", std::string("gaussian-std")));
    get_if(j, "weights", s.weights);
    get_if(j, "variances", s.variances);
    get_if(j, "q", s.q);
    get_if(j, "shift", s.shift);
    get_if(j, "c_xi", s.c_xi);
    s.validate();
}

void to_json(json& j, const RegressionModel& m) {
    j = json{{"n", m.n}, {"f", m.f}, {"V", m.V}, {"noise", m.noise}};
}

void from_json(const json& j, RegressionModel& m) {
    m = RegressionModel{};
    j.at("n").get_to(m.n);
    get_if(j, "f", m.f);
    get_if(j, "V", m.V);
    get_if(j, "noise", m.noise);
}

void to_json(json& j, const BaseKernel& k) {
    j = json{{"kind", to_string(k.kind())}};
    if (k.kind() == BaseKernelKind::custom_table) {
        j["u"] = k.table_u();
        j["k"] = k.table_k();
    }
}

void from_json(const json& j, BaseKernel& k) {
    const BaseKernelKind kind =
        base_kernel_kind_from_string(j.value("kind", std::string("box")));
    switch (kind) {
        case BaseKernelKind::box: k = BaseKernel::box(); break;
        case BaseKernelKind::quartic_plateau: k = BaseKernel::quartic_plateau(); break;
        case BaseKernelKind::custom_table:
            k = BaseKernel::custom_table(j.at("u").get<std::vector<double>>(),
                                         j.at("k").get<std::vector<double>>());
            break;
    }
}

void to_json(json& j, const StatisticConfig& c) {
    j = json{{"statistic", to_string(c.id)}, {"kernel", c.base}, {"alpha", c.alpha},
             {"beta", c.beta}, {"c", c.c}};
    j["C_h"] = c.C_h ? json(*c.C_h) : json(nullptr);
    j["h"] = c.h ? json(*c.h) : json(nullptr);
}

void from_json(const json& j, StatisticConfig& c) {
    c = StatisticConfig{};
    if (j.contains("statistic")) c.id = statistic_id_from_string(j.at("statistic").get<std::string>());
    get_if(j, "kernel", c.base);
    get_if(j, "alpha", c.alpha);
    get_if(j, "beta", c.beta);
    get_if(j, "c", c.c);
    if (j.contains("C_h") && !j.at("C_h").is_null()) c.C_h = j.at("C_h").get<double>();
    if (j.contains("h") && !j.at("h").is_null()) c.h = j.at("h").get<double>();
}

void to_json(json& j, const StatisticReport& r) {
    j = json{{"statistic_id", to_string(r.statistic_id)}, {"value", r.value}, {"n", r.n}};
    json terms = json::object();
    for (const auto& t : r.terms) terms[t.name] = t.value;
    j["terms"] = terms;
    j["proxy"] = r.proxy ? json(*r.proxy) : json(nullptr);
    j["h"] = r.h ? json(*r.h) : json(nullptr);
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
}

void to_json(json& j, const CalibratedTest& t) {
    j = json{{"statistic", t.statistic},
             {"setting", to_string(t.setting)},
             {"n", t.n},
             {"threshold", t.threshold},
             {"mode", to_string(t.mode)},
             {"eta", t.eta},
             {"level", t.level},
             {"replicates", t.replicates},
             {"seed", t.seed},
             {"scenario_digests", t.scenario_digests},
             {"scenario_quantiles", t.scenario_quantiles},
             {"zeta", t.zeta},
             {"theory_constant", t.theory_constant}};
}

void from_json(const json& j, CalibratedTest& t) {
    t = CalibratedTest{};
    j.at("statistic").get_to(t.statistic);
    t.setting = setting_from_string(j.at("setting").get<std::string>());
    j.at("n").get_to(t.n);
    j.at("threshold").get_to(t.threshold);
    t.mode = calibration_mode_from_string(j.value("mode", std::string("mc-quantile")));
    get_if(j, "eta", t.eta);
    get_if(j, "level", t.level);
    get_if(j, "replicates", t.replicates);
    get_if(j, "seed", t.seed);
    get_if(j, "scenario_digests", t.scenario_digests);
    get_if(j, "scenario_quantiles", t.scenario_quantiles);
    get_if(j, "zeta", t.zeta);
    get_if(j, "theory_constant", t.theory_constant);
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string model_digest(const RegressionModel& m) {
    return digest_hex(json(m).dump());
}

}  // namespace hetero
