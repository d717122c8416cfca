#include "rwa/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rwa {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

Json parse_json(const fs::path& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad JSON in " + path.string() + ": " + e.what());
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Json hazard_to_json(const Hazard& h) {
    Json j;
    j["family"] = h.family_name();
    switch (h.kind) {
        case Hazard::Kind::Zero: break;
        case Hazard::Kind::Constant:
            j["p"] = h.p;
            j["onset"] = h.onset;
            break;
        case Hazard::Kind::Reciprocal:
            j["denom"] = h.denom;
            j["onset"] = h.onset;
            break;
        case Hazard::Kind::Table: j["values"] = h.values; break;
    }
    return j;
}

Hazard hazard_from_json(const Json& j) {
    const std::string family = j.at("family");
    if (family == "zero") return Hazard::zero();
    if (family == "constant") return Hazard::constant(j.at("p"), j.value("onset", 0));
    if (family == "reciprocal") return Hazard::reciprocal(j.at("denom"), j.value("onset", 0));
    if (family == "table") return Hazard::table(j.at("values").get<std::vector<double>>());
    throw ValidationError("unknown hazard family: " + family);
}

Json band_to_json(const Band& b) { return Json::array({b.lo, b.hi}); }

Band band_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("friction band must be [lo, hi]");
    return {j[0], j[1]};
}

Json fss_to_json(const FssSpec& s) {
    Json j;
    j["config_count"] = s.config_count;
    j["jump_hazard"] = Json::array();
    for (const auto& h : s.jump_hazard) j["jump_hazard"].push_back(hazard_to_json(h));
    j["transition"] = s.transition;
    j["friction"] = Json::array();
    for (const auto& b : s.friction) j["friction"].push_back(band_to_json(b));
    return j;
}

FssSpec fss_from_json(const Json& j) {
    FssSpec s;
    s.config_count = j.at("config_count");
    for (const auto& h : j.at("jump_hazard")) s.jump_hazard.push_back(hazard_from_json(h));
    s.transition = j.at("transition").get<std::vector<std::vector<double>>>();
    for (const auto& b : j.at("friction")) s.friction.push_back(band_from_json(b));
    return s;
}

Json model_to_json(const RwaModel& m) {
    Json j;
    j["base_dry"] = m.base_dry;
    j["viscous"] = m.viscous;
    j["noise_sigma"] = m.noise_sigma;
    j["systems"] = Json::array();
    for (const auto& s : m.systems) j["systems"].push_back(fss_to_json(s));
    return j;
}

RwaModel model_from_json(const Json& j) {
    RwaModel m;
    m.base_dry = j.at("base_dry");
    m.viscous = j.at("viscous");
    m.noise_sigma = j.at("noise_sigma");
    for (const auto& s : j.at("systems")) m.systems.push_back(fss_from_json(s));
    return m;
}

Json effect_to_json(const AnomalyEffect& e) {
    Json j;
    j["dry_shift"] = e.dry_shift;
    j["viscous_shift"] = e.viscous_shift;
    j["band_override"] = Json::array();
    for (const auto& bands : e.band_override) {
        if (!bands.has_value()) {
            j["band_override"].push_back(nullptr);
        } else {
            Json arr = Json::array();
            for (const auto& b : *bands) arr.push_back(band_to_json(b));
            j["band_override"].push_back(arr);
        }
    }
    return j;
}

AnomalyEffect effect_from_json(const Json& j) {
    AnomalyEffect e;
    e.dry_shift = j.value("dry_shift", 0.0);
    e.viscous_shift = j.value("viscous_shift", 0.0);
    if (j.contains("band_override")) {
        for (const auto& entry : j.at("band_override")) {
            if (entry.is_null()) {
                e.band_override.emplace_back(std::nullopt);
            } else {
                std::vector<Band> bands;
                for (const auto& b : entry) bands.push_back(band_from_json(b));
                e.band_override.emplace_back(std::move(bands));
            }
        }
    }
    return e;
}

Json status_to_json(const AnomalyStatus& st) {
    Json arr = Json::array();
    arr.push_back(st.dry ? 1 : 0);
    arr.push_back(st.viscous ? 1 : 0);
    for (auto s : st.systems) arr.push_back(s ? 1 : 0);
    return arr;
}

AnomalyStatus status_from_json(const Json& arr) {
    if (!arr.is_array() || arr.size() < 2) throw ValidationError("theta must list at least 2 flags");
    AnomalyStatus st;
    st.dry = arr[0].get<int>() != 0;
    st.viscous = arr[1].get<int>() != 0;
    for (std::size_t i = 2; i < arr.size(); ++i) st.systems.push_back(arr[i].get<int>() != 0 ? 1 : 0);
    return st;
}

Json svm_to_json(const LinearSvm& m) {
    Json j;
    j["weights"] = m.weights;
    j["bias"] = m.bias;
    return j;
}

LinearSvm svm_from_json(const Json& j) {
    LinearSvm m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias");
    return m;
}

Json histogram_to_json(const HistogramConfig& h) {
    Json j;
    j["bins"] = h.bins;
    j["lo"] = h.lo;
    j["hi"] = h.hi;
    j["config_filter"] = std::vector<int>(h.config_filter.begin(), h.config_filter.end());
    return j;
}

HistogramConfig histogram_from_json(const Json& j) {
    HistogramConfig h;
    h.bins = j.at("bins");
    h.lo = j.at("lo");
    h.hi = j.at("hi");
    for (const auto& c : j.value("config_filter", std::vector<int>{})) h.config_filter.insert(c);
    return h;
}

Json detector_to_json(const DetectorConfig& d) {
    Json j;
    j["half_window"] = d.half_window;
    j["prior_weight"] = d.prior_weight;
    j["prior_viscous"] = d.prior_viscous;
    j["threshold"] = d.threshold;
    j["noise_sigma"] = d.noise_sigma;
    return j;
}

DetectorConfig detector_from_json(const Json& j, const DetectorConfig& base) {
    DetectorConfig d = base;
    d.half_window = j.value("half_window", d.half_window);
    d.prior_weight = j.value("prior_weight", d.prior_weight);
    d.prior_viscous = j.value("prior_viscous", d.prior_viscous);
    d.threshold = j.value("threshold", d.threshold);
    d.noise_sigma = j.value("noise_sigma", d.noise_sigma);
    return d;
}

Json profile_to_json(const SpinProfile& p) {
    Json arr = Json::array();
    for (const auto& [x, y] : p.knots) arr.push_back(Json::array({x, y}));
    return arr;
}

SpinProfile profile_from_json(const Json& arr) {
    SpinProfile p;
    for (const auto& knot : arr) p.knots.emplace_back(knot.at(0), knot.at(1));
    return p;
}

Json scenario_to_json(const ScenarioCounts& s) {
    Json j;
    j["nominal"] = s.nominal;
    j["dry"] = s.dry;
    j["viscous"] = s.viscous;
    j["systems"] = s.systems;
    return j;
}

ScenarioCounts scenario_from_json(const Json& j, const ScenarioCounts& base) {
    ScenarioCounts s = base;
    s.nominal = j.value("nominal", s.nominal);
    s.dry = j.value("dry", s.dry);
    s.viscous = j.value("viscous", s.viscous);
    s.systems = j.value("systems", s.systems);
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_telemetry_csv(const fs::path& path, const TelemetryWindow& window) {
    std::string out = "k,omega,f_hat\n";
    for (std::int64_t k = 0; k < window.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(window.spin[k]);
        out += ',';
        out += format_double(window.friction[k]);
        out += '\n';
    }
    write_file(path, out);
}

TelemetryWindow read_telemetry_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty telemetry file " + path.string());
    const auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "k" || header[1] != "omega" || header[2] != "f_hat")
        throw ValidationError("telemetry CSV must start with header k,omega,f_hat");
    TelemetryWindow w;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) throw ValidationError("bad telemetry row in " + path.string());
        w.spin.push_back(std::stod(cells[1]));
        w.friction.push_back(std::stod(cells[2]));
    }
    validate_window(w);
    return w;
}

RawTelemetry read_raw_csv(const fs::path& path, double inertia, double torque_constant) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty telemetry file " + path.string());
    const auto header = split_csv_line(line);
    if (header.size() != 4 || header[0] != "t" || header[1] != "omega" || header[2] != "I" || header[3] != "V")
        throw ValidationError("raw CSV must start with header t,omega,I,V");
    RawTelemetry raw;
    raw.inertia = inertia;
    raw.torque_constant = torque_constant;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw ValidationError("bad raw telemetry row in " + path.string());
        raw.time.push_back(std::stod(cells[0]));
        raw.spin.push_back(std::stod(cells[1]));
        raw.current.push_back(std::stod(cells[2]));
        raw.voltage.push_back(std::stod(cells[3]));
    }
    validate_raw(raw);
    return raw;
}

TelemetryWindow read_any_telemetry(const fs::path& path, double inertia, double torque_constant) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty telemetry file " + path.string());
    const auto header = split_csv_line(line);
    in.close();
    if (!header.empty() && header[0] == "t") return friction_from_raw(read_raw_csv(path, inertia, torque_constant));
    return read_telemetry_csv(path);
}

void write_dataset_jsonl(const fs::path& path, const LabeledDataset& dataset,
                         const std::vector<std::string>& window_paths) {
    std::string out;
    for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
        Json j;
        if (i < window_paths.size() && !window_paths[i].empty()) {
            j["window_path"] = window_paths[i];
        } else {
            j["omega"] = dataset.entries[i].first.spin;
            j["f_hat"] = dataset.entries[i].first.friction;
        }
        j["theta"] = status_to_json(dataset.entries[i].second);
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

LabeledDataset read_dataset_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    LabeledDataset out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("bad JSONL line in " + path.string() + ": " + e.what());
        }
        TelemetryWindow w;
        if (j.contains("window_path")) {
            w = read_telemetry_csv(base / j.at("window_path").get<std::string>());
        } else {
            w.spin = j.at("omega").get<std::vector<double>>();
            w.friction = j.at("f_hat").get<std::vector<double>>();
            validate_window(w);
        }
        out.entries.emplace_back(std::move(w), status_from_json(j.at("theta")));
    }
    if (out.entries.empty()) throw ValidationError("dataset is empty: " + path.string());
    return out;
}

void write_ground_truth_jsonl(const fs::path& path, const std::vector<GroundTruth>& truths) {
    std::string out;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const GroundTruth& t = truths[i];
        Json j;
        j["index"] = i;
        j["base_dry"] = t.base_dry;
        j["viscous"] = t.viscous;
        Json init = Json::array();
        for (const auto& st : t.initial) init.push_back({{"config", st.config}, {"value", st.value}});
        j["initial"] = init;
        Json jumps = Json::array();
        for (const auto& jp : t.jumps)
            jumps.push_back({{"step", jp.step},
                             {"system", jp.system},
                             {"from_config", jp.from_config},
                             {"to_config", jp.to_config},
                             {"from_value", jp.from_value},
                             {"to_value", jp.to_value}});
        j["jumps"] = jumps;
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    const Json j = parse_json(path);
    PipelineConfig cfg = PipelineConfig::defaults();
    if (j.contains("model")) cfg.model = model_from_json(j.at("model"));
    if (j.contains("effect")) cfg.effect = effect_from_json(j.at("effect"));
    if (j.contains("detector")) cfg.detector = detector_from_json(j.at("detector"), cfg.detector);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.guard = j.value("guard", cfg.guard);
    if (j.contains("assign")) {
        cfg.assign.tau_max = j.at("assign").value("tau_max", cfg.assign.tau_max);
        cfg.assign.allow_reject = j.at("assign").value("allow_reject", cfg.assign.allow_reject);
    }
    cfg.hist_bins = j.value("hist_bins", cfg.hist_bins);
    if (j.contains("config_filters")) {
        cfg.config_filters.clear();
        for (const auto& f : j.at("config_filters")) {
            std::set<int> filter;
            for (const auto& c : f) filter.insert(c.get<int>());
            cfg.config_filters.push_back(std::move(filter));
        }
    }
    cfg.svm_reg = j.value("svm_reg", cfg.svm_reg);
    cfg.svm_epochs = j.value("svm_epochs", cfg.svm_epochs);
    cfg.split_fraction = j.value("split_fraction", cfg.split_fraction);
    if (j.contains("profile")) cfg.profile = profile_from_json(j.at("profile"));
    if (j.contains("scenario")) cfg.scenario = scenario_from_json(j.at("scenario"), cfg.scenario);
    cfg.n_steps = j.value("n_steps", cfg.n_steps);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("bench")) {
        const Json& b = j.at("bench");
        cfg.bench.mdr_windows = b.value("mdr_windows", cfg.bench.mdr_windows);
        cfg.bench.mdr_steps_sigma = b.value("mdr_steps_sigma", cfg.bench.mdr_steps_sigma);
        cfg.bench.mdr_trials = b.value("mdr_trials", cfg.bench.mdr_trials);
        cfg.bench.mdr_fixed_threshold_alpha = b.value("mdr_fixed_threshold_alpha", cfg.bench.mdr_fixed_threshold_alpha);
        cfg.bench.arl_half_window = b.value("arl_half_window", cfg.bench.arl_half_window);
        cfg.bench.arl_step_sigma = b.value("arl_step_sigma", cfg.bench.arl_step_sigma);
        cfg.bench.arl_mdr_level = b.value("arl_mdr_level", cfg.bench.arl_mdr_level);
        cfg.bench.arl_calibration_trials = b.value("arl_calibration_trials", cfg.bench.arl_calibration_trials);
        cfg.bench.arl_budget = b.value("arl_budget", cfg.bench.arl_budget);
        cfg.bench.arl_prior_weights = b.value("arl_prior_weights", cfg.bench.arl_prior_weights);
        cfg.bench.rmse_runs = b.value("rmse_runs", cfg.bench.rmse_runs);
        cfg.bench.rmse_steps = b.value("rmse_steps", cfg.bench.rmse_steps);
        cfg.bench.accuracy_repeats = b.value("accuracy_repeats", cfg.bench.accuracy_repeats);
        cfg.bench.bins_sweep = b.value("bins_sweep", cfg.bench.bins_sweep);
        cfg.bench.timing_steps = b.value("timing_steps", cfg.bench.timing_steps);
    }
    return cfg;
}

void save_pipeline_config(const fs::path& path, const PipelineConfig& cfg) {
    Json j;
    j["model"] = model_to_json(cfg.model);
    j["effect"] = effect_to_json(cfg.effect);
    j["detector"] = detector_to_json(cfg.detector);
    j["alpha"] = cfg.alpha;
    j["guard"] = cfg.guard;
    j["assign"] = {{"tau_max", cfg.assign.tau_max}, {"allow_reject", cfg.assign.allow_reject}};
    j["hist_bins"] = cfg.hist_bins;
    Json filters = Json::array();
    for (const auto& f : cfg.config_filters) filters.push_back(std::vector<int>(f.begin(), f.end()));
    j["config_filters"] = filters;
    j["svm_reg"] = cfg.svm_reg;
    j["svm_epochs"] = cfg.svm_epochs;
    j["split_fraction"] = cfg.split_fraction;
    j["profile"] = profile_to_json(cfg.profile);
    j["scenario"] = scenario_to_json(cfg.scenario);
    j["n_steps"] = cfg.n_steps;
    j["seed"] = cfg.seed;
    write_file(path, j.dump(2) + "\n");
}

void save_changepoints(const fs::path& path, const ChangepointList& cps, const DetectorConfig& cfg) {
    Json j;
    j["indices"] = cps.indices;
    j["scores"] = cps.scores;
    j["detector"] = detector_to_json(cfg);
    write_file(path, j.dump(2) + "\n");
}

ChangepointList load_changepoints(const fs::path& path) {
    const Json j = parse_json(path);
    ChangepointList cps;
    cps.indices = j.at("indices").get<std::vector<std::int64_t>>();
    cps.scores = j.at("scores").get<std::vector<double>>();
    if (cps.indices.size() != cps.scores.size())
        throw ValidationError("changepoint file: indices and scores differ in length");
    return cps;
}

void save_fit(const fs::path& path, const FitFile& f) {
    Json j;
    Json spans = Json::array();
    for (const auto& [a, b] : f.intervals.spans) spans.push_back(Json::array({a, b}));
    j["intervals"] = spans;
    j["guard"] = f.intervals.guard;
    j["boundaries"] = f.intervals.boundaries;
    j["dropped"] = f.intervals.dropped;
    j["dry"] = f.fit.dry;
    j["viscous"] = f.fit.viscous;
    j["gram_diag"] = f.fit.gram_diag;
    j["reject_costs"] = f.fit.reject_costs;
    j["sse"] = f.fit.sse;
    j["sigma_hat"] = f.sigma_hat;
    j["rmse"] = f.rmse;
    j["excess_rmse"] = f.excess;
    write_file(path, j.dump(2) + "\n");
}

FitFile load_fit(const fs::path& path) {
    const Json j = parse_json(path);
    FitFile f;
    for (const auto& span : j.at("intervals")) f.intervals.spans.emplace_back(span.at(0), span.at(1));
    f.intervals.guard = j.value("guard", 0);
    f.intervals.boundaries = j.at("boundaries").get<std::vector<std::int64_t>>();
    f.intervals.dropped = j.value("dropped", std::vector<std::int64_t>{});
    f.fit.dry = j.at("dry").get<std::vector<double>>();
    f.fit.viscous = j.at("viscous");
    f.fit.gram_diag = j.at("gram_diag").get<std::vector<double>>();
    f.fit.reject_costs = j.at("reject_costs").get<std::vector<double>>();
    f.fit.sse = j.value("sse", 0.0);
    f.sigma_hat = j.value("sigma_hat", 0.0);
    f.rmse = j.value("rmse", 0.0);
    f.excess = j.value("excess_rmse", 0.0);
    return f;
}

void save_assignment(const fs::path& path, const AssignmentResult& a) {
    Json j;
    j["u"] = a.inputs;
    j["score"] = a.score;
    j["iterations"] = a.iterations;
    j["rejections"] = a.rejections;
    j["f_bar_d"] = a.base_dry;
    j["f_v"] = a.viscous;
    Json per = Json::array();
    for (std::size_t s = 0; s < a.config_seq.size(); ++s)
        per.push_back({{"Q", a.config_seq[s]}, {"F", a.value_seq[s]}});
    j["per_fss"] = per;
    j["interval_configs"] = a.interval_configs;
    j["recon_residual"] = a.recon_residual;
    write_file(path, j.dump(2) + "\n");
}

AssignmentResult load_assignment(const fs::path& path) {
    const Json j = parse_json(path);
    AssignmentResult a;
    a.inputs = j.at("u").get<std::vector<int>>();
    a.score = j.at("score");
    a.iterations = j.value("iterations", 0);
    a.rejections = j.value("rejections", 0);
    a.base_dry = j.at("f_bar_d");
    a.viscous = j.at("f_v");
    for (const auto& per : j.at("per_fss")) {
        a.config_seq.push_back(per.at("Q").get<std::vector<int>>());
        a.value_seq.push_back(per.at("F").get<std::vector<double>>());
    }
    if (j.contains("interval_configs"))
        a.interval_configs = j.at("interval_configs").get<std::vector<std::vector<int>>>();
    if (j.contains("recon_residual")) a.recon_residual = j.at("recon_residual").get<std::vector<double>>();
    return a;
}

void save_models(const fs::path& path, const AnomalyModels& models) {
    Json j;
    j["dry"] = svm_to_json(models.dry);
    j["viscous"] = svm_to_json(models.viscous);
    Json sys = Json::array();
    for (const auto& m : models.systems) sys.push_back(svm_to_json(m));
    j["systems"] = sys;
    Json hist = Json::array();
    for (const auto& h : models.histograms) hist.push_back(histogram_to_json(h));
    j["histograms"] = hist;
    write_file(path, j.dump(2) + "\n");
}

AnomalyModels load_models(const fs::path& path) {
    const Json j = parse_json(path);
    AnomalyModels models;
    models.dry = svm_from_json(j.at("dry"));
    models.viscous = svm_from_json(j.at("viscous"));
    for (const auto& m : j.at("systems")) models.systems.push_back(svm_from_json(m));
    for (const auto& h : j.at("histograms")) models.histograms.push_back(histogram_from_json(h));
    if (models.systems.size() != models.histograms.size())
        throw ValidationError("models file: systems and histograms differ in length");
    return models;
}

void save_diagnosis(const fs::path& path, const DiagnosisReport& report) {
    Json j;
    j["theta"] = {{"dry", report.status.dry},
                  {"viscous", report.status.viscous},
                  {"systems", Json::array()}};
    for (auto s : report.status.systems) j["theta"]["systems"].push_back(s ? 1 : 0);
    j["sigma_hat"] = report.sigma_hat;
    j["changepoints"] = {{"indices", report.changepoints.indices}, {"scores", report.changepoints.scores}};
    Json spans = Json::array();
    for (const auto& [a, b] : report.intervals.spans) spans.push_back(Json::array({a, b}));
    j["fit"] = {{"intervals", spans},
                {"boundaries", report.intervals.boundaries},
                {"dropped", report.intervals.dropped},
                {"dry", report.fit.dry},
                {"viscous", report.fit.viscous},
                {"reject_costs", report.fit.reject_costs}};
    Json per = Json::array();
    for (std::size_t s = 0; s < report.assignment.config_seq.size(); ++s)
        per.push_back({{"Q", report.assignment.config_seq[s]}, {"F", report.assignment.value_seq[s]}});
    j["assignment"] = {{"u", report.assignment.inputs},
                       {"score", report.assignment.score},
                       {"iterations", report.assignment.iterations},
                       {"rejections", report.assignment.rejections},
                       {"f_bar_d", report.assignment.base_dry},
                       {"f_v", report.assignment.viscous},
                       {"per_fss", per}};
    write_file(path, j.dump(2) + "\n");
}

void save_timings(const fs::path& path, const StageTimings& t) {
    Json j;
    j["detect_ms"] = t.detect_ms;
    j["estimate_ms"] = t.estimate_ms;
    j["assign_ms"] = t.assign_ms;
    j["classify_ms"] = t.classify_ms;
    j["total_ms"] = t.total_ms;
    write_file(path, j.dump(2) + "\n");
}

void save_theta(const fs::path& path, const AnomalyStatus& status) {
    Json j;
    j["theta"] = status_to_json(status);
    write_file(path, j.dump(2) + "\n");
}

fs::path write_table(const fs::path& dir, const std::string& stem, const Table& table,
                     const std::string& format) {
    if (format == "json") {
        Json arr = Json::array();
        for (const auto& row : table.rows) {
            Json obj;
            for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = row[c];
            arr.push_back(obj);
        }
        const fs::path path = dir / (stem + ".json");
        write_file(path, arr.dump(2) + "\n");
        return path;
    }
    if (format != "csv") throw ValidationError("unknown output format: " + format);
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out += table.columns[c];
        out += c + 1 < table.columns.size() ? ',' : '\n';
    }
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += format_double(row[c]);
            out += c + 1 < row.size() ? ',' : '\n';
        }
    }
    const fs::path path = dir / (stem + ".csv");
    write_file(path, out);
    return path;
}

}  // namespace rwa
