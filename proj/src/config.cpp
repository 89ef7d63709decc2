#include "topovol/config.hpp"
#include "topovol/csv.hpp"
#include "topovol/errors.hpp"
#include "topovol/rng.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace topovol {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        return std::stoull(v);
    } catch (...) {
        throw InvalidInput("config key '" + key + "': expected integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        return std::stod(v);
    } catch (...) {
        throw InvalidInput("config key '" + key + "': expected number, got '" + v + "'");
    }
}

std::string kinds_to_string(const std::vector<SurrogateKind>& kinds) {
    std::string s;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i) s += ",";
        s += to_string(kinds[i]);
    }
    return s;
}

} // namespace

void AnalysisConfig::set(const std::string& key, const std::string& value) {
    if (key == "prices") prices_path = value;
    else if (key == "sentiment") sentiment_path = value;
    else if (key == "out") out_dir = value;
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "workers") workers = static_cast<int>(parse_u64(key, value));
    else if (key == "m") embedding.dimension = parse_u64(key, value);
    else if (key == "d") embedding.delay = parse_u64(key, value);
    else if (key == "window") embedding.window = parse_u64(key, value);
    else if (key == "stride") embedding.stride = parse_u64(key, value);
    else if (key == "imax") landscape.i_max = parse_u64(key, value);
    else if (key == "grid-size") landscape.grid_size = parse_u64(key, value);
    else if (key == "roll-window") roll_window = parse_u64(key, value);
    else if (key == "resid-window") resid_window = parse_u64(key, value);
    else if (key == "penalty") penalty = parse_double(key, value);
    else if (key == "acf-max-lag") acf_max_lag = parse_u64(key, value);
    else if (key == "surrogates") surrogate_count = static_cast<int>(parse_u64(key, value));
    else if (key == "surrogate-kind") {
        surrogate_kinds.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!trim(item).empty())
                surrogate_kinds.push_back(surrogate_kind_from_string(trim(item)));
        if (surrogate_kinds.empty())
            throw InvalidInput("config key 'surrogate-kind': empty list");
    } else if (key == "price-column") price_column = value;
    else if (key == "sv-iterations") sv_iterations = static_cast<int>(parse_u64(key, value));
    else if (key == "sv-replicates") sv_replicates = static_cast<int>(parse_u64(key, value));
    else if (key == "sv-particles") sv_particles = static_cast<int>(parse_u64(key, value));
    else if (key == "sv-eval-particles")
        sv_eval_particles = static_cast<int>(parse_u64(key, value));
    else if (key == "sv-evaluations") sv_evaluations = static_cast<int>(parse_u64(key, value));
    else if (key == "sv-rw-sd") sv_rw_sd = parse_double(key, value);
    else if (key == "sv-cooling") sv_cooling = parse_double(key, value);
    else throw InvalidInput("unknown config key '" + key + "'");
}

AnalysisConfig AnalysisConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open config file '" + path + "'");
    AnalysisConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) +
                               ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

// `workers` is deliberately not serialized: it is an execution resource
// with no effect on results, and keeping it out lets runs at different
// worker counts produce byte-identical output directories.
std::string AnalysisConfig::serialize() const {
    std::ostringstream os;
    os << "prices = " << prices_path << "\n";
    os << "sentiment = " << sentiment_path << "\n";
    os << "out = " << out_dir << "\n";
    os << "seed = " << seed << "\n";
    os << "m = " << embedding.dimension << "\n";
    os << "d = " << embedding.delay << "\n";
    os << "window = " << embedding.window << "\n";
    os << "stride = " << embedding.stride << "\n";
    os << "imax = " << landscape.i_max << "\n";
    os << "grid-size = " << landscape.grid_size << "\n";
    os << "roll-window = " << roll_window << "\n";
    os << "resid-window = " << resid_window << "\n";
    os << "penalty = " << format_double(penalty) << "\n";
    os << "acf-max-lag = " << acf_max_lag << "\n";
    os << "surrogates = " << surrogate_count << "\n";
    os << "surrogate-kind = " << kinds_to_string(surrogate_kinds) << "\n";
    os << "price-column = " << price_column << "\n";
    os << "sv-iterations = " << sv_iterations << "\n";
    os << "sv-replicates = " << sv_replicates << "\n";
    os << "sv-particles = " << sv_particles << "\n";
    os << "sv-eval-particles = " << sv_eval_particles << "\n";
    os << "sv-evaluations = " << sv_evaluations << "\n";
    os << "sv-rw-sd = " << format_double(sv_rw_sd) << "\n";
    os << "sv-cooling = " << format_double(sv_cooling) << "\n";
    return os.str();
}

std::string AnalysisConfig::digest() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize())));
    return buf;
}

int AnalysisConfig::effective_workers() const {
    if (workers > 0) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

IF2Settings AnalysisConfig::if2_settings() const {
    IF2Settings st;
    st.iterations = sv_iterations;
    st.replicates = sv_replicates;
    st.particles_estimation = sv_particles;
    st.particles_evaluation = sv_eval_particles;
    st.evaluations_per_replicate = sv_evaluations;
    st.rw_sd = {sv_rw_sd, sv_rw_sd, sv_rw_sd, sv_rw_sd};
    st.cooling = sv_cooling;
    st.seed = derive_seed(seed, "sv.if2");
    st.workers = effective_workers();
    return st;
}

void AnalysisConfig::validate() const {
    embedding.validate();
    landscape.validate();
    if2_settings().validate();
    if (roll_window < 2) throw InvalidInput("roll-window must be >= 2");
    if (resid_window < 2) throw InvalidInput("resid-window must be >= 2");
    if (surrogate_count < 2) throw InvalidInput("surrogates must be >= 2");
    if (price_column != "Close" && price_column != "Adj Close")
        throw InvalidInput("price-column must be 'Close' or 'Adj Close'");
}

} // namespace topovol
