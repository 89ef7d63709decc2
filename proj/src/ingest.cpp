#include "topovol/ingest.hpp"
#include "topovol/csv.hpp"
#include "topovol/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace topovol {

PriceIngest ingest_prices(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open price file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IngestError("price file '" + path + "' is empty");

    const auto header = split_csv_line(line);
    std::size_t date_col = header.size(), price_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "Date") date_col = i;
        if (header[i] == column) price_col = i;
    }
    if (date_col == header.size())
        throw IngestError("price file missing required column 'Date'");
    if (price_col == header.size())
        throw IngestError("price file missing required column '" + column + "'");

    struct Row {
        Date date;
        double value;
    };
    std::vector<Row> rows;
    std::size_t dropped = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() <= std::max(date_col, price_col)) {
            ++dropped;
            continue;
        }
        Date d;
        double v;
        try {
            d = Date::parse(f[date_col]);
            std::size_t consumed = 0;
            v = std::stod(f[price_col], &consumed);
            if (consumed != f[price_col].size() || !std::isfinite(v))
                throw IngestError("bad value");
        } catch (...) {
            ++dropped;
            continue;
        }
        rows.push_back({d, v});
    }
    if (rows.empty())
        throw IngestError("price file '" + path + "' empty after cleaning (" +
                          std::to_string(dropped) + " rows dropped)");

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw IngestError("duplicate price date " + rows[i].date.to_string());

    PriceIngest out;
    out.rows_dropped = dropped;
    out.prices.name = "price";
    for (const auto& r : rows) {
        out.prices.dates.push_back(r.date);
        out.prices.values.push_back(r.value);
    }
    out.prices.check_invariants();
    return out;
}

SentimentIngest ingest_sentiment(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("malformed sentiment JSON '" + path + "': " + e.what());
    }
    if (!doc.contains("data") || !doc["data"].is_array())
        throw IngestError("sentiment JSON missing top-level 'data' array");
    const auto& data = doc["data"];
    if (data.empty()) throw IngestError("sentiment JSON: no observations");

    struct Row {
        Date date;
        double value;
        std::string label;
        std::size_t order; // file position; first occurrence wins on ties
    };
    std::vector<Row> rows;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& rec = data[i];
        try {
            const auto read_num = [&](const char* key) -> double {
                const auto& v = rec.at(key);
                if (v.is_string()) return std::stod(v.get<std::string>());
                return v.get<double>();
            };
            const double value = read_num("value");
            if (value < 0.0 || value > 100.0)
                throw IngestError("sentiment value " + std::to_string(value) +
                                  " outside [0,100]");
            const auto ts = static_cast<std::int64_t>(read_num("timestamp"));
            Row r;
            r.date = Date::from_unix_seconds(ts);
            r.value = value;
            if (rec.contains("value_classification") &&
                rec["value_classification"].is_string())
                r.label = rec["value_classification"].get<std::string>();
            r.order = i;
            rows.push_back(std::move(r));
        } catch (const IngestError&) {
            throw; // range violations are hard errors, not droppable rows
        } catch (...) {
            ++dropped;
        }
    }
    if (rows.empty()) throw IngestError("sentiment JSON: no parsable observations");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.date != b.date) return a.date < b.date;
        return a.order < b.order;
    });

    SentimentIngest out;
    out.rows_dropped = dropped;
    for (const auto& r : rows) {
        if (!out.sentiment.dates.empty() && out.sentiment.dates.back() == r.date) {
            ++out.duplicates_dropped; // keep the first record of the day
            continue;
        }
        out.sentiment.dates.push_back(r.date);
        out.sentiment.values.push_back(r.value);
        out.sentiment.labels.push_back(r.label);
    }
    return out;
}

} // namespace topovol
