#ifndef TOPOVOL_INGEST_HPP
#define TOPOVOL_INGEST_HPP

#include "topovol/series.hpp"

#include <cstddef>
#include <string>

namespace topovol {

struct PriceIngest {
    ReturnSeries prices;
    std::size_t rows_dropped = 0; // missing or unparsable rows
};

// CSV with a header naming at least Date and the requested price column
// (extra columns ignored). Rows with missing/unparsable fields are dropped
// and counted; output sorted by date; duplicate dates are an error.
PriceIngest ingest_prices(const std::string& path,
                          const std::string& column = "Close");

struct SentimentIngest {
    SentimentSeries sentiment;
    std::size_t rows_dropped = 0;       // unparsable records
    std::size_t duplicates_dropped = 0; // same UTC day, first kept
};

// JSON document {"data": [{"value": "26", "value_classification": "Fear",
// "timestamp": "1609459200"}, ...]}. Values validated in [0,100].
SentimentIngest ingest_sentiment(const std::string& path);

} // namespace topovol

#endif
