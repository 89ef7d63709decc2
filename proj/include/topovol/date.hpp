#ifndef TOPOVOL_DATE_HPP
#define TOPOVOL_DATE_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace topovol {

// Calendar day stored as a serial day number (days since 1970-01-01).
// The pipeline works on daily observations only, so arithmetic in whole
// days is all we need.
class Date {
public:
    Date() : serial_(0) {}
    explicit Date(std::int32_t serial_day) : serial_(serial_day) {}

    static Date from_ymd(int year, int month, int day);
    // Parses strict ISO "yyyy-mm-dd"; throws IngestError otherwise.
    static Date parse(const std::string& iso);
    // UTC day containing the given Unix timestamp.
    static Date from_unix_seconds(std::int64_t seconds);

    std::int32_t serial() const { return serial_; }
    std::string to_string() const; // "yyyy-mm-dd"

    Date operator+(int days) const { return Date(serial_ + days); }
    int operator-(const Date& other) const { return serial_ - other.serial_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int32_t serial_;
};

} // namespace topovol

#endif
