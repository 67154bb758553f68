#include "bilip/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bilip {

bool CertificateReport::all_pass() const { return failures() == 0; }

std::size_t CertificateReport::failures() const {
    std::size_t n = 0;
    for (const auto& r : records) {
        if (r.status == ClaimStatus::Fail) ++n;
    }
    return n;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string status_name(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::Pass:
            return "PASS";
        case ClaimStatus::Fail:
            return "FAIL";
        case ClaimStatus::Skipped:
            return "SKIPPED";
    }
    return "UNKNOWN";
}

namespace {

// Commas inside free-text fields would break the fixed column layout.
std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == ',' || c == '\n') c = ';';
    }
    return out;
}

}  // namespace

void write_certificates_csv(const std::string& path, const CertificateReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "claim,params,bound,achieved,witness,status,reason\n";
    for (const auto& r : report.records) {
        out << sanitize(r.id) << ',' << sanitize(r.params) << ',' << format_full(r.bound) << ','
            << format_full(r.achieved) << ',' << sanitize(r.witness) << ','
            << status_name(r.status) << ',' << sanitize(r.reason) << '\n';
    }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_full(row[i]);
        }
        out << '\n';
    }
}

}  // namespace bilip
