// Machine-readable certification records: one row per executed verifier,
// with the certified bound, the achieved value, and a pass/fail/skip
// status. Formatting is full-precision and deterministic so identical runs
// produce byte-identical files.

#pragma once

#include <string>
#include <vector>

namespace bilip {

enum class ClaimStatus { Pass, Fail, Skipped };

struct ClaimRecord {
    std::string id;
    std::string params;
    double bound = 0.0;
    double achieved = 0.0;
    std::string witness;
    ClaimStatus status = ClaimStatus::Skipped;
    std::string reason;
};

struct CertificateReport {
    std::vector<ClaimRecord> records;

    // Skipped records carry a reason but do not fail the run.
    bool all_pass() const;
    std::size_t failures() const;

    void add(ClaimRecord rec) { records.push_back(std::move(rec)); }
};

// Shortest decimal that round-trips the double (printf %.17g).
std::string format_full(double v);

std::string status_name(ClaimStatus s);

// certificates.csv: claim,params,bound,achieved,witness,status,reason
void write_certificates_csv(const std::string& path, const CertificateReport& report);

// Generic small-table writer: header row then full-precision value rows.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace bilip
