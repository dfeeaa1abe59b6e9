#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctm/detector.hpp"
#include "ctm/sim.hpp"

namespace ctm {

enum class RecordFormat { csv, jsonl };

// One monitor output row per input score, in stream order.
struct RunRecord {
    std::uint64_t t;
    double score;
    double p_value;
    double eta;
    double bet_factor;
    double wealth;
    bool reject;
};

// All real-valued fields are printed with "%.17g" (shortest round-trippable
// fixed rule used project-wide).
std::string format_double(double v);

std::string run_record_csv_header();
std::string format_run_record(const RunRecord& r, RecordFormat fmt);

// Strict parse of one score line; surrounding whitespace allowed, NaN/inf and
// trailing junk rejected. Empty/whitespace-only lines yield nullopt.
std::optional<double> parse_score_line(const std::string& line, std::size_t line_no);

// Reads one score per line. Throws std::runtime_error naming the offending
// line on non-numeric content; whitespace-only lines are skipped.
std::vector<double> read_score_file(const std::string& path);

// Flat key-value experiment description for the simulate command.
struct SimSpec {
    Scenario scenario;
    DetectorConfig base;              // variant field ignored; see variants
    std::vector<Variant> variants;
    std::uint64_t n_ref = 1000;
    std::uint64_t trials = 100;
    std::uint64_t seed = 12345;
    bool paired = true;
    bool compute_regret = false;
};

// Parses `key = value` lines ('#' comments, blank lines allowed). Throws
// std::runtime_error on unknown keys, missing required keys, or bad values.
SimSpec parse_sim_config(std::istream& in);
SimSpec load_sim_config(const std::string& path);

void write_power_csv(std::ostream& out, const std::vector<std::string>& variant_names,
                     const std::vector<PowerCurve>& curves);
void write_summary_csv(std::ostream& out, const std::vector<std::string>& variant_names,
                       const std::vector<StoppingSummary>& summaries);
void write_manifest(std::ostream& out, const SimSpec& spec);

}  // namespace ctm
