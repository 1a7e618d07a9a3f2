#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "iqlambda/budget.hpp"
#include "iqlambda/lambda.hpp"
#include "iqlambda/lvalues.hpp"
#include "iqlambda/numth.hpp"

namespace iqlambda {

// Negative fundamental discriminants with lo <= |D| < hi, ascending |D|.
std::vector<Int> fundamental_in_range(Int lo, Int hi);
// Every fundamental -X < D < 0, ascending |D|.
std::vector<Int> enumerate_fundamental(Int X);

struct ResidueClasses {
    Int modulus;
    std::vector<Int> classes;  // ascending, in [0, modulus)
};

ResidueClasses residue_classes(ModClass ab, const std::set<Int>& splus, const std::set<Int>& sminus);

struct ScanFilter {
    Int X = 0;
    Int p = 3;
    std::optional<ModClass> ab;
    std::set<Int> splus;
    std::set<Int> sminus;
    std::set<Int> exclude;

    bool accepts(Int D) const;
};

struct ScanRecord {
    Int d;
    std::optional<Int> h;
    std::vector<Int> factors;
    std::optional<Int> s;
    std::optional<Lambda> lambda;
    std::optional<Method> method;
    std::optional<std::string> error;

    std::string to_json() const;
    static ScanRecord from_json(const std::string& line);
};

ScanRecord scan_record(Int D, Int p, const Budget& budget = {});

struct ScanOptions {
    unsigned threads = 1;
    Int chunk = 4096;  // width of a |D| interval handed to one worker
    Budget budget;
};

// Records for every accepted D with |D| > resume_after, delivered in ascending |D|.
void scan(const ScanFilter& filter, const ScanOptions& options, const std::function<void(const ScanRecord&)>& sink,
          Int resume_after = 0);

// Appends JSONL to path. With resume, a trailing partial line is dropped and the scan restarts after the last
// complete record. Returns the number of records written. observer sees each record after it is written.
Int scan_to_jsonl(const ScanFilter& filter, const ScanOptions& options, const std::string& path, bool resume,
                  const std::function<void(const ScanRecord&)>& observer = {});

// |d| of the last complete record in a JSONL file, or 0.
Int read_checkpoint(const std::string& path);

FundamentalDiscriminant search_D0(Int p, ModClass ab, const std::set<Int>& splus, const std::set<Int>& sminus,
                                  Int max_abs = 10'000'000, const Budget& budget = {});

enum class Suite { Lemma23Sweep, BoundSweep, Tables, CrossCriterion };

std::optional<Suite> parse_suite(std::string_view name) noexcept;
std::string_view to_string(Suite suite) noexcept;

struct SuiteReport {
    Suite suite;
    bool pass = true;
    Int checked = 0;
    Int skipped = 0;
    std::string counterexample;  // first failure, empty on pass
    std::vector<std::string> lines;
};

struct SuiteOptions {
    Int bound_x = 10'000;        // BoundSweep range
    Int cross_x = 3'000;         // CrossCriterion range
    std::vector<Int> cross_primes = {3, 5, 7, 11, 13};
    Int lemma_limit = 1097;      // Lemma23Sweep: primes 3 < p < limit
    Budget budget;
    std::ostream* progress = nullptr;
};

SuiteReport verify_suite(Suite suite, const SuiteOptions& options = {});

} // namespace iqlambda
