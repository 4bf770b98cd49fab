#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qpadic/kummer.hpp"

namespace qpadic {

enum class CheckStatus { verified, failed, skipped };
std::string status_name(CheckStatus s);

// Machine-readable outcome of one registered check at one prime. A verified
// status means every sub-assertion passed; a failed report carries the first
// counterexample in its notes.
struct LemmaReport {
  std::string lemma_id;
  long p = 0;
  int precision = 0;
  CheckStatus status = CheckStatus::skipped;
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::vector<std::string> notes;
  long elapsed_ms = 0;
};

struct CheckContext {
  long p = 0;
  int precision = kDefaultPrecision;
  bool parallel = true;
  bool slow_paths = false;  // opt-in heavy enumerations
};

struct RegistryEntry {
  std::string id;
  std::string summary;
  std::vector<long> primes;  // primes the check applies to
  std::function<void(const CheckContext&, LemmaReport&)> run;
};

// The registered finite-level checks, in report order.
const std::vector<RegistryEntry>& lemma_registry();

struct VerifyOptions {
  std::vector<std::string> ids;  // empty or {"all"}: every entry
  std::vector<long> primes = {2, 3, 5};
  int precision = kDefaultPrecision;
  bool parallel = true;
  bool slow_paths = false;
};

// Runs the selected checks at the selected primes; reports are sorted by
// (lemma id, p) and deterministic for fixed options. Unknown ids raise.
std::vector<LemmaReport> run_verification(const VerifyOptions& opts);

bool all_verified(const std::vector<LemmaReport>& reports);

// Stable JSON rendering; elapsed_ms is emitted as 0 unless include_timings.
std::string reports_to_json(const std::vector<LemmaReport>& reports,
                            bool include_timings = false);

}  // namespace qpadic
