#pragma once

// Command dispatch and reproducible reporting: every verb of the command-line
// tool is a pure function from (input documents, params) to a report
// document.  Reports are byte-identical across runs for identical inputs and
// params; wall time is measured but deliberately kept out of the report
// bytes.  Exit codes: 0 decided/ok, 1 error, 2 undecided/semidecision.

#include <okt/json_io.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace okt {

/// One unit of work.  `params` holds flag values as canonical strings;
/// `output` names the report destination (empty = the runner's stream).
struct JobSpec {
  std::string verb;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> params;
  std::string output;
};

struct ReportRecord {
  Json report;         // format/kind/verb/inputs_digest/params/result/diagnostics
  int exit_code = 0;   // 0 decided/ok, 1 error, 2 undecided
  double wall_ms = 0;  // measured; never serialized into `report`
};

/// Execute one job: slurp + parse every input first, then dispatch.  Never
/// throws — failures become an error record (exit 1) with the message
/// verbatim in result.error; semidecisions return exit 2.
ReportRecord run_job(const JobSpec& job);

/// Run jobs with per-job isolation (workers run concurrently); records come
/// back in job order regardless of completion order.
std::vector<ReportRecord> run_sweep(const std::vector<JobSpec>& jobs);

/// Parse a sweep document ({"kind":"sweep","jobs":[...]}) into job specs.
/// Nested sweep jobs are rejected.
std::vector<JobSpec> read_sweep(const Json& doc);

/// argv-style entry point (without the program name).  Reports go to `out`
/// or the per-job output path; wall-time lines and error messages go to
/// `err`.  Returns the process exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace okt
