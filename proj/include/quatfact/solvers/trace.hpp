#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace quatfact {

/// One solver iteration.
struct TraceRecord {
    int iter{0};
    double objective{0.0};
    double res{0.0};
    std::optional<double> step_w;  ///< absent for ADMM
    std::optional<double> step_h;
    double elapsed_ms{0.0};
    int linesearch_evals{0};  ///< objective evaluations spent in line searches this iteration
    bool linesearch_warning{false};
};

using Trace = std::vector<TraceRecord>;

inline constexpr const char *kTraceCsvHeader = "iter,objective,res,step_w,step_h,elapsed_ms";

/// Writes the trace as CSV. Reals use round-trip precision. With
/// `with_timing == false` the elapsed_ms field is left empty so that
/// identical runs produce identical bytes.
void write_trace_csv(std::ostream &os, const Trace &trace, bool with_timing);
void write_trace_csv(const std::string &path, const Trace &trace, bool with_timing);

/// Formats a double with 17 significant digits ("inf"/"nan" spelled out).
std::string format_real(double v);

/// Wall-clock stopwatch in milliseconds.
class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace quatfact
