#include "quatfact/solvers/trace.hpp"

#include "quatfact/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace quatfact {

std::string format_real(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream &os, const Trace &trace, bool with_timing) {
    os << kTraceCsvHeader << '\n';
    for (const auto &rec : trace) {
        os << rec.iter << ',' << format_real(rec.objective) << ',' << format_real(rec.res) << ',';
        if (rec.step_w) {
            os << format_real(*rec.step_w);
        }
        os << ',';
        if (rec.step_h) {
            os << format_real(*rec.step_h);
        }
        os << ',';
        if (with_timing) {
            os << format_real(rec.elapsed_ms);
        }
        os << '\n';
    }
}

void write_trace_csv(const std::string &path, const Trace &trace, bool with_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open " + path + " for writing");
    }
    write_trace_csv(out, trace, with_timing);
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

}  // namespace quatfact
