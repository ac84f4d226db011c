#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sivt {

/// One measured quantity against its bound. Only gating records decide the
/// pass flag; the others document intermediate values.
struct ProbeRecord {
    std::string label;
    double measured = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool gating = true;
};

struct ProbeReport {
    std::string name;
    std::vector<ProbeRecord> records;
    double tolerance = 0.0;
    bool pass = true;
    double worst_ratio = 0.0;

    explicit ProbeReport(std::string probe_name = {}, double tol = 0.0) : name(std::move(probe_name)), tolerance(tol) {}

    /// Gating record; ratio = measured / bound, with 0/0 counted as 0.
    void check(std::string label, double measured, double bound) {
        double ratio;
        if (bound > 0.0)
            ratio = measured / bound;
        else
            ratio = measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        if (std::isnan(measured)) ratio = std::numeric_limits<double>::infinity();
        records.push_back({std::move(label), measured, bound, ratio, true});
        worst_ratio = std::max(worst_ratio, ratio);
        pass = pass && ratio <= 1.0 + tolerance;
    }

    void note(std::string label, double measured, double bound = 0.0) {
        const double ratio = bound != 0.0 ? measured / bound : 0.0;
        records.push_back({std::move(label), measured, bound, ratio, false});
    }

    const ProbeRecord* find(const std::string& label) const {
        for (const auto& r : records)
            if (r.label == label) return &r;
        return nullptr;
    }

    double max_measured() const {
        double m = 0.0;
        for (const auto& r : records)
            if (r.gating) m = std::max(m, std::fabs(r.measured));
        return m;
    }
};

}  // namespace sivt
