#include "taudit/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace taudit {

void ModulationModel::validate() const {
    if (!(f_w > Rational(0)) || !(f_d > f_w)) {
        throw std::invalid_argument("modulation model needs f_d > f_w > 0");
    }
    if (k_max < 1 || m_max < 0) {
        throw std::invalid_argument("modulation model needs k_max >= 1 and m_max >= 0");
    }
}

namespace {

bool simpler(const PredictedLine& a, const PredictedLine& b) {
    if (a.k + a.m != b.k + b.m) {
        return a.k + a.m < b.k + b.m;
    }
    return a.k < b.k;
}

}  // namespace

std::vector<PredictedLine> predict_frequencies(const ModulationModel& model) {
    model.validate();
    std::map<Rational, PredictedLine> lines;
    for (int k = 0; k <= model.k_max; ++k) {
        for (int m = 0; m <= model.m_max; ++m) {
            if (k == 0 && m == 0) {
                continue;
            }
            for (int sign : {+1, -1}) {
                if (m == 0 && sign < 0) {
                    continue;
                }
                const PredictedLine line{k, m, sign, Rational(k) * model.f_d + Rational(sign * m) * model.f_w};
                if (!(line.freq > Rational(0))) {
                    continue;
                }
                auto [it, inserted] = lines.try_emplace(line.freq, line);
                if (!inserted && simpler(line, it->second)) {
                    it->second = line;
                }
            }
        }
    }
    std::vector<PredictedLine> out;
    out.reserve(lines.size());
    for (const auto& [_, line] : lines) {
        out.push_back(line);
    }
    return out;
}

LineKind kind_of(const PredictedLine& line) {
    if (line.k == 0) {
        return line.m == 1 ? LineKind::weekly_fundamental : LineKind::weekly_harmonic;
    }
    if (line.m == 0) {
        return line.k == 1 ? LineKind::daily_fundamental : LineKind::daily_harmonic;
    }
    return LineKind::sideband;
}

std::string to_string(LineKind kind) {
    switch (kind) {
        case LineKind::weekly_fundamental: return "weekly_fundamental";
        case LineKind::weekly_harmonic: return "weekly_harmonic";
        case LineKind::daily_fundamental: return "daily_fundamental";
        case LineKind::daily_harmonic: return "daily_harmonic";
        case LineKind::sideband: return "sideband";
        case LineKind::unexplained: return "unexplained";
    }
    return "unexplained";
}

std::string PeakClassification::label_text() const {
    if (label != LineKind::sideband) {
        return to_string(label);
    }
    return "sideband(k=" + std::to_string(line.k) + ",m=" + std::to_string(line.m) + "," +
           (line.sign > 0 ? "+" : "-") + ")";
}

std::vector<PeakClassification> classify_peaks(std::span<const PeakInfo> peaks, const ModulationModel& model,
                                               double tolerance) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("classification tolerance must be positive");
    }
    const auto lines = predict_frequencies(model);
    std::vector<PeakClassification> out;
    out.reserve(peaks.size());
    for (const auto& pk : peaks) {
        const PredictedLine* best = nullptr;
        double best_dev = 0.0;
        for (const auto& line : lines) {
            const double dev = std::fabs(pk.freq - line.freq_per_day());
            if (best == nullptr || dev < best_dev || (dev == best_dev && simpler(line, *best))) {
                best = &line;
                best_dev = dev;
            }
        }
        PeakClassification c;
        c.peak = pk;
        if (best != nullptr) {
            c.line = *best;
            c.predicted_freq = best->freq_per_day();
            c.deviation = pk.freq - c.predicted_freq;
            c.label = best_dev <= tolerance ? kind_of(*best) : LineKind::unexplained;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace taudit
