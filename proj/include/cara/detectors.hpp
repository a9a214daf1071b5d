#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "cara/errors.hpp"

namespace cara {

struct DdmParams {
    double warn_sigma = 2.0;
    double drift_sigma = 3.0;
    std::size_t min_samples = 30;
};

/// Drift Detection Method over a stream of 0/1 prediction errors.
///
/// Tracks the running error rate p_i and s_i = sqrt(p_i (1 - p_i) / i), remembers the
/// minimum of p_i + s_i, and flags drift when p_i + s_i > p_min + drift_sigma * s_min.
/// Nothing is flagged before `min_samples` observations. Statistics reset on drift.
class Ddm {
public:
    explicit Ddm(DdmParams params = {}) : params_(params) {
        if (params.min_samples < 1) throw InvalidInput("DDM min_samples must be >= 1");
        reset();
    }

    void reset() {
        n_ = 0;
        errors_ = 0;
        p_ = 0.0;
        s_ = 0.0;
        p_min_ = s_min_ = psd_min_ = std::numeric_limits<double>::infinity();
        warning_ = false;
    }

    /// Feeds one error bit; returns true when drift is signalled.
    bool update(int error_bit) {
        ++n_;
        errors_ += error_bit != 0;
        const double n = static_cast<double>(n_);
        p_ = static_cast<double>(errors_) / n;
        s_ = std::sqrt(p_ * (1.0 - p_) / n);
        warning_ = false;
        if (n_ < params_.min_samples) return false;

        if (p_ + s_ <= psd_min_) {
            p_min_ = p_;
            s_min_ = s_;
            psd_min_ = p_ + s_;
        }
        if (p_ + s_ > p_min_ + params_.drift_sigma * s_min_) {
            reset();
            return true;
        }
        // warning level is informational only
        warning_ = p_ + s_ > p_min_ + params_.warn_sigma * s_min_;
        return false;
    }

    bool in_warning() const noexcept { return warning_; }
    std::size_t samples() const noexcept { return n_; }
    double error_rate() const noexcept { return p_; }

private:
    DdmParams params_;
    std::size_t n_ = 0;
    std::size_t errors_ = 0;
    double p_ = 0.0, s_ = 0.0;
    double p_min_, s_min_, psd_min_;
    bool warning_ = false;
};

struct AdwinParams {
    double delta = 0.002;
    std::size_t bucket_capacity = 5; // buckets per exponential-histogram row
    std::size_t min_subwindow = 5;
};

/// ADWIN adaptive windowing over an exponential histogram.
///
/// After each insertion every bucket boundary is a candidate cut splitting the window into
/// an older part (n0, mu0) and a newer part (n1, mu1). A cut fires when
///   |mu0 - mu1| >= sqrt(ln(4 / delta') / (2 m)),  m = 1 / (1/n0 + 1/n1),  delta' = delta / n.
/// On a cut the oldest bucket is dropped and the check repeats.
class Adwin {
public:
    explicit Adwin(AdwinParams params = {}) : params_(params) {
        if (!(params.delta > 0.0 && params.delta < 1.0)) throw InvalidInput("ADWIN delta must be in (0, 1)");
        if (params.bucket_capacity < 2) throw InvalidInput("ADWIN bucket capacity must be >= 2");
        reset();
    }

    void reset() {
        rows_.clear();
        width_ = 0;
        total_ = 0.0;
    }

    /// Feeds one observation; returns true when the window was shrunk because of a change.
    bool update(double value) {
        insert(value);
        compress();
        return shrink_on_change();
    }

    std::size_t width() const noexcept { return width_; }
    double mean() const noexcept { return width_ ? total_ / static_cast<double>(width_) : 0.0; }
    std::size_t bucket_count() const {
        std::size_t n = 0;
        for (const auto& r : rows_) n += r.size();
        return n;
    }

private:
    // rows_[i] holds sums of buckets of size 2^i, oldest at the front.
    void insert(double value) {
        if (rows_.empty()) rows_.emplace_back();
        rows_[0].push_back(value);
        ++width_;
        total_ += value;
    }

    void compress() {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].size() <= params_.bucket_capacity) break;
            const double merged = rows_[i][0] + rows_[i][1];
            rows_[i].pop_front();
            rows_[i].pop_front();
            if (i + 1 == rows_.size()) rows_.emplace_back();
            rows_[i + 1].push_back(merged);
        }
    }

    void drop_oldest() {
        while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
        if (rows_.empty()) return;
        const std::size_t size = std::size_t{1} << (rows_.size() - 1);
        total_ -= rows_.back().front();
        width_ -= size;
        rows_.back().pop_front();
        while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
    }

    bool shrink_on_change() {
        bool changed = false;
        while (cut_exists()) {
            changed = true;
            drop_oldest();
        }
        return changed;
    }

    bool cut_exists() const {
        if (width_ < 2 * params_.min_subwindow) return false;
        const double n = static_cast<double>(width_);
        const double log_term = std::log(4.0 * n / params_.delta);
        std::size_t n0 = 0;
        double sum0 = 0.0;
        // oldest buckets live in the highest rows
        for (std::size_t r = rows_.size(); r-- > 0;) {
            const std::size_t size = std::size_t{1} << r;
            for (double bucket : rows_[r]) {
                n0 += size;
                sum0 += bucket;
                const std::size_t n1 = width_ - n0;
                if (n1 == 0) return false;
                if (n0 < params_.min_subwindow || n1 < params_.min_subwindow) continue;
                const double mu0 = sum0 / static_cast<double>(n0);
                const double mu1 = (total_ - sum0) / static_cast<double>(n1);
                const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
                const double eps = std::sqrt(log_term / (2.0 * m));
                if (std::abs(mu0 - mu1) >= eps) return true;
            }
        }
        return false;
    }

    AdwinParams params_;
    std::vector<std::deque<double>> rows_;
    std::size_t width_ = 0;
    double total_ = 0.0;
};

} // namespace cara
