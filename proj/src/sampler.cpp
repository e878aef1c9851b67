#include "sublab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "sublab/errors.hpp"
#include "sublab/fmt.hpp"
#include "sublab/quadrature.hpp"
#include "sublab/special_functions.hpp"

namespace sublab::sampler {

namespace {

enum class DrawKind { none, stable, tempered, cp_exp, cp_pareto, tabulated };

struct DrawPlan {
    DrawKind kind = DrawKind::none;
    double inv_alpha = 0.0;  // 1/alpha for inverse-power draws
    double theta = 0.0;      // tempering rate
    double mean = 0.0;       // exponential jump mean
    double xmin = 0.0;       // pareto scale (or cutoff eps for stable/tempered)
};

DrawPlan plan_for(const model::SubordinatorSpec& spec, double eps) {
    using namespace model;
    DrawPlan p;
    const Family& f = spec.family();
    if (const auto* st = std::get_if<StableFamily>(&f)) {
        p.kind = DrawKind::stable;
        p.inv_alpha = 1.0 / st->alpha;
        p.xmin = eps;
    } else if (const auto* ts = std::get_if<TemperedStableFamily>(&f)) {
        p.kind = DrawKind::tempered;
        p.inv_alpha = 1.0 / ts->alpha;
        p.theta = ts->theta;
        p.xmin = eps;
    } else if (const auto* cp = std::get_if<CompoundPoissonFamily>(&f)) {
        if (const auto* e = std::get_if<ExponentialJumps>(&cp->jumps)) {
            p.kind = DrawKind::cp_exp;
            p.mean = e->mean;
        } else {
            const auto& pj = std::get<ParetoJumps>(cp->jumps);
            p.kind = DrawKind::cp_pareto;
            p.inv_alpha = 1.0 / pj.alpha;
            p.xmin = pj.xmin;
        }
    } else if (std::holds_alternative<TabulatedTailFamily>(f)) {
        p.kind = DrawKind::tabulated;
    }
    return p;
}

}  // namespace

bool passage_sample_ok(const PassageSample& p) {
    if (!(p.level > 0.0)) return false;
    if (!(p.crossing_time > 0.0)) return false;
    if (!(p.undershoot >= 0.0 && p.undershoot <= p.level)) return false;
    if (!(p.overshoot >= 0.0)) return false;
    if (p.crept) return p.overshoot == 0.0 && p.undershoot == p.level;
    // Jump crossing: the crossing jump is overshoot + (level - undershoot) > 0.
    return p.overshoot + (p.level - p.undershoot) > 0.0;
}

PreparedSampler::PreparedSampler(const model::SubordinatorSpec& spec, double level,
                                 TruncationPolicy policy)
    : spec_(spec), policy_(policy), level_(level) {
    if (!(level > 0.0)) {
        throw DomainError("passage level must be positive, got " + std::to_string(level));
    }
    if (!(policy.eps_rel > 0.0 && policy.eps_rel < 1.0)) {
        throw ParameterError("eps_rel must lie in (0,1), got " + std::to_string(policy.eps_rel));
    }
    if (policy.max_jumps == 0) {
        throw ParameterError("max_jumps must be positive");
    }
    eps_ = policy.eps_rel * level;

    using namespace model;
    const Family& f = spec_.family();
    if (std::holds_alternative<NoJumps>(f)) {
        rate_ = 0.0;
        drift_rate_ = spec_.drift();
        return;
    }
    if (const auto* cp = std::get_if<CompoundPoissonFamily>(&f)) {
        // Finite activity: simulate the jump law exactly, no truncation, no compensation.
        rate_ = cp->rate;
        drift_rate_ = spec_.drift();
        return;
    }
    if (const auto* ts = std::get_if<TemperedStableFamily>(&f)) {
        // Thinning envelope: stable jumps with the same alpha and scale; an
        // envelope arrival of size x becomes a real jump with probability e^{-theta x}.
        rate_ = ts->scale * std::pow(eps_, -ts->alpha) / special::gamma_fn(1.0 - ts->alpha);
    } else {
        rate_ = levy_tail(spec_, eps_);
    }
    drift_rate_ = spec_.drift() + (policy_.compensate ? small_jump_drift(spec_, eps_) : 0.0);

    if (std::holds_alternative<TabulatedTailFamily>(f) && rate_ > 0.0) {
        // Geometric bracket table at eighth-octaves, out to negligible tail mass.
        const double step = std::pow(2.0, 0.125);
        double x = eps_;
        for (int k = 0; k < 4096; ++k) {
            const double tv = levy_tail(spec_, x);
            bracket_x_.push_back(x);
            bracket_tail_.push_back(tv);
            if (tv <= 1e-18 * rate_ || x > 1e300) break;
            x *= step;
        }
    }
}

double PreparedSampler::draw_tabulated(rng::PhiloxStream& stream) const {
    const double v = stream.next_unit_open() * rate_;  // target tail value in (0, tail(eps))
    if (v <= bracket_tail_.back()) {
        return bracket_x_.back();  // beyond the table: probability below 1e-18
    }
    // First index with tail < v; the solution lies in [x_{k-1}, x_k].
    std::size_t lo = 0, hi = bracket_tail_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (bracket_tail_[mid] < v) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double a = bracket_x_[lo], b = bracket_x_[hi];
    double fa = bracket_tail_[lo] - v, fb = bracket_tail_[hi] - v;
    if (fa <= 0.0) return a;
    // Illinois refinement of tail(x) = v on the bracket.
    for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
        double m = (a * fb - b * fa) / (fb - fa);
        if (!(m > a && m < b)) m = 0.5 * (a + b);
        const double fm = model::levy_tail(spec_, m) - v;
        if (fm > 0.0) {
            a = m;
            fa = fm;
            fb *= 0.5;
        } else {
            b = m;
            fb = fm;
            fa *= 0.5;
        }
    }
    return 0.5 * (a + b);
}

PassageSample PreparedSampler::sample(rng::PhiloxStream& stream) const {
    const double s = level_;
    if (!(rate_ > 0.0)) {
        if (drift_rate_ > 0.0) {
            return {s, s / drift_rate_, s, 0.0, true};
        }
        throw NeverCrossesError("no jumps above the cutoff and zero drift: level " +
                                std::to_string(s) + " is never crossed");
    }
    const DrawPlan plan = plan_for(spec_, eps_);
    double t = 0.0;
    double x = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        const double w = stream.next_exp(rate_);
        if (drift_rate_ > 0.0) {
            const double x_at_jump = x + drift_rate_ * w;
            if (x_at_jump > s) {
                return {s, t + (s - x) / drift_rate_, s, 0.0, true};
            }
            x = x_at_jump;
        }
        t += w;
        if (++count > policy_.max_jumps) {
            throw ResourceError("jump budget exceeded (" + std::to_string(policy_.max_jumps) +
                                ") at level " + std::to_string(s) +
                                "; eps_rel is too small for this configuration");
        }
        double j = 0.0;
        switch (plan.kind) {
            case DrawKind::stable:
                j = plan.xmin * std::pow(stream.next_unit_open(), -plan.inv_alpha);
                break;
            case DrawKind::tempered: {
                const double prop = plan.xmin * std::pow(stream.next_unit_open(), -plan.inv_alpha);
                if (stream.next_double() <= std::exp(-plan.theta * prop)) j = prop;
                break;
            }
            case DrawKind::cp_exp:
                j = -plan.mean * std::log(stream.next_unit_open());
                break;
            case DrawKind::cp_pareto:
                j = plan.xmin * std::pow(stream.next_unit_open(), -plan.inv_alpha);
                break;
            case DrawKind::tabulated:
                j = draw_tabulated(stream);
                break;
            case DrawKind::none:
                break;
        }
        if (j > 0.0) {
            const double x_pre = x;
            x += j;
            if (x > s) {
                return {s, t, x_pre, x - s, false};
            }
        }
    }
}

PassageSample sample_passage(const model::SubordinatorSpec& spec, double s,
                             const TruncationPolicy& policy, rng::PhiloxStream& stream) {
    return PreparedSampler(spec, s, policy).sample(stream);
}

double small_jump_drift(const model::SubordinatorSpec& spec, double eps) {
    if (!(eps > 0.0)) {
        throw DomainError("small_jump_drift requires eps > 0, got " + std::to_string(eps));
    }
    using namespace model;
    const Family& f = spec.family();
    if (std::holds_alternative<NoJumps>(f)) return 0.0;
    if (const auto* cp = std::get_if<CompoundPoissonFamily>(&f)) {
        if (const auto* pj = std::get_if<ParetoJumps>(&cp->jumps)) {
            if (pj->xmin >= eps) return 0.0;  // no mass below eps
        }
    }
    const auto tail = [&spec](double x) { return model::levy_tail(spec, x); };
    const double integral = quad::tail_integral_to(tail, eps);
    return std::fmax(integral - eps * model::levy_tail(spec, eps), 0.0);
}

unsigned worker_count() {
    if (const char* env = std::getenv("SUBORDINATOR_LAB_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw ParameterError("SUBORDINATOR_LAB_WORKERS must be a positive integer, got \"" +
                                 std::string(env) + "\"");
        }
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace {

[[noreturn]] void rethrow_tagged(std::exception_ptr ep, std::uint64_t replica) {
    const std::string tag = "replica " + std::to_string(replica) + ": ";
    try {
        std::rethrow_exception(ep);
    } catch (const NeverCrossesError& e) {
        throw NeverCrossesError(tag + e.what());
    } catch (const ResourceError& e) {
        throw ResourceError(tag + e.what());
    } catch (const NumericError& e) {
        throw NumericError(tag + e.what());
    } catch (const ParameterError& e) {
        throw ParameterError(tag + e.what());
    } catch (const DomainError& e) {
        throw DomainError(tag + e.what());
    } catch (const SpecError& e) {
        throw SpecError(tag + e.what());
    } catch (const std::exception& e) {
        throw Error(tag + e.what());
    }
}

}  // namespace

std::vector<PassageSample> batch_prepared(const PreparedSampler& prepared, std::uint64_t n,
                                          std::uint64_t seed, std::uint64_t stream_base) {
    if (n < 1) throw ParameterError("batch size must be at least 1");
    std::vector<PassageSample> out(n);
    const std::uint64_t workers = std::min<std::uint64_t>(worker_count(), n);
    if (workers <= 1) {
        std::uint64_t i = 0;
        try {
            for (; i < n; ++i) {
                rng::PhiloxStream g(seed, stream_base + i);
                out[i] = prepared.sample(g);
            }
        } catch (...) {
            rethrow_tagged(std::current_exception(), i);
        }
        return out;
    }
    // Strided fan-out. Each worker stops at its first error; the smallest
    // erroring replica wins, which matches the single-threaded outcome.
    std::mutex err_mutex;
    std::uint64_t err_replica = UINT64_MAX;
    std::exception_ptr err;
    auto run = [&](std::uint64_t w) {
        for (std::uint64_t i = w; i < n; i += workers) {
            try {
                rng::PhiloxStream g(seed, stream_base + i);
                out[i] = prepared.sample(g);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_replica) {
                    err_replica = i;
                    err = std::current_exception();
                }
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::uint64_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& th : pool) th.join();
    if (err) rethrow_tagged(err, err_replica);
    return out;
}

std::vector<PassageSample> batch_passages(const model::SubordinatorSpec& spec, double s,
                                          const TruncationPolicy& policy, std::uint64_t n,
                                          std::uint64_t seed) {
    const PreparedSampler prepared(spec, s, policy);
    return batch_prepared(prepared, n, seed, 0);
}

void write_samples_csv(std::ostream& os, const std::vector<PassageSample>& samples) {
    os << "replica,level,crossing_time,undershoot,overshoot,crept\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const PassageSample& p = samples[i];
        os << i << ',' << fmt::g17(p.level) << ',' << fmt::g17(p.crossing_time) << ','
           << fmt::g17(p.undershoot) << ',' << fmt::g17(p.overshoot) << ',' << (p.crept ? 1 : 0)
           << '\n';
    }
}

}  // namespace sublab::sampler
