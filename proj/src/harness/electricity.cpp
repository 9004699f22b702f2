#include "fcd/harness/electricity.hpp"

#include "fcd/baselines.hpp"
#include "fcd/conddist.hpp"
#include "fcd/error.hpp"
#include "fcd/flm.hpp"
#include "fcd/harness/metrics.hpp"
#include "fcd/harness/seasonal.hpp"
#include "fcd/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fcd::harness {

std::vector<bool> test_mask(const std::vector<int>& years, const std::vector<int>& months, std::size_t per_year,
                            std::uint64_t seed) {
    if (years.size() != months.size()) throw UsageError("calendar columns differ in length");
    std::map<int, std::set<int>> present;
    for (std::size_t i = 0; i < years.size(); ++i) present[years[i]].insert(months[i]);
    const rng::Stream root = rng::Stream(seed).split("test-months");
    std::map<int, std::set<int>> chosen;
    for (const auto& [year, ms] : present) {
        std::vector<int> pool(ms.begin(), ms.end());
        rng::Stream s = root.split(static_cast<std::uint64_t>(year));
        // Partial Fisher–Yates on the months present that year.
        const std::size_t take = std::min(per_year, pool.size());
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(s() % (pool.size() - i));
            std::swap(pool[i], pool[j]);
            chosen[year].insert(pool[i]);
        }
    }
    std::vector<bool> mask(years.size());
    for (std::size_t i = 0; i < years.size(); ++i) mask[i] = chosen[years[i]].contains(months[i]);
    return mask;
}

EntropyResult run_entropy_evaluation(const EntropyInputs& in, const EntropyConfig& config) {
    const std::size_t days = in.price.size();
    if (in.demand.size() != days || in.wind.size() != days) throw UsageError("price, demand and wind differ in length");
    if (days <= config.order + 2) throw UsageError("series too short for the requested lag order");
    const Calendar cal = consecutive_days(config.start_year, config.start_month, config.start_day, days);
    const std::vector<bool> test = test_mask(cal.year, cal.month, config.test_months_per_year, config.seed);
    std::vector<bool> train(days);
    for (std::size_t i = 0; i < days; ++i) train[i] = !test[i];

    const auto season = [&](const std::vector<Curve>& z, bool weekly) {
        return SeasonalModel::fit(z, cal.day_of_year, cal.day_of_week, config.window, weekly, train);
    };
    const SeasonalModel price_season = season(in.price, true);
    const std::vector<Curve> price = price_season.remove(in.price, cal.day_of_year, cal.day_of_week);
    const std::vector<Curve> demand = season(in.demand, true).remove(in.demand, cal.day_of_year, cal.day_of_week);
    const std::vector<Curve> wind = season(in.wind, false).remove(in.wind, cal.day_of_year, cal.day_of_week);

    std::vector<Covariate> exog;
    exog.reserve(days);
    for (std::size_t i = 0; i < days; ++i) exog.emplace_back(std::vector<Curve>{demand[i], wind[i]}, std::vector<double>{});
    const auto [all, design] = build_far_design(price, config.order, std::span<const Covariate>(exog));

    RegressionSample train_sample;
    std::vector<std::size_t> test_rows;
    for (std::size_t r = 0; r < design.rows.size(); ++r) {
        const std::size_t day = design.rows[r].response;
        if (train[day]) {
            train_sample.ys.push_back(all.ys[r]);
            train_sample.xs.push_back(all.xs[r]);
        } else {
            test_rows.push_back(r);
        }
    }
    if (test_rows.empty()) throw DegenerateInputError("the test set is empty");

    FitOptions options;
    options.truncation = TruncationRule::pve_rule(config.pve);
    const FittedFLM model = fit(train_sample, options);
    const NoiseBank bank = boot_bank(model);

    // Forecasts and observed prices on the original scale.
    std::vector<Curve> forecast;
    std::vector<Curve> observed;
    for (std::size_t r : test_rows) {
        const std::size_t day = design.rows[r].response;
        const Curve s = price_season.component(cal.day_of_year[day], cal.day_of_week[day]);
        forecast.push_back(predict(model, all.xs[r]) + s);
        observed.push_back(in.price[day]);
    }
    std::vector<Curve> train_observed;
    for (std::size_t r = 0; r < design.rows.size(); ++r) {
        if (train[design.rows[r].response]) train_observed.push_back(in.price[design.rows[r].response]);
    }

    // Shared pieces for the baselines.
    const Eigen::MatrixXd sq = pairwise_sq_distances(train_sample.xs);
    const Eigen::VectorXd scaling = coordinate_scaling(model.layout);
    const Eigen::MatrixXd directions = model.x_spectrum.eigenvectors.leftCols(model.truncation);
    const Eigen::VectorXd coord_mean = scaling.cwiseProduct(model.x_mean);
    auto scores_of = [&](const Covariate& x) -> Eigen::VectorXd {
        return directions.transpose() * (coordinates(x) - coord_mean);
    };
    Eigen::MatrixXd train_scores(static_cast<Eigen::Index>(train_sample.size()), model.truncation);
    for (std::size_t k = 0; k < train_sample.size(); ++k) {
        train_scores.row(static_cast<Eigen::Index>(k)) = scores_of(train_sample.xs[k]).transpose();
    }
    std::vector<Eigen::VectorXd> test_scores;
    std::vector<Eigen::VectorXd> test_coords;
    for (std::size_t r : test_rows) {
        test_scores.push_back(scores_of(all.xs[r]));
        test_coords.push_back(coordinates(all.xs[r]));
    }

    EntropyResult result;
    result.train_size = train_sample.size();
    result.test_size = test_rows.size();
    result.truncation = model.truncation;
    for (double z : config.zs) {
        for (double alpha : config.alphas) {
            const EventSet event = EventSet::level(alpha, z);
            std::vector<bool> labels;
            std::vector<double> p_boot, p_glm, p_nw;
            for (const auto& y : observed) labels.push_back(event.contains(y));
            for (const auto& f : forecast) p_boot.push_back(estimate_prob(f, bank, event).value);

            std::vector<bool> train_labels;
            for (const auto& y : train_observed) train_labels.push_back(event.contains(y));
            const bool one_class =
                std::all_of(train_labels.begin(), train_labels.end(), [&](bool b) { return b == train_labels.front(); });
            if (one_class) {
                const double c = train_labels.front() ? 1.0 : 0.0;
                p_glm.assign(test_rows.size(), c);
                p_nw.assign(test_rows.size(), c);
            } else {
                const FGLMModel glm = fglm_fit_scores(train_scores, train_labels, Link::logit);
                for (const auto& s : test_scores) p_glm.push_back(fglm_prob_scores(glm, s));
                const double h = nw_select_bandwidth(sq, train_labels).bandwidth;
                const NWEstimator nw(train_sample.xs, train_labels, h);
                for (const auto& c : test_coords) p_nw.push_back(nw.prob_coords(c));
            }
            const double rate = static_cast<double>(std::count(labels.begin(), labels.end(), true)) /
                                static_cast<double>(labels.size());
            result.cells.push_back({alpha, z, cross_entropy(labels, p_boot), cross_entropy(labels, p_glm),
                                    cross_entropy(labels, p_nw), rate});
        }
    }
    return result;
}

ExperimentReport entropy_report(const EntropyConfig& config, const EntropyResult& result) {
    ExperimentReport rep;
    rep.name = "cross_entropy";
    rep.seed = config.seed;
    rep.replications = 1;
    rep.value_columns = {"alpha", "z", "boot", "glm", "nw", "positive_rate", "train_size", "test_size", "truncation"};
    for (const auto& c : result.cells) {
        rep.rows.push_back({{},
                            {c.alpha, c.z, c.boot, c.glm, c.nw, c.positive_rate, static_cast<double>(result.train_size),
                             static_cast<double>(result.test_size), static_cast<double>(result.truncation)}});
    }
    return rep;
}

}  // namespace fcd::harness
