#include "pldc/cuts.hpp"

namespace pldc {

std::vector<Cut> dedup_cuts(const std::vector<Cut>& cuts, double tol) {
    std::vector<Cut> out;
    for (const auto& c : cuts) {
        bool dup = false;
        for (const auto& kept : out) {
            if (kept.beta.size() != c.beta.size()) continue;
            if (std::abs(kept.alpha - c.alpha) <= tol &&
                (kept.beta - c.beta).lpNorm<Eigen::Infinity>() <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(c);
    }
    return out;
}

}  // namespace pldc
