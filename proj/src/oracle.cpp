#include "hcsel/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hcsel/errors.hpp"
#include "hcsel/rng.hpp"

namespace hcsel {

void Oracle::check_contract(const OracleResponse& resp) const {
    if (!(resp.loss >= 0.0) || !std::isfinite(resp.loss))
        throw OracleContractViolation("oracle returned a negative or non-finite loss");
    if (static_cast<int>(resp.features.size()) != feature_dim())
        throw OracleContractViolation("oracle feature dimensionality mismatch");
    for (double v : resp.features)
        if (!std::isfinite(v))
            throw OracleContractViolation("oracle returned non-finite features");
}

OracleResponse Oracle::evaluate(const ImageTensor& image, const Selection& sel) const {
    OracleResponse resp = eval_impl(image, sel);
    check_contract(resp);
    loss_calls_.fetch_add(1, std::memory_order_relaxed);
    feature_calls_.fetch_add(1, std::memory_order_relaxed);
    return resp;
}

double Oracle::loss(const ImageTensor& image, const Selection& sel) const {
    OracleResponse resp = eval_impl(image, sel);
    check_contract(resp);
    loss_calls_.fetch_add(1, std::memory_order_relaxed);
    return resp.loss;
}

std::vector<double> Oracle::features(const ImageTensor& image, const Selection& sel) const {
    OracleResponse resp = eval_impl(image, sel);
    check_contract(resp);
    feature_calls_.fetch_add(1, std::memory_order_relaxed);
    return std::move(resp.features);
}

std::vector<double> Oracle::perturbed_features(const ImageTensor& image, const Selection& sel,
                                               const PerturbationSpec& spec,
                                               std::uint64_t seed) const {
    if (spec.sigma < 0.0) throw InvalidPerturbation("perturbation sigma must be >= 0");
    if (spec.sigma == 0.0) return features(image, sel);
    std::vector<double> f = perturb_impl(image, sel, spec, seed);
    if (static_cast<int>(f.size()) != feature_dim())
        throw OracleContractViolation("oracle feature dimensionality mismatch");
    feature_calls_.fetch_add(1, std::memory_order_relaxed);
    return f;
}

std::vector<double> Oracle::perturb_impl(const ImageTensor& image, const Selection& sel,
                                         const PerturbationSpec& spec,
                                         std::uint64_t seed) const {
    ImageTensor noisy = mask_apply(image, sel);
    const std::vector<std::uint8_t> kept = keep_mask(image, sel);
    Rng rng(mix_seed(seed, 0x70457572ULL));
    for (int r = 0; r < noisy.height; ++r)
        for (int col = 0; col < noisy.width; ++col) {
            if (!kept[static_cast<std::size_t>(r) * noisy.width + col]) {
                // Keep the noise stream aligned with the pixel index so the
                // draw for a given pixel does not depend on the selection.
                for (int c = 0; c < noisy.channels; ++c) rng.normal();
                continue;
            }
            for (int c = 0; c < noisy.channels; ++c) {
                const double z = rng.normal();
                double v = noisy.at(c, r, col);
                v = spec.kind == PerturbationKind::gaussian ? v + spec.sigma * z
                                                            : v * (1.0 + spec.sigma * z);
                noisy.at(c, r, col) = std::clamp(v, 0.0, 1.0);
            }
        }
    OracleResponse resp = eval_impl(noisy, Selection::whole());
    return std::move(resp.features);
}

} // namespace hcsel
