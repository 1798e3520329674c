#include "regen/dependence.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "regen/error.hpp"

namespace regen {

namespace {

constexpr double kCorrelationTol = 1e-10;

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::string dependence_kind(const DependenceSpec& dep) {
    static const char* names[] = {"independent", "comonotone", "common_shock", "gaussian_copula"};
    return names[dep.index()];
}

double CycleLaw::mean() const { return marginal_mean(base) + (shock ? marginal_mean(*shock) : 0.0); }

double CycleLaw::second_moment() const {
    if (!shock) return marginal_second_moment(base);
    return marginal_second_moment(base) + 2.0 * marginal_mean(base) * marginal_mean(*shock) +
           marginal_second_moment(*shock);
}

double CycleLaw::survival(double x) const {
    if (!shock) return marginal_survival(base, x);
    return marginal_expectation(*shock, [&](double z) { return marginal_survival(base, x - z); }, 1e-13);
}

bool CycleLaw::arithmetic() const { return is_arithmetic(base) && (!shock || is_arithmetic(*shock)); }

std::vector<CycleLaw> cycle_laws(const DependenceSpec& dep, std::span<const MarginalSpec> marginals) {
    std::vector<CycleLaw> laws;
    laws.reserve(marginals.size());
    const auto* cs = std::get_if<CommonShock>(&dep);
    for (const auto& m : marginals)
        laws.push_back({m, cs ? std::optional<MarginalSpec>(cs->shock) : std::nullopt});
    return laws;
}

CycleVectorSampler::CycleVectorSampler(DependenceSpec dep, std::vector<MarginalSpec> marginals)
    : dep_(std::move(dep)), marginals_(std::move(marginals)) {
    if (marginals_.empty()) throw ConfigError("", "at least one coordinate is required");
    for (std::size_t i = 0; i < marginals_.size(); ++i) {
        try {
            validate_marginal(marginals_[i]);
        } catch (const ConfigError& e) {
            throw e.under("/" + std::to_string(i));
        }
    }
    identical_marginals_ = true;
    for (const auto& m : marginals_) identical_marginals_ = identical_marginals_ && m == marginals_.front();

    if (const auto* cs = std::get_if<CommonShock>(&dep_)) {
        try {
            validate_marginal(cs->shock);
        } catch (const ConfigError& e) {
            throw e.under("/dependence/shock");
        }
    }
    if (const auto* gc = std::get_if<GaussianCopula>(&dep_)) {
        const std::size_t m = marginals_.size();
        const auto& c = gc->correlation;
        if (c.size() != m) throw ConfigError("/dependence/correlation", "matrix dimension must match coordinate count");
        Eigen::MatrixXd mat(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            const std::string row = "/dependence/correlation/" + std::to_string(i);
            if (c[i].size() != m) throw ConfigError(row, "matrix must be square");
            for (std::size_t j = 0; j < m; ++j) {
                if (!std::isfinite(c[i][j])) throw ConfigError(row, "entries must be finite");
                mat(i, j) = c[i][j];
            }
            if (std::abs(c[i][i] - 1.0) > kCorrelationTol) throw ConfigError(row, "diagonal must be 1");
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(c[i][j] - c[j][i]) > kCorrelationTol)
                    throw ConfigError("/dependence/correlation", "matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat);
        if (eig.eigenvalues().minCoeff() < -kCorrelationTol)
            throw ConfigError("/dependence/correlation", "matrix must be positive semidefinite");
        const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const Eigen::MatrixXd factor = eig.eigenvectors() * root.asDiagonal();
        copula_factor_.resize(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) copula_factor_[i * m + j] = factor(i, j);
    }
}

void CycleVectorSampler::sample(RngStream& rng, std::span<double> out) const {
    const std::size_t m = marginals_.size();
    if (out.size() != m) throw DomainError("output span does not match sampler dimension");
    switch (dep_.index()) {
    case 0:  // independent
        for (std::size_t i = 0; i < m; ++i) out[i] = sample_marginal(marginals_[i], rng);
        break;
    case 1: {  // comonotone
        if (identical_marginals_) {
            // F^{-1}(U) is the same number for every coordinate.
            const double x = sample_marginal(marginals_.front(), rng);
            for (auto& v : out) v = x;
            break;
        }
        const double u = rng.uniform();
        for (std::size_t i = 0; i < m; ++i) out[i] = marginal_quantile(marginals_[i], u);
        break;
    }
    case 2: {  // common shock
        const double z = sample_marginal(std::get<CommonShock>(dep_).shock, rng);
        for (std::size_t i = 0; i < m; ++i) out[i] = z + sample_marginal(marginals_[i], rng);
        break;
    }
    case 3: {  // gaussian copula
        double normals[64];
        std::vector<double> heap;
        double* n = normals;
        if (m > 64) {
            heap.resize(m);
            n = heap.data();
        }
        for (std::size_t j = 0; j < m; ++j) n[j] = rng.normal();
        for (std::size_t i = 0; i < m; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < m; ++j) z += copula_factor_[i * m + j] * n[j];
            const double u = std::clamp(standard_normal_cdf(z), 0x1.0p-60, 1.0 - 0x1.0p-53);
            out[i] = marginal_quantile(marginals_[i], u);
        }
        break;
    }
    }
}

std::vector<double> sample_cycle_vector(const DependenceSpec& dep, std::span<const MarginalSpec> marginals,
                                        RngStream& rng) {
    CycleVectorSampler sampler(dep, {marginals.begin(), marginals.end()});
    std::vector<double> out(marginals.size());
    sampler.sample(rng, out);
    return out;
}

}  // namespace regen
