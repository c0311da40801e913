#include "lrc/models.hpp"

#include <cmath>
#include <stdexcept>

namespace lrc {

namespace {

struct Entry {
    const char* name;
    const char* description;
    Params defaults;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = {
        {"binary_bd", "binary fission X->2X (lambda) and death X->0 (mu)",
         {{"lambda", 1.0}, {"mu", 2.0}, {"x0", 1.0}, {"t", 1.0}}},
        {"bdi", "birth-death with immigration",
         {{"lambda", 0.9}, {"mu", 1.0}, {"nu", 2.0}, {"x0", 0.0}, {"t", 5.0}}},
        {"mm_inf", "M/M/inf: immigration nu, per-particle death mu",
         {{"nu", 2.0}, {"mu", 1.0}, {"x0", 0.0}, {"t", 1.0}}},
        {"signed_mm_inf", "M/M/inf with signed immigration; diagonal taken verbatim",
         {{"nu", -1.0}, {"mu", 1.0}, {"x0", 0.0}, {"t", 1.0}}},
        {"schlogl", "Schlogl bistable: affine immigration + death, remainder 2X<->3X",
         {{"k1", 3.0}, {"km1", 0.6}, {"k2", 0.25}, {"km2", 2.95}, {"V", 25.0}, {"N", 200.0},
          {"x0", 0.0}, {"t", 2.0}}},
        {"predator_prey_K", "K-species immigration + death with cyclic bilinear predation",
         {{"K", 2.0}, {"nu_X", 10.0}, {"mu_X", 1.0}, {"nu_Y", 0.5}, {"mu_Y", 1.0},
          {"gamma", 0.1}, {"N", 14.0}, {"x0", 5.0}, {"y0", 2.0}, {"t", 2.0}}},
        {"telegraph_gr", "G/R elongation chain: gating in A, elongation in B",
         {{"nT", 6.0}, {"k_on", 0.35}, {"k_off", 0.55}, {"k_chain", 6.0}, {"mu", 1.0},
          {"t", 4.0}}},
        {"coag_branching", "BDI affine part with weak pairwise coagulation remainder",
         {{"lambda", 0.9}, {"mu", 1.0}, {"nu", 2.0}, {"eps", 1e-3}, {"N", 150.0},
          {"x0", 0.0}, {"t", 5.0}}},
        {"telegraph_two_state", "two-state telegraph: production nu only in the on state",
         {{"k_on", 1.0}, {"k_off", 0.5}, {"nu", 10.0}, {"mu", 1.0}, {"t", 1.0}}},
        {"cyclic_cross", "K-type birth-death with cyclic cross-production X_i -> X_i + X_{i+1}",
         {{"K", 4.0}, {"lambda", 0.95}, {"mu", 1.0}, {"alpha", 0.6}, {"x0", 1.0}, {"t", 1.0}}},
    };
    return r;
}

const Entry& find_entry(const std::string& name) {
    for (const auto& e : registry())
        if (name == e.name) return e;
    throw std::invalid_argument("unknown model: " + name);
}

double count_param(const Params& p, const std::string& key) {
    const double v = p.at(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e7)
        throw std::invalid_argument("parameter " + key + " must be a nonnegative integer");
    return v;
}

void require_positive(const Params& p, const std::string& key) {
    if (!(p.at(key) > 0.0)) throw std::invalid_argument("parameter " + key + " must be > 0");
}

void require_nonnegative(const Params& p, const std::string& key) {
    if (!(p.at(key) >= 0.0)) throw std::invalid_argument("parameter " + key + " must be >= 0");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> zoo_catalog() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : registry()) out.emplace_back(e.name, e.description);
    return out;
}

Params zoo_defaults(const std::string& name) { return find_entry(name).defaults; }

LinearRateGenerator birth_death(double lambda, double mu, double nu) {
    std::map<int, Rate> off;
    if (lambda != 0.0) off[1].alpha = lambda;
    if (mu != 0.0) off[-1].alpha = mu;
    if (nu != 0.0) off[1].beta = nu;
    return LinearRateGenerator::markov(std::move(off));
}

MatrixTelegraphModel gr_chain(std::size_t nT, double k_on, double k_off, double k_chain,
                              double mu) {
    if (nT < 3) throw std::invalid_argument("gr_chain: nT must be >= 3");
    // States: 0 = G_off, 1 = G_on, 2..nT-1 = R_1..R_{nT-2}.
    const auto n = static_cast<Eigen::Index>(nT);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
    A(1, 0) = k_on;
    A(0, 1) = k_off;
    B(2, 1) = k_chain;
    for (Eigen::Index i = 2; i + 1 < n; ++i) B(i + 1, i) = k_chain;
    B(1, n - 1) = k_chain;
    for (Eigen::Index c = 0; c < n; ++c) A(c, c) -= A.col(c).sum() + B.col(c).sum();
    MatrixTelegraphModel m{A, B, mu, true};
    m.validate();
    return m;
}

SparseOperator schlogl_remainder(double k1, double km1, double V, std::size_t N) {
    std::vector<SparseOperator::Triplet> t;
    for (std::size_t n = 0; n <= N; ++n) {
        const double x = static_cast<double>(n);
        const double up = k1 * x * (x - 1.0) / V;
        const double down = km1 * x * (x - 1.0) * (x - 2.0) / (V * V);
        const int c = static_cast<int>(n);
        if (up != 0.0) {
            if (n < N) t.emplace_back(c + 1, c, up);
            t.emplace_back(c, c, -up);
        }
        if (down != 0.0) {
            t.emplace_back(c - 1, c, down);
            t.emplace_back(c, c, -down);
        }
    }
    return SparseOperator(N + 1, t, Band{1, 1});
}

SparseOperator predation_remainder(std::size_t K, double gamma, std::size_t N) {
    const std::size_t w = N + 1;
    std::size_t total = 1;
    std::vector<std::size_t> stride(K);
    for (std::size_t d = K; d-- > 0;) {
        stride[d] = total;
        total *= w;
    }
    const std::size_t pairs = K == 2 ? 1 : K;
    std::vector<SparseOperator::Triplet> t;
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < pairs; ++i) {
            const std::size_t j = (i + 1) % K;
            const std::size_t xi = (flat / stride[i]) % w, xj = (flat / stride[j]) % w;
            const double rate = gamma * static_cast<double>(xi) * static_cast<double>(xj);
            if (rate == 0.0) continue;
            const int c = static_cast<int>(flat);
            t.emplace_back(c, c, -rate);
            if (xj < N) t.emplace_back(static_cast<int>(flat - stride[i] + stride[j]), c, rate);
        }
    }
    return SparseOperator(total, t);
}

SparseOperator coagulation_remainder(std::size_t N) {
    std::vector<SparseOperator::Triplet> t;
    for (std::size_t n = 2; n <= N; ++n) {
        const double x = static_cast<double>(n);
        const double rate = 0.5 * x * (x - 1.0);
        const int c = static_cast<int>(n);
        t.emplace_back(c - 1, c, rate);
        t.emplace_back(c, c, -rate);
    }
    return SparseOperator(N + 1, t, Band{0, 1});
}

Model model_zoo(const std::string& name, const Params& overrides) {
    const Entry& e = find_entry(name);
    Model m;
    m.name = name;
    m.params = e.defaults;
    for (const auto& [k, v] : overrides) {
        if (!m.params.count(k))
            throw std::invalid_argument("model " + name + ": unknown parameter " + k);
        if (!std::isfinite(v))
            throw std::invalid_argument("model " + name + ": parameter " + k + " not finite");
        m.params[k] = v;
    }
    const Params& p = m.params;
    require_nonnegative(p, "t");
    m.horizon = p.at("t");

    if (name == "binary_bd") {
        require_nonnegative(p, "lambda");
        require_nonnegative(p, "mu");
        m.object = birth_death(p.at("lambda"), p.at("mu"));
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "bdi") {
        require_nonnegative(p, "lambda");
        require_positive(p, "mu");
        require_nonnegative(p, "nu");
        m.object = birth_death(p.at("lambda"), p.at("mu"), p.at("nu"));
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "mm_inf") {
        require_nonnegative(p, "nu");
        require_positive(p, "mu");
        m.object = birth_death(0.0, p.at("mu"), p.at("nu"));
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "signed_mm_inf") {
        require_positive(p, "mu");
        const double nu = p.at("nu"), mu = p.at("mu");
        m.object = LinearRateGenerator({{-1, {mu, 0.0}}, {0, {-mu, -nu}}, {1, {0.0, nu}}});
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "schlogl") {
        for (const char* k : {"k1", "km1", "k2", "km2"}) require_nonnegative(p, k);
        require_positive(p, "V");
        const auto N = static_cast<std::size_t>(count_param(p, "N"));
        const double V = p.at("V");
        HybridModel h;
        h.cap = N;
        h.affine = {birth_death(0.0, p.at("km2"), p.at("k2") * V)};
        h.remainder = schlogl_remainder(p.at("k1"), p.at("km1"), V, N);
        h.validate();
        m.object = std::move(h);
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "predator_prey_K") {
        const auto K = static_cast<std::size_t>(count_param(p, "K"));
        if (K < 2) throw std::invalid_argument("predator_prey_K: K must be >= 2");
        for (const char* k : {"nu_X", "nu_Y", "gamma"}) require_nonnegative(p, k);
        require_positive(p, "mu_X");
        require_positive(p, "mu_Y");
        const auto N = static_cast<std::size_t>(count_param(p, "N"));
        HybridModel h;
        h.cap = N;
        // Species 0 uses the X parameters, all others the Y parameters.
        for (std::size_t i = 0; i < K; ++i)
            h.affine.push_back(i == 0 ? birth_death(0.0, p.at("mu_X"), p.at("nu_X"))
                                      : birth_death(0.0, p.at("mu_Y"), p.at("nu_Y")));
        h.remainder = predation_remainder(K, p.at("gamma"), N);
        h.validate();
        m.object = std::move(h);
        m.initial_counts.assign(K, static_cast<std::size_t>(count_param(p, "y0")));
        m.initial_counts[0] = static_cast<std::size_t>(count_param(p, "x0"));
    } else if (name == "telegraph_gr") {
        const auto nT = static_cast<std::size_t>(count_param(p, "nT"));
        for (const char* k : {"k_on", "k_off", "k_chain"}) require_nonnegative(p, k);
        require_positive(p, "mu");
        m.object = gr_chain(nT, p.at("k_on"), p.at("k_off"), p.at("k_chain"), p.at("mu"));
        m.initial_hidden = 0;
    } else if (name == "coag_branching") {
        require_nonnegative(p, "lambda");
        require_positive(p, "mu");
        require_nonnegative(p, "nu");
        require_nonnegative(p, "eps");
        const auto N = static_cast<std::size_t>(count_param(p, "N"));
        HybridModel h;
        h.cap = N;
        h.affine = {birth_death(p.at("lambda"), p.at("mu"), p.at("nu"))};
        h.remainder = coagulation_remainder(N).scaled(p.at("eps"));
        h.validate();
        m.object = std::move(h);
        m.initial_counts = {static_cast<std::size_t>(count_param(p, "x0"))};
    } else if (name == "telegraph_two_state") {
        for (const char* k : {"k_on", "k_off", "nu"}) require_nonnegative(p, k);
        require_positive(p, "mu");
        // State 0 = off, 1 = on.
        Eigen::MatrixXd A(2, 2), B = Eigen::MatrixXd::Zero(2, 2);
        const double kon = p.at("k_on"), koff = p.at("k_off"), nu = p.at("nu");
        A << -kon, koff, kon, -koff - nu;
        B(1, 1) = nu;
        MatrixTelegraphModel tm{A, B, p.at("mu"), true};
        tm.validate();
        m.object = tm;
        m.initial_hidden = 0;
    } else if (name == "cyclic_cross") {
        const auto K = static_cast<std::size_t>(count_param(p, "K"));
        if (K < 1) throw std::invalid_argument("cyclic_cross: K must be >= 1");
        for (const char* k : {"lambda", "mu", "alpha"}) require_nonnegative(p, k);
        std::vector<std::map<MultiIndex, double>> tables(K);
        for (std::size_t i = 0; i < K; ++i) {
            MultiIndex birth(K, 0), death(K, 0), cross(K, 0);
            birth[i] = 1;
            death[i] = -1;
            cross[(i + 1) % K] += 1;
            if (p.at("lambda") != 0.0) tables[i][birth] += p.at("lambda");
            if (p.at("mu") != 0.0) tables[i][death] += p.at("mu");
            if (p.at("alpha") != 0.0) tables[i][cross] += p.at("alpha");
        }
        m.object = MultiTypeGenerator::markov(K, std::move(tables), {});
        m.initial_counts.assign(K, 0);
        m.initial_counts[0] = static_cast<std::size_t>(count_param(p, "x0"));
    }
    return m;
}

std::vector<double> initial_scalar(const Model& m, std::size_t N) {
    if (m.initial_counts.size() != 1)
        throw std::invalid_argument("initial_scalar: model is not scalar");
    std::vector<double> x(N + 1, 0.0);
    if (m.initial_counts[0] > N) throw std::invalid_argument("initial count outside window");
    x[m.initial_counts[0]] = 1.0;
    return x;
}

Tensor initial_tensor(const Model& m, std::size_t N) {
    for (auto c : m.initial_counts)
        if (c > N) throw std::invalid_argument("initial count outside window");
    return Tensor::delta(m.initial_counts.size(), N, m.initial_counts);
}

}  // namespace lrc
