#include "roughpath/functional.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughpath {

Control::Control(std::vector<double> grid, std::vector<double> table)
    : grid_(std::move(grid)), table_(std::move(table)) {
    if (grid_.size() < 2) throw std::invalid_argument("Control: need >= 2 grid points");
    if (table_.size() != grid_.size() * grid_.size())
        throw std::invalid_argument("Control: table size mismatch");
}

Control Control::from_function(std::vector<double> grid,
                               const std::function<double(double, double)>& omega) {
    const std::size_t m = grid.size();
    std::vector<double> table(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) table[i * m + j] = omega(grid[i], grid[j]);
    return Control(std::move(grid), std::move(table));
}

double Control::operator()(std::size_t i, std::size_t j) const {
    if (i >= grid_.size() || j >= grid_.size())
        throw std::out_of_range("Control: index out of range");
    if (i >= j) return 0.0;
    return table_[i * grid_.size() + j];
}

double Control::at_times(double s, double t) const {
    auto nearest = [&](double x) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            double d = std::abs(grid_[i] - x);
            if (d < bd) { bd = d; best = i; }
        }
        return best;
    };
    return (*this)(nearest(s), nearest(t));
}

double Control::worst_superadditivity_violation() const {
    const std::size_t m = grid_.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k)
                worst = std::max(worst, (*this)(i, j) + (*this)(j, k) - (*this)(i, k));
    return worst;
}

double Control::worst_diagonal() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i)
        worst = std::max(worst, std::abs(table_[i * grid_.size() + i]));
    return worst;
}

MultiplicativeFunctional::MultiplicativeFunctional(std::vector<double> grid,
                                                   std::vector<TruncatedTensor> adjacent)
    : grid_(std::move(grid)), adjacent_(std::move(adjacent)) {
    if (grid_.size() < 2) throw std::invalid_argument("MultiplicativeFunctional: need >= 2 grid points");
    if (adjacent_.size() + 1 != grid_.size())
        throw std::invalid_argument("MultiplicativeFunctional: need one increment per grid cell");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw std::invalid_argument("MultiplicativeFunctional: grid must be strictly increasing");
    dim_ = adjacent_.front().dim();
    degree_ = adjacent_.front().degree();
    for (const auto& a : adjacent_) {
        if (a.dim() != dim_ || a.degree() != degree_)
            throw std::invalid_argument("MultiplicativeFunctional: inconsistent increments");
        if (!a.is_group_like())
            throw std::invalid_argument("MultiplicativeFunctional: increment level 0 != 1");
    }
}

MultiplicativeFunctional MultiplicativeFunctional::from_path(const PiecewiseLinearPath& path,
                                                             std::span<const double> grid,
                                                             int degree) {
    std::vector<TruncatedTensor> adj;
    adj.reserve(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        adj.push_back(signature_of_path(path, grid[i], grid[i + 1], degree));
    return MultiplicativeFunctional(std::vector<double>(grid.begin(), grid.end()), std::move(adj));
}

MultiplicativeFunctional MultiplicativeFunctional::from_values(std::span<const double> grid,
                                                               std::span<const double> values,
                                                               int dim, int degree) {
    if (values.size() != grid.size() * static_cast<std::size_t>(dim))
        throw std::invalid_argument("from_values: values size mismatch");
    std::vector<TruncatedTensor> adj;
    adj.reserve(grid.size() - 1);
    std::vector<double> delta(dim);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        for (int c = 0; c < dim; ++c)
            delta[c] = values[(i + 1) * dim + c] - values[i * dim + c];
        adj.push_back(segment_exp(delta, degree));
    }
    return MultiplicativeFunctional(std::vector<double>(grid.begin(), grid.end()), std::move(adj));
}

TruncatedTensor MultiplicativeFunctional::increment(std::size_t i, std::size_t j) const {
    if (i >= j || j >= grid_.size())
        throw std::out_of_range("MultiplicativeFunctional::increment: need i < j within grid");
    TruncatedTensor out = adjacent_[i];
    for (std::size_t k = i + 1; k < j; ++k) out = tensor_mul(out, adjacent_[k]);
    return out;
}

const std::vector<TruncatedTensor>& MultiplicativeFunctional::prefixes() const {
    if (prefixes_.empty()) {
        prefixes_.reserve(grid_.size());
        prefixes_.push_back(TruncatedTensor::identity(dim_, degree_));
        for (const auto& a : adjacent_) prefixes_.push_back(tensor_mul(prefixes_.back(), a));
    }
    return prefixes_;
}

MultiplicativeFunctional lyons_extend(const MultiplicativeFunctional& mf) {
    if (mf.degree() < 1) throw std::invalid_argument("lyons_extend: degree must be >= 1");
    std::vector<TruncatedTensor> adj;
    adj.reserve(mf.intervals());
    for (std::size_t i = 0; i < mf.intervals(); ++i) {
        TruncatedTensor lg = tensor_log(mf.adjacent(i)).truncated(mf.degree() + 1);
        adj.push_back(tensor_exp(lg));
    }
    return MultiplicativeFunctional(mf.grid(), std::move(adj));
}

TruncatedTensor hatted_product(const MultiplicativeFunctional& mf,
                               std::span<const std::size_t> dissection) {
    if (dissection.size() < 2) throw std::invalid_argument("hatted_product: need >= 2 points");
    const int dplus = mf.degree() + 1;
    TruncatedTensor out = TruncatedTensor::identity(mf.dim(), dplus);
    for (std::size_t a = 0; a + 1 < dissection.size(); ++a) {
        if (dissection[a + 1] <= dissection[a])
            throw std::invalid_argument("hatted_product: dissection must be increasing");
        TruncatedTensor inc = mf.increment(dissection[a], dissection[a + 1]).truncated(dplus);
        out = tensor_mul(out, inc);
    }
    return out;
}

TruncatedTensor point_drop_defect(const MultiplicativeFunctional& mf,
                                  std::span<const std::size_t> dissection, std::size_t j) {
    if (dissection.size() < 3)
        throw std::invalid_argument("point_drop_defect: dissection needs an interior point");
    if (j < 1 || j + 1 >= dissection.size())
        throw std::out_of_range("point_drop_defect: j must index an interior point");
    const int N = mf.degree();
    TruncatedTensor left = mf.increment(dissection[j - 1], dissection[j]);
    TruncatedTensor right = mf.increment(dissection[j], dissection[j + 1]);
    TruncatedTensor out(mf.dim(), N + 1);
    auto& top = out.level(N + 1);
    for (int n = 1; n <= N; ++n) {
        const auto& a = left.level(n);
        const auto& b = right.level(N + 1 - n);
        const std::size_t nb = b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double ai = a[i];
            if (ai == 0.0) continue;
            for (std::size_t k = 0; k < nb; ++k) top[i * nb + k] += ai * b[k];
        }
    }
    return out;
}

std::size_t select_drop_point(const Control& omega, std::span<const std::size_t> dissection) {
    if (dissection.size() < 3)
        throw std::invalid_argument("select_drop_point: dissection needs an interior point");
    std::size_t best = 1;
    double bestval = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j + 1 < dissection.size(); ++j) {
        double v = omega(dissection[j - 1], dissection[j + 1]);
        if (v < bestval) { bestval = v; best = j; }
    }
    return best;
}

}  // namespace roughpath
