#pragma once
#include <functional>
#include <span>
#include <vector>

namespace roughpath {

// Grid-evaluated control: omega(t_i, t_j) >= 0, zero on the diagonal,
// superadditive (asserted numerically, not enforced on construction).
class Control {
public:
    Control(std::vector<double> grid, std::vector<double> table);  // (L+1)^2 row-major

    static Control from_function(std::vector<double> grid,
                                 const std::function<double(double, double)>& omega);

    const std::vector<double>& grid() const { return grid_; }
    std::size_t points() const { return grid_.size(); }

    double operator()(std::size_t i, std::size_t j) const;
    double at_times(double s, double t) const;  // nearest grid pair lookup

    // max over i<j<k of omega(i,j)+omega(j,k)-omega(i,k); <= tol means superadditive
    double worst_superadditivity_violation() const;
    double worst_diagonal() const;

private:
    std::vector<double> grid_;
    std::vector<double> table_;
};

}  // namespace roughpath
