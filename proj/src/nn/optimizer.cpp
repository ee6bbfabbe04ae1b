#include "freqnet/nn/optimizer.hpp"

#include <cmath>

namespace freqnet::nn {

template <typename T>
void Adam<T>::step(const std::vector<Param<T>*>& params) {
    if (m_.empty()) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i].assign(params[i]->size(), 0.0);
            v_[i].assign(params[i]->size(), 0.0);
        }
    }
    if (m_.size() != params.size())
        throw std::invalid_argument("Adam: parameter list changed between steps");

    ++t_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));

    for (std::size_t i = 0; i < params.size(); ++i) {
        Param<T>& p = *params[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double g = static_cast<double>(p.grad[j]);
            m_[i][j] = b1 * m_[i][j] + (1.0 - b1) * g;
            v_[i][j] = b2 * v_[i][j] + (1.0 - b2) * g * g;
            const double mhat = m_[i][j] / bc1;
            const double vhat = v_[i][j] / bc2;
            p.value[j] = static_cast<T>(
                p.value[j] -
                config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon));
        }
    }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace freqnet::nn
